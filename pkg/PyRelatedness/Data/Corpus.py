####################################################################################################
#
# PyRelatedness - Semantic relatedness re-ranking for text spotting
# Copyright (C) 2026 PyRelatedness contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#
####################################################################################################

"""This module handles the gold word files, the lexicons, the unigram corpora and the re-ranking
traces.
"""

####################################################################################################

__all__ = [
    'GOLD_KIND',
    'TRACE_FIELDS',
    'load_gold',
    'load_lexicon',
    'save_gold',
    'save_lexicon',
    'save_text',
    'save_traces',
]

####################################################################################################

import logging

####################################################################################################

from ..Tools.Path import ensure_parent_directory
from ..Tools.StringTools import normalize_word
from .Format import ParseError, read_records, write_records

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

GOLD_KIND = 'gold'
GOLD_VERSION = 1

TRACE_KIND = 'trace'
TRACE_VERSION = 1
TRACE_FIELDS = ('image_id', 'rank', 'word', 'baseline', 'relatedness', 'context', 'unigram', 'final')

####################################################################################################

def load_gold(path):

    """Return the list of (image id, gold word) of a gold file, the training corpus."""

    items = []
    for line_number, fields in read_records(path, GOLD_KIND, GOLD_VERSION):
        if len(fields) != 2 or not fields[0] or not normalize_word(fields[1]):
            raise ParseError(path, line_number, "expected image id and gold word")
        items.append((fields[0], normalize_word(fields[1])))
    return items

def save_gold(path, items):
    write_records(path, GOLD_KIND, GOLD_VERSION, items)

####################################################################################################

def load_lexicon(path):

    """Return the set of the words of a lexicon file, one word per line."""

    with open(path, encoding='utf-8') as fh:
        lexicon = frozenset(normalize_word(line) for line in fh if line.strip())
    if not lexicon:
        raise ParseError(path, None, "no records")
    _module_logger.info("Loaded lexicon of {} words from {}".format(len(lexicon), path))
    return lexicon

def save_lexicon(path, words):
    save_text(path, '\n'.join(sorted(set(words))) + '\n')

####################################################################################################

def save_text(path, text):
    ensure_parent_directory(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)

####################################################################################################

def save_traces(path, records):

    """Write the re-ranking audit records, dictionaries with the keys :data:`TRACE_FIELDS`."""

    write_records(path, TRACE_KIND, TRACE_VERSION,
                  ([record[name] for name in TRACE_FIELDS] for record in records))
