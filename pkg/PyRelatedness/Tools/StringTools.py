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

"""This module provides the string helpers shared by the text file formats.

All the formats are line oriented and tab separated, reals are written with :func:`repr` so a
load/save round trip is lossless.

"""

####################################################################################################

__all__ = [
    'FIELD_SEPARATOR',
    'join_fields',
    'normalize_word',
    'str_real',
    'tokenize',
]

####################################################################################################

import re

####################################################################################################

FIELD_SEPARATOR = '\t'

_token_split_re = re.compile(r'[\s_]+')

####################################################################################################

def normalize_word(word):

    """Return the normalised form of a word: stripped and lowercased.

    The same normalisation is used at ingestion, for embedding lookup and for gold matching.

    """

    return str(word).strip().lower()

####################################################################################################

def tokenize(text):

    """Split a label or a caption into normalised tokens.  Underscores count as spaces since
    classifier labels are often written ``traffic_light``.

    """

    return [token for token in _token_split_re.split(normalize_word(text)) if token]

####################################################################################################

def str_real(value):
    return repr(float(value))

####################################################################################################

def join_fields(items, separator=FIELD_SEPARATOR):
    values = []
    for item in items:
        if item is not None:
            if isinstance(item, float):
                item = str_real(item)
            values.append(str(item))
    return separator.join(values)
