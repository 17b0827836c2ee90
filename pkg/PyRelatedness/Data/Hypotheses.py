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

"""This module reads and writes the hypothesis files.

Each record gives the k-best candidates of a spotted word::

  image_id <tab> gold <tab> word_1 <tab> score_1 <tab> ... <tab> word_k <tab> score_k

"""

####################################################################################################

__all__ = [
    'HYPOTHESES_KIND',
    'HYPOTHESES_VERSION',
    'load_hypotheses',
    'save_hypotheses',
]

####################################################################################################

import logging

####################################################################################################

from ..Rerank.Hypothesis import Candidate, HypothesisSet
from .Format import ParseError, parse_real, read_records, write_records

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

HYPOTHESES_KIND = 'hypotheses'
HYPOTHESES_VERSION = 1

####################################################################################################

def load_hypotheses(path):

    """Return the list of :class:`HypothesisSet` of a hypothesis file, without context."""

    hypothesis_sets = []
    for line_number, fields in read_records(path, HYPOTHESES_KIND, HYPOTHESES_VERSION):
        if len(fields) < 4 or len(fields) % 2:
            raise ParseError(path, line_number, "expected image id, gold and (word, score) pairs, got {} fields".format(len(fields)))
        image_id, gold = fields[:2]
        if not image_id or not gold.strip():
            raise ParseError(path, line_number, "empty image id or gold word")
        try:
            candidates = [Candidate(word, parse_real(path, line_number, score, 'score'))
                          for word, score in zip(fields[2::2], fields[3::2])]
            hypothesis_sets.append(HypothesisSet(image_id, gold, candidates))
        except ValueError as exception:
            raise ParseError(path, line_number, str(exception))
    _module_logger.info("Loaded {} hypothesis sets from {}".format(len(hypothesis_sets), path))
    return hypothesis_sets

####################################################################################################

def save_hypotheses(path, hypothesis_sets):

    """Write hypothesis sets, a set may also be given as a (set, ranked candidates) pair to write
    the re-ranked order with the final scores.
    """

    def records():
        for item in hypothesis_sets:
            if isinstance(item, HypothesisSet):
                pairs = [(c.word, c.baseline_score) for c in item.candidates]
            else:
                item, ranked = item
                pairs = [(r.word, r.final) for r in ranked]
            fields = [item.image_id, item.gold]
            for word, score in pairs:
                fields += [word, float(score)]
            yield fields

    write_records(path, HYPOTHESES_KIND, HYPOTHESES_VERSION, records())
