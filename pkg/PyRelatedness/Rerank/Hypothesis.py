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

"""This module defines the k-best hypotheses of a text spotting system.
"""

####################################################################################################

__all__ = [
    'Candidate',
    'HypothesisSet',
    'MAX_CANDIDATES',
]

####################################################################################################

import math

####################################################################################################

from ..Tools.StringTools import normalize_word
from ..Model.Context import ContextBundle

####################################################################################################

MAX_CANDIDATES = 10

####################################################################################################

class Candidate:

    """Public Attributes:

      :attr:`word`

      :attr:`baseline_score`
        softmax score of the spotting system, in [0, 1]

    """

    __slots__ = ('word', 'baseline_score')

    ##############################################

    def __init__(self, word, baseline_score):
        word = normalize_word(word)
        if not word:
            raise ValueError("Empty candidate word")
        baseline_score = float(baseline_score)
        if not 0 <= baseline_score <= 1 or math.isnan(baseline_score):
            raise ValueError("Baseline score of {} is not in [0, 1]: {}".format(word, baseline_score))
        self.word = word
        self.baseline_score = baseline_score

    ##############################################

    def sort_key(self):
        return (-self.baseline_score, self.word)

    def __eq__(self, other):
        return isinstance(other, Candidate) and (self.word, self.baseline_score) == (other.word, other.baseline_score)

    def __hash__(self):
        return hash((self.word, self.baseline_score))

    def __repr__(self):
        return 'Candidate {0.word} {0.baseline_score}'.format(self)

####################################################################################################

class HypothesisSet:

    """This class holds the k-best candidates spotted for a word of an image.

    The candidates are sorted by decreasing baseline score, equal scores by word.

    Public Attributes:

      :attr:`image_id`

      :attr:`gold`
        ground truth word

      :attr:`candidates`

      :attr:`ctx`
        :class:`ContextBundle` of the image

    """

    ##############################################

    def __init__(self, image_id, gold, candidates, ctx=None):

        candidates = list(candidates)
        if not candidates:
            raise ValueError("Image {} has no candidate".format(image_id))
        if len(candidates) > MAX_CANDIDATES:
            raise ValueError("Image {} has {} candidates, at most {} are supported".format(
                image_id, len(candidates), MAX_CANDIDATES))
        self.image_id = str(image_id)
        self.gold = normalize_word(gold)
        self.candidates = sorted(candidates, key=Candidate.sort_key)
        self.ctx = ctx if ctx is not None else ContextBundle.empty(substitute=True)

    ##############################################

    @property
    def k(self):
        return len(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    @property
    def words(self):
        return [candidate.word for candidate in self.candidates]

    @property
    def gold_in_list(self):
        return self.gold in self.words

    ##############################################

    def truncated(self, k):
        """Return the set restricted to its top-*k* candidates by baseline score"""
        if k < 1:
            raise ValueError("k must be >= 1")
        return HypothesisSet(self.image_id, self.gold, self.candidates[:k], self.ctx)

    def with_context(self, ctx):
        return HypothesisSet(self.image_id, self.gold, self.candidates, ctx)

    ##############################################

    def __eq__(self, other):
        return (isinstance(other, HypothesisSet)
                and (self.image_id, self.gold, self.candidates) == (other.image_id, other.gold, other.candidates))

    def __repr__(self):
        return 'HypothesisSet {0.image_id} gold={0.gold} {0.candidates}'.format(self)
