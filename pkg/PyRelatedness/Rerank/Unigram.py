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

"""This module implements a unigram language model with add-alpha smoothing.

With :math:`N` tokens, a vocabulary of :math:`V` words and a smoothing constant :math:`\\alpha`, the
probability of a word is

.. math::

    P(w) = \\frac{count(w) + \\alpha}{N + \\alpha (V + 1)}

The extra slot of the denominator is the mass shared by the out-of-vocabulary words, each of them
gets :math:`\\alpha / (N + \\alpha (V + 1))`.  A null :math:`\\alpha` disables the smoothing.

"""

####################################################################################################

__all__ = [
    'UnigramModel',
    'unigram_prob',
]

####################################################################################################

import logging
import math

from collections import Counter

####################################################################################################

from ..Tools.StringTools import normalize_word, tokenize

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class UnigramModel:

    """Public Attributes:

      :attr:`counts`
        dictionary word -> count

      :attr:`total`
        number of tokens *N*

      :attr:`vocabulary_size`
        *V*

      :attr:`alpha`

    """

    _logger = _module_logger.getChild('UnigramModel')

    DEFAULT_ALPHA = 1.

    ##############################################

    def __init__(self, counts, alpha=DEFAULT_ALPHA):

        alpha = float(alpha)
        if alpha < 0 or math.isnan(alpha):
            raise ValueError("alpha must be >= 0, got {}".format(alpha))
        cleaned = Counter()
        for word, count in dict(counts).items():
            if count < 0 or int(count) != count:
                raise ValueError("Count of {} must be a non negative integer".format(word))
            if count:
                cleaned[normalize_word(word)] += int(count)
        self.counts = dict(cleaned)
        self.total = sum(self.counts.values())
        if not self.total:
            raise ValueError("Empty unigram corpus")
        self.alpha = alpha
        self._denominator = self.total + alpha * (self.vocabulary_size + 1)

    ##############################################

    @classmethod
    def from_tokens(cls, tokens, alpha=DEFAULT_ALPHA):
        return cls(Counter(normalize_word(token) for token in tokens), alpha)

    @classmethod
    def from_text(cls, text, alpha=DEFAULT_ALPHA):
        return cls.from_tokens(tokenize(text), alpha)

    @classmethod
    def from_file(cls, path, alpha=DEFAULT_ALPHA):
        counts = Counter()
        with open(path, encoding='utf-8') as fh:
            for line in fh:
                counts.update(tokenize(line))
        model = cls(counts, alpha)
        cls._logger.info("Unigram model from {}: {} tokens, {} words".format(path, model.total, model.vocabulary_size))
        return model

    ##############################################

    @property
    def vocabulary_size(self):
        return len(self.counts)

    def __contains__(self, word):
        return normalize_word(word) in self.counts

    def count(self, word):
        return self.counts.get(normalize_word(word), 0)

    ##############################################

    def prob(self, word):
        return (self.count(word) + self.alpha) / self._denominator

    @property
    def oov_prob(self):
        return self.alpha / self._denominator

    def log_prob(self, word):
        p = self.prob(word)
        if p == 0:
            return -math.inf
        return math.log(p)

####################################################################################################

def unigram_prob(word, lm):
    return lm.prob(word)
