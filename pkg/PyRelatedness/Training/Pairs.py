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

"""This module builds the training pairs from a corpus of gold words and contexts.
"""

####################################################################################################

__all__ = [
    'SamplingError',
    'TrainingPair',
    'make_pairs',
]

####################################################################################################

import logging
import math

####################################################################################################

from ..Tools.StringTools import normalize_word

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class SamplingError(ValueError):
    pass

####################################################################################################

class TrainingPair:

    """Public Attributes:

      :attr:`candidate`

      :attr:`ctx`
        :class:`ContextBundle`

      :attr:`target`
        relatedness in [0, 1], 1 for a gold word and 0 for a negative

    """

    __slots__ = ('candidate', 'ctx', 'target')

    ##############################################

    def __init__(self, candidate, ctx, target):
        target = float(target)
        if not 0 <= target <= 1 or math.isnan(target):
            raise ValueError("Target {} is not in [0, 1]".format(target))
        self.candidate = normalize_word(candidate)
        if not self.candidate:
            raise ValueError("Empty candidate")
        self.ctx = ctx
        self.target = target

    ##############################################

    @property
    def is_positive(self):
        return self.target >= .5

    def __eq__(self, other):
        return (isinstance(other, TrainingPair)
                and (self.candidate, self.target) == (other.candidate, other.target)
                and self.ctx == other.ctx)

    def __repr__(self):
        return 'TrainingPair {0.candidate} {0.target}'.format(self)

####################################################################################################

def _cooccurring_golds(corpus):

    """Return a dictionary mapping a label to the gold words of the images having this label."""

    golds = {}
    for gold, ctx in corpus:
        for label, _ in ctx.labels:
            golds.setdefault(label, set()).add(gold)
    return golds

####################################################################################################

def make_pairs(corpus, neg_ratio, rng):

    """Return the training pairs of a corpus of (gold word, context) items.

    Each item gives a positive pair and *neg_ratio* negative pairs.  A negative pairs the context of
    the item with the gold word of another image, drawn uniformly among the gold words which differ
    from the gold word of the item and don't appear in its context.  The gold words of the images
    sharing an object or place label with the item are excluded too, unless nothing else is left.

    """

    corpus = [(normalize_word(gold), ctx) for gold, ctx in corpus]
    if not corpus:
        raise ValueError("Empty corpus")
    neg_ratio = int(neg_ratio)
    if neg_ratio < 1:
        raise ValueError("neg_ratio must be >= 1, got {}".format(neg_ratio))

    vocabulary = sorted(set(gold for gold, _ in corpus))
    if len(vocabulary) < 2:
        raise SamplingError("Cannot sample negatives from a corpus of {} distinct gold word".format(len(vocabulary)))
    cooccurring = _cooccurring_golds(corpus)

    pairs = []
    fallbacks = 0
    for gold, ctx in corpus:
        pairs.append(TrainingPair(gold, ctx, 1.))
        excluded = set(ctx.label_terms(include_caption=True))
        excluded.add(gold)
        eligible = [word for word in vocabulary if word not in excluded]
        if not eligible:
            raise SamplingError("No negative word available for gold word {}".format(gold))
        related = set()
        for label, _ in ctx.labels:
            related |= cooccurring[label]
        unrelated = [word for word in eligible if word not in related]
        if unrelated:
            eligible = unrelated
        else:
            fallbacks += 1
        for index in rng.integers(0, len(eligible), size=neg_ratio):
            pairs.append(TrainingPair(eligible[index], ctx, 0.))

    if fallbacks:
        _module_logger.warning("{} items sample their negatives among co-occurring gold words".format(fallbacks))
    _module_logger.info("{} pairs from {} items, {} distinct gold words".format(
        len(pairs), len(corpus), len(vocabulary)))
    return pairs
