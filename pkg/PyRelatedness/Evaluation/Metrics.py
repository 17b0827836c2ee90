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

"""This module implements the accuracy and mean reciprocal rank metrics.

Three accuracies are computed on the top-1 word of each re-ranked list:

* ``full``: over all the records;
* ``dict``: over the records whose gold word is in a lexicon;
* ``list``: over the records whose gold word is among the candidates.

An accuracy with an empty denominator is undefined, which is not the same as 0.

"""

####################################################################################################

__all__ = [
    'DICT',
    'EvalRecord',
    'FULL',
    'LIST',
    'METRIC_MODES',
    'MetricValue',
    'accuracy',
    'mrr',
]

####################################################################################################

from ..Tools.StringTools import normalize_word

####################################################################################################

FULL = 'full'
DICT = 'dict'
LIST = 'list'
METRIC_MODES = (FULL, DICT, LIST)

####################################################################################################

class EvalRecord:

    """This class holds the outcome of the re-ranking of an image.

    Public Attributes:

      :attr:`image_id`

      :attr:`gold`

      :attr:`ranked`
        list of the candidate words after re-ranking

      :attr:`gold_in_lexicon`
        None when no lexicon is known

      :attr:`gold_in_list`

    """

    ##############################################

    def __init__(self, image_id, gold, ranked, gold_in_lexicon=None):
        self.image_id = str(image_id)
        self.gold = normalize_word(gold)
        self.ranked = [normalize_word(word) for word in ranked]
        if not self.ranked:
            raise ValueError("Record {} has no candidate".format(image_id))
        self.gold_in_lexicon = gold_in_lexicon if gold_in_lexicon is None else bool(gold_in_lexicon)

    ##############################################

    @classmethod
    def from_ranking(cls, h, ranked, lexicon=None):
        """Build a record from a hypothesis set and its list of ranked candidates"""
        gold_in_lexicon = None if lexicon is None else h.gold in lexicon
        return cls(h.image_id, h.gold, [item.word for item in ranked], gold_in_lexicon)

    @classmethod
    def from_baseline(cls, h, lexicon=None):
        """Build a record keeping the baseline order"""
        gold_in_lexicon = None if lexicon is None else h.gold in lexicon
        return cls(h.image_id, h.gold, h.words, gold_in_lexicon)

    ##############################################

    @property
    def gold_in_list(self):
        return self.gold in self.ranked

    @property
    def top1(self):
        return self.ranked[0]

    @property
    def is_correct(self):
        return self.top1 == self.gold

    @property
    def gold_rank(self):
        """1-based rank of the gold word, None when it is absent"""
        try:
            return self.ranked.index(self.gold) + 1
        except ValueError:
            return None

    @property
    def reciprocal_rank(self):
        rank = self.gold_rank
        return 0. if rank is None else 1. / rank

    def __repr__(self):
        return 'EvalRecord {0.image_id} gold={0.gold} {0.ranked}'.format(self)

####################################################################################################

class MetricValue:

    """This class holds a ratio with its counts.

    Public Attributes:

      :attr:`numerator`

      :attr:`denominator`

      :attr:`value`
        the ratio, None when the denominator is null

    """

    __slots__ = ('numerator', 'denominator')

    ##############################################

    def __init__(self, numerator, denominator):
        self.numerator = int(numerator)
        self.denominator = int(denominator)

    ##############################################

    @property
    def value(self):
        if self.denominator:
            return self.numerator / self.denominator
        return None

    @property
    def is_defined(self):
        return self.denominator > 0

    def __eq__(self, other):
        return (isinstance(other, MetricValue)
                and (self.numerator, self.denominator) == (other.numerator, other.denominator))

    def __float__(self):
        if not self.is_defined:
            raise ValueError("Undefined metric")
        return float(self.value)

    def __str__(self):
        if self.is_defined:
            return '{:.1f}'.format(100*self.value)
        return 'n/a'

    def __repr__(self):
        return 'MetricValue {0.numerator}/{0.denominator}'.format(self)

    def to_dict(self):
        return dict(value=self.value, numerator=self.numerator, denominator=self.denominator)

####################################################################################################

def accuracy(records, mode, lexicon=None):

    """Return the top-1 accuracy of the records as a :class:`MetricValue`.

    The ``dict`` mode uses *lexicon* when given, otherwise the :attr:`EvalRecord.gold_in_lexicon`
    flags of the records.
    """

    records = list(records)
    if not records:
        raise ValueError("No record to evaluate")
    if mode not in METRIC_MODES:
        raise ValueError("Incorrect mode {}, expected one of {}".format(mode, METRIC_MODES))

    if mode == FULL:
        selected = records
    elif mode == LIST:
        selected = [record for record in records if record.gold_in_list]
    else:
        if lexicon is not None:
            selected = [record for record in records if record.gold in lexicon]
        else:
            if any(record.gold_in_lexicon is None for record in records):
                raise ValueError("The dict accuracy requires a lexicon")
            selected = [record for record in records if record.gold_in_lexicon]

    correct = sum(1 for record in selected if record.is_correct)
    return MetricValue(correct, len(selected))

####################################################################################################

def mrr(records):

    """Return the mean reciprocal rank of the gold words, an absent gold word counts 0."""

    records = list(records)
    if not records:
        raise ValueError("No record to evaluate")
    return sum(record.reciprocal_rank for record in records) / len(records)
