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

####################################################################################################

import unittest

import numpy as np
from numpy import testing as np_test

####################################################################################################

import PyRelatedness.Logging.Logging as Logging
logger = Logging.setup_logging()

####################################################################################################

from PyRelatedness.Evaluation.Metrics import DICT, EvalRecord, FULL, LIST, MetricValue, accuracy, mrr

####################################################################################################

def naive_metrics(records, lexicon):

    """Straightforward reimplementation of the metrics used as oracle."""

    full = dict_ = list_ = 0
    dict_count = list_count = 0
    reciprocal = 0.
    for record in records:
        correct = record.ranked[0] == record.gold
        full += correct
        if record.gold in lexicon:
            dict_count += 1
            dict_ += correct
        if record.gold in record.ranked:
            list_count += 1
            list_ += correct
            reciprocal += 1. / (record.ranked.index(record.gold) + 1)
    n = len(records)
    return (full / n,
            dict_ / dict_count if dict_count else None,
            list_ / list_count if list_count else None,
            reciprocal / n)

def random_records(rng, count=100):
    words = ['w{}'.format(i) for i in range(12)]
    records = []
    for i in range(count):
        k = int(rng.integers(1, 6))
        ranked = [str(word) for word in rng.choice(words, size=k, replace=False)]
        records.append(EvalRecord('img{}'.format(i), str(rng.choice(words)), ranked))
    return records

####################################################################################################

class TestMetrics(unittest.TestCase):

    ##############################################

    def test_examples(self):

        records = [EvalRecord(str(i), 'gold', ['gold', 'x']) for i in range(3)]
        for mode in (FULL, LIST):
            self.assertEqual(accuracy(records, mode).value, 1.)
        self.assertEqual(accuracy(records, DICT, {'gold'}).value, 1.)

        records = [EvalRecord('a', 'x', ['x', 'y']),
                   EvalRecord('b', 'x', ['y', 'x']),
                   EvalRecord('c', 'y', ['y']),
                   EvalRecord('d', 'z', ['y', 'z'])]
        self.assertEqual(accuracy(records, FULL).value, .5)
        self.assertEqual(accuracy(records, LIST), MetricValue(2, 4))
        self.assertEqual(accuracy(records, DICT, {'x', 'y', 'z'}).value, .5)

    ##############################################

    def test_undefined(self):

        records = [EvalRecord('a', 'x', ['y']), EvalRecord('b', 'x', ['z'])]
        value = accuracy(records, LIST)
        self.assertFalse(value.is_defined)
        self.assertIsNone(value.value)
        self.assertEqual(str(value), 'n/a')
        self.assertNotEqual(value, MetricValue(0, 2))
        self.assertEqual(accuracy(records, FULL), MetricValue(0, 2))
        with self.assertRaises(ValueError):
            float(value)

    ##############################################

    def test_mrr(self):

        records = [EvalRecord('a', 'x', ['x', 'y', 'z', 'w']),
                   EvalRecord('b', 'x', ['y', 'x', 'z', 'w']),
                   EvalRecord('c', 'x', ['y', 'z', 'w', 'x'])]
        self.assertAlmostEqual(mrr(records), (1 + .5 + .25)/3, places=15)
        self.assertEqual(mrr(records[:1]), 1.)
        self.assertEqual(mrr([EvalRecord('a', 'x', ['y']), EvalRecord('b', 'x', ['x'])]), .5)

    ##############################################

    def test_normalisation(self):

        record = EvalRecord('a', 'Coffee ', ['COFFEE', 'cofee'])
        self.assertTrue(record.is_correct)
        self.assertEqual(record.gold_rank, 1)

    ##############################################

    def test_errors(self):

        with self.assertRaises(ValueError):
            accuracy([], FULL)
        with self.assertRaises(ValueError):
            mrr([])
        records = [EvalRecord('a', 'x', ['x'])]
        with self.assertRaises(ValueError):
            accuracy(records, 'top5')
        with self.assertRaises(ValueError):
            accuracy(records, DICT)
        with self.assertRaises(ValueError):
            EvalRecord('a', 'x', [])

    ##############################################

    def test_oracle(self):

        rng = np.random.default_rng(2026)
        lexicon = {'w{}'.format(i) for i in range(8)}
        for _ in range(10):
            records = random_records(rng)
            full, dict_, list_, reciprocal = naive_metrics(records, lexicon)
            self.assertAlmostEqual(accuracy(records, FULL).value, full, delta=1e-12)
            self.assertAlmostEqual(accuracy(records, DICT, lexicon).value, dict_, delta=1e-12)
            self.assertAlmostEqual(accuracy(records, LIST).value, list_, delta=1e-12)
            self.assertAlmostEqual(mrr(records), reciprocal, delta=1e-12)
            self.assertGreaterEqual(list_, full)
            self.assertGreaterEqual(reciprocal, full)
            # order invariance
            shuffled = [records[i] for i in rng.permutation(len(records))]
            self.assertEqual(accuracy(shuffled, LIST), accuracy(records, LIST))
            self.assertAlmostEqual(mrr(shuffled), reciprocal, delta=1e-12)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
