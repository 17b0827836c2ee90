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

from PyRelatedness.Data.Synthetic import make_synthetic
from PyRelatedness.Model.Context import ContextBundle
from PyRelatedness.Tools.Random import derive_rng
from PyRelatedness.Training.Pairs import SamplingError, TrainingPair, make_pairs

####################################################################################################

class TestPairs(unittest.TestCase):

    ##############################################

    def setUp(self):
        self.corpus = make_synthetic(seed=3, num_train=100, num_sets=5, dimension=8).training_corpus()

    ##############################################

    def test_counts(self):

        pairs = make_pairs(self.corpus, 1, derive_rng(0, 'pairs'))
        self.assertEqual(len(pairs), 200)
        self.assertEqual(sum(pair.is_positive for pair in pairs), 100)
        pairs = make_pairs(self.corpus, 3, derive_rng(0, 'pairs'))
        self.assertEqual(len(pairs), 400)

    ##############################################

    def test_negatives(self):

        pairs = make_pairs(self.corpus, 2, derive_rng(1, 'pairs'))
        gold_words = set(gold for gold, _ in self.corpus)
        gold = None
        for pair in pairs:
            if pair.is_positive:
                gold = pair.candidate
                continue
            self.assertNotEqual(pair.candidate, gold)
            self.assertIn(pair.candidate, gold_words)
            self.assertNotIn(pair.candidate, pair.ctx.label_terms(include_caption=True))
            self.assertEqual(pair.target, 0.)

    ##############################################

    def test_context_terms_excluded(self):

        ctx = ContextBundle([('dog', .9)], [], 'a dog')
        corpus = [('cat', ctx), ('dog', ContextBundle.empty()), ('fish', ContextBundle.empty())]
        for seed in range(10):
            pairs = make_pairs(corpus, 5, derive_rng(seed, 'pairs'))
            self.assertEqual(set(pair.candidate for pair in pairs[1:6]), {'fish'})

    ##############################################

    def test_cooccurring_golds_excluded(self):

        kitchen = ContextBundle([('stove', .9)], [('kitchen', .8)], 'a stove')
        corpus = [('pan', kitchen),
                  ('kettle', ContextBundle([('stove', .7)], [('kitchen', .5)], 'the stove')),
                  ('oven', ContextBundle([], [('kitchen', .6)], '')),
                  ('tyre', ContextBundle([('car', .9)], [('road', .5)], 'a car')),
                  ('wheel', ContextBundle([('car', .8)], [], ''))]
        for seed in range(10):
            pairs = make_pairs(corpus, 4, derive_rng(seed, 'pairs'))
            # the negatives of the kitchen images are car words
            for pair in pairs[:15]:
                if not pair.is_positive:
                    self.assertIn(pair.candidate, ('tyre', 'wheel'))
            for pair in pairs[15:]:
                if not pair.is_positive:
                    self.assertIn(pair.candidate, ('pan', 'kettle', 'oven'))

        # on the synthetic corpus, the negatives come from another topic
        pairs = make_pairs(self.corpus, 2, derive_rng(1, 'pairs'))
        labels = {}
        for gold, ctx in self.corpus:
            labels.setdefault(gold, set()).update(label for label, _ in ctx.labels)
        for pair in pairs:
            if not pair.is_positive:
                context_labels = set(label for label, _ in pair.ctx.labels)
                self.assertFalse(labels[pair.candidate] & context_labels)

    ##############################################

    def test_cooccurrence_fallback(self):

        shared = ContextBundle([('stove', .9)], [], '')
        corpus = [('pan', shared), ('kettle', shared), ('oven', shared)]
        with self.assertLogs('PyRelatedness.Training.Pairs', level='WARNING'):
            pairs = make_pairs(corpus, 2, derive_rng(0, 'pairs'))
        for i in range(0, 9, 3):
            gold = pairs[i].candidate
            for pair in pairs[i+1:i+3]:
                self.assertNotEqual(pair.candidate, gold)
                self.assertIn(pair.candidate, ('pan', 'kettle', 'oven'))

    ##############################################

    def test_determinism(self):

        first = make_pairs(self.corpus, 1, derive_rng(5, 'pairs'))
        second = make_pairs(self.corpus, 1, derive_rng(5, 'pairs'))
        self.assertEqual(first, second)
        other = make_pairs(self.corpus, 1, derive_rng(6, 'pairs'))
        self.assertNotEqual([pair.candidate for pair in first], [pair.candidate for pair in other])

    ##############################################

    def test_errors(self):

        rng = derive_rng(0, 'pairs')
        with self.assertRaises(ValueError):
            make_pairs([], 1, rng)
        with self.assertRaises(SamplingError):
            make_pairs([('cat', ContextBundle.empty())] * 3, 1, rng)
        with self.assertRaises(ValueError):
            make_pairs(self.corpus, 0, rng)
        with self.assertRaises(ValueError):
            TrainingPair('cat', ContextBundle.empty(), 1.5)
        with self.assertRaises(ValueError):
            TrainingPair(' ', ContextBundle.empty(), 1.)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
