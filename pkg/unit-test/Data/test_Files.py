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

import os
import tempfile

from PyRelatedness.Data.Contexts import load_context, save_context
from PyRelatedness.Data.Corpus import TRACE_FIELDS, load_gold, load_lexicon, save_gold, save_lexicon, save_traces
from PyRelatedness.Data.Dataset import attach_contexts, load_dataset, oov_rate
from PyRelatedness.Data.Format import ParseError, read_records
from PyRelatedness.Data.Hypotheses import load_hypotheses, save_hypotheses
from PyRelatedness.Layers.Embedding import EmbeddingTable
from PyRelatedness.Model.Context import ContextBundle
from PyRelatedness.Rerank.Fusion import FusionConfig
from PyRelatedness.Rerank.Hypothesis import Candidate, HypothesisSet
from PyRelatedness.Rerank.Reranker import Reranker, rerank

####################################################################################################

class DataFileTestCase(unittest.TestCase):

    ##############################################

    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()
        self.directory = self._directory.name

    def tearDown(self):
        self._directory.cleanup()

    ##############################################

    def path(self, name):
        return os.path.join(self.directory, name)

    def write(self, name, text):
        path = self.path(name)
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
        return path

####################################################################################################

class TestContexts(DataFileTestCase):

    ##############################################

    def test_round_trip(self):

        contexts = {
            'img1': ContextBundle([('airliner', .9), ('traffic light', .25)], [('runway', .5)], 'a plane on the runway'),
            'img2': ContextBundle([], [], ''),
        }
        path = self.path('context.tsv')
        save_context(path, contexts)
        self.assertEqual(load_context(path), contexts)

    ##############################################

    def test_duplicates(self):

        path = self.write('context.tsv',
                          '#context 1\n'
                          'img1\tcup:0.5\t\tfirst\n'
                          '\n'
                          'img1\tplane:0.75\trunway:0.5\tsecond caption\n')
        contexts = load_context(path)
        self.assertEqual(list(contexts), ['img1'])
        self.assertEqual(contexts['img1'].objects, [('plane', .75)])
        self.assertEqual(contexts['img1'].caption, ['second', 'caption'])

    ##############################################

    def test_errors(self):

        cases = {
            'header.tsv': ('#hypotheses 1\nimg\t\t\tx\n', 1),
            'version.tsv': ('#context 2\nimg\t\t\tx\n', 1),
            'fields.tsv': ('#context 1\nimg\tcup:0.5\n', 2),
            'confidence.tsv': ('#context 1\nimg\tcup:1.5\t\tx\n', 2),
            'label.tsv': ('#context 1\nimg\tcup\t\tx\n', 2),
            'real.tsv': ('#context 1\nimg\tcup:high\t\tx\n', 2),
        }
        for name, (text, line_number) in cases.items():
            with self.assertRaises(ParseError) as context:
                load_context(self.write(name, text))
            self.assertEqual(context.exception.line_number, line_number, name)
        with self.assertRaises(ParseError) as context:
            load_context(self.write('empty.tsv', '#context 1\n\n'))
        self.assertIn('no records', str(context.exception))

####################################################################################################

class TestHypotheses(DataFileTestCase):

    ##############################################

    def test_round_trip(self):

        sets = [HypothesisSet('img1', 'coffee', [Candidate('cofee', .5), Candidate('coffee', .3)]),
                HypothesisSet('img2', 'bus', [Candidate('bus', 1.)])]
        path = self.path('hypotheses.tsv')
        save_hypotheses(path, sets)
        self.assertEqual(load_hypotheses(path), sets)

    ##############################################

    def test_reranked(self):

        h = HypothesisSet('img1', 'coffee', [Candidate('cofee', .5), Candidate('coffee', .4)])
        ranked = rerank(h, None, None, FusionConfig(1, 0, 0, 0))
        path = self.path('reranked.tsv')
        save_hypotheses(path, [(h, ranked)])
        loaded, = load_hypotheses(path)
        self.assertEqual(loaded.words, ['cofee', 'coffee'])

    ##############################################

    def test_errors(self):

        for name, text in (('odd.tsv', '#hypotheses 1\nimg\tgold\tword\n'),
                           ('score.tsv', '#hypotheses 1\nimg\tgold\tword\tx\n'),
                           ('range.tsv', '#hypotheses 1\nimg\tgold\tword\t2\n'),
                           ('gold.tsv', '#hypotheses 1\nimg\t \tword\t.5\n')):
            with self.assertRaises(ParseError) as context:
                load_hypotheses(self.write(name, text))
            self.assertEqual(context.exception.line_number, 2)

####################################################################################################

class TestCorpus(DataFileTestCase):

    ##############################################

    def test_gold(self):

        items = [('img1', 'coffee'), ('img2', 'bus')]
        path = self.path('gold.tsv')
        save_gold(path, items)
        self.assertEqual(load_gold(path), items)
        with self.assertRaises(ParseError):
            load_gold(self.write('bad.tsv', '#gold 1\nimg1\n'))

    ##############################################

    def test_lexicon(self):

        path = self.path('lexicon.txt')
        save_lexicon(path, ['Coffee', 'bus', 'bus'])
        self.assertEqual(load_lexicon(path), {'coffee', 'bus'})
        with self.assertRaises(ParseError):
            load_lexicon(self.write('empty.txt', '\n'))

    ##############################################

    def test_traces(self):

        h = HypothesisSet('img1', 'coffee', [Candidate('cofee', .5), Candidate('coffee', .4)])
        records = Reranker.trace_records(h, rerank(h, None, None, FusionConfig(1, 0, 0, 0)))
        path = self.path('trace.tsv')
        save_traces(path, records)
        rows = [fields for _, fields in read_records(path, 'trace', 1)]
        self.assertEqual(len(rows), 2)
        self.assertEqual(len(rows[0]), len(TRACE_FIELDS))
        self.assertEqual(rows[0][:3], ['img1', '1', 'cofee'])

####################################################################################################

class TestDataset(DataFileTestCase):

    ##############################################

    def test_load(self):

        hypotheses = self.write('hypotheses.tsv',
                                '#hypotheses 1\n'
                                'img1\tcoffee\tcofee\t0.5\tcoffee\t0.3\n'
                                'img9\tbus\tbus\t0.9\n')
        context = self.write('context.tsv', '#context 1\nimg1\tcup:0.8\tshop:0.5\ta coffee shop\n')
        table = EmbeddingTable.from_vectors(['coffee', 'cup', 'shop', 'a'], np.eye(4))
        sets, report = load_dataset(hypotheses, context, table)
        self.assertEqual(report.records, 2)
        self.assertEqual(report.contexts, 1)
        self.assertEqual(report.unresolved, ['img9'])
        self.assertTrue(sets[1].ctx.substitute)
        self.assertTrue(sets[1].ctx.is_empty())
        self.assertEqual(sets[0].ctx.objects, [('cup', .8)])
        # cofee and bus are out of vocabulary among 2 + 5 + 1 tokens
        self.assertAlmostEqual(report.oov_rate, 2/8, places=15)
        self.assertEqual(report.to_dict()['unresolved'], ['img9'])
        self.assertIn('1 unresolved', str(report))

    ##############################################

    def test_attach(self):

        sets = [HypothesisSet('a', 'x', [Candidate('x', 1.)])]
        attached, unresolved = attach_contexts(sets, {'a': ContextBundle([('y', .5)])})
        self.assertEqual(unresolved, [])
        self.assertEqual(attached[0].ctx.objects, [('y', .5)])
        table = EmbeddingTable.from_vectors(['x'], np.ones((1, 2)))
        self.assertEqual(oov_rate(attached, table), .5)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
