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
from PyRelatedness.Evaluation.Metrics import EvalRecord, FULL, accuracy, mrr
from PyRelatedness.Layers.Embedding import EmbeddingTable
from PyRelatedness.Model.Config import FDCLSTM_AT, ModelConfig
from PyRelatedness.Model.Context import ContextBundle
from PyRelatedness.Model.RelatednessModel import build_model
from PyRelatedness.Rerank.Fusion import FusionConfig
from PyRelatedness.Rerank.Hypothesis import Candidate, HypothesisSet, MAX_CANDIDATES
from PyRelatedness.Rerank.Reranker import Reranker, rerank
from PyRelatedness.Rerank.Scorer import CosineScorer, NeuralScorer
from PyRelatedness.Rerank.Unigram import UnigramModel
from PyRelatedness.Tools.Random import derive_rng
from PyRelatedness.Training.Pairs import make_pairs
from PyRelatedness.Training.Trainer import Trainer, TrainingConfig

####################################################################################################

class FixedScorer:

    def __init__(self, scores):
        self.scores = scores

    def score_candidates(self, words, ctx):
        return [(self.scores.get(word, .5), 1.) for word in words]

####################################################################################################

def make_set():
    return HypothesisSet('img1', 'coffee',
                         [Candidate('cofee', .5), Candidate('coffee', .3), Candidate('toffee', .2)],
                         ContextBundle([('cup', .8)], [], 'a cup'))

####################################################################################################

class TestHypothesisSet(unittest.TestCase):

    ##############################################

    def test_order(self):

        h = HypothesisSet('img', 'b', [Candidate('b', .2), Candidate('c', .5), Candidate('a', .2)])
        self.assertEqual(h.words, ['c', 'a', 'b'])
        self.assertTrue(h.gold_in_list)
        self.assertTrue(h.ctx.substitute)
        self.assertEqual(h.truncated(2).words, ['c', 'a'])
        with self.assertRaises(ValueError):
            h.truncated(0)

    ##############################################

    def test_errors(self):

        with self.assertRaises(ValueError):
            HypothesisSet('img', 'a', [])
        with self.assertRaises(ValueError):
            HypothesisSet('img', 'a', [Candidate('w{}'.format(i), .01) for i in range(MAX_CANDIDATES + 1)])
        with self.assertRaises(ValueError):
            Candidate('a', 1.2)
        with self.assertRaises(ValueError):
            Candidate('', .5)

####################################################################################################

class TestReranker(unittest.TestCase):

    ##############################################

    def test_rerank(self):

        h = make_set()
        ranked = rerank(h, FixedScorer({'coffee': .9, 'cofee': .1, 'toffee': .3}), None, FusionConfig(1, 1, 0, 0))
        self.assertEqual([item.word for item in ranked], ['coffee', 'toffee', 'cofee'])
        self.assertAlmostEqual(ranked[0].final, .3 * .9, places=15)
        self.assertEqual(ranked[0].unigram, 1.)
        self.assertEqual(len(Reranker.trace_records(h, ranked)), 3)
        self.assertEqual(Reranker.trace_records(h, ranked)[0]['rank'], 1)

    ##############################################

    def test_baseline_fusion(self):

        h = make_set()
        lm = UnigramModel.from_text('toffee toffee toffee')
        ranked = rerank(h, None, lm, FusionConfig(1, 0, 0, 0))
        self.assertEqual([item.word for item in ranked], h.words)

    ##############################################

    def test_k1(self):

        h = make_set().truncated(1)
        ranked = rerank(h, FixedScorer({'cofee': .01}), None, FusionConfig(1, 1, 0, 0))
        self.assertEqual([item.word for item in ranked], ['cofee'])

    ##############################################

    def test_ties(self):

        # equal final scores fall back to the baseline order
        h = HypothesisSet('img', 'a', [Candidate('b', .4), Candidate('a', .4), Candidate('c', .2)])
        ranked = rerank(h, FixedScorer({'a': .5, 'b': .5, 'c': .9}), None, FusionConfig(1, 1, 0, 0))
        self.assertEqual([item.word for item in ranked], ['a', 'b', 'c'])
        ranked = rerank(h, FixedScorer({'c': .8}), None, FusionConfig(0, 1, 0, 0))
        self.assertEqual([item.word for item in ranked], ['c', 'a', 'b'])

    ##############################################

    def test_missing_components(self):

        h = make_set()
        with self.assertRaises(ValueError):
            rerank(h, None, None, FusionConfig(1, 1, 0, 0))
        with self.assertRaises(ValueError):
            rerank(h, FixedScorer({}), None, FusionConfig(1, 1, 0, 1))

    ##############################################

    def test_rerank_all(self):

        reranker = Reranker(FixedScorer({'coffee': .9}), None, FusionConfig(1, 1, 0, 0))
        results = reranker.rerank_all([make_set(), make_set()], k=2)
        self.assertEqual(len(results), 2)
        for h, ranked in results:
            self.assertEqual(h.k, 2)
            self.assertEqual(ranked[0].word, 'coffee')

####################################################################################################

class TestAirlinerExample(unittest.TestCase):

    """A misspotted brand name next to an airliner on a runway."""

    TOPICS = (
        dict(objects=('airliner', 'plane', 'jet'), places=('runway', 'airport'),
             golds=('delta', 'boeing', 'airbus')),
        dict(objects=('coffee', 'cup', 'sandwich'), places=('cafe', 'bakery'),
             golds=('deli', 'latte', 'bagel')),
        dict(objects=('monitor', 'keyboard', 'laptop'), places=('office', 'desk'),
             golds=('dell', 'intel', 'lenovo')),
    )
    FILLERS = ('a', 'on', 'the')

    ##############################################

    @classmethod
    def setUpClass(cls):

        rng = derive_rng(21, 'airliner')
        dimension = 8
        words = []
        vectors = []
        for index, topic in enumerate(cls.TOPICS):
            direction = np.zeros(dimension)
            direction[index] = 2.
            for word in topic['objects'] + topic['places'] + topic['golds']:
                words.append(word)
                vectors.append(direction + rng.normal(0., .1, size=dimension))
        for word in cls.FILLERS:
            words.append(word)
            vectors.append(rng.normal(0., .3, size=dimension))
        table = EmbeddingTable.from_vectors(words, np.array(vectors))

        corpus = []
        for topic in cls.TOPICS:
            for _ in range(20):
                objects = rng.choice(topic['objects'], size=2, replace=False)
                place = str(rng.choice(topic['places']))
                ctx = ContextBundle([(str(label), .9) for label in objects], [(place, .8)],
                                    'a {} on the {}'.format(objects[0], place))
                corpus.append((str(rng.choice(topic['golds'])), ctx))
        pairs = make_pairs(corpus, 1, derive_rng(21, 'pairs'))

        cls.model = build_model(ModelConfig.toy(FDCLSTM_AT), table, derive_rng(21, 'init'))
        Trainer(cls.model, TrainingConfig(epochs=150, validation_split=0., seed=21)).train(pairs)

    ##############################################

    def test_delta_first(self):

        ctx = ContextBundle([('airliner', .9)], [('runway', .8)], 'a plane on the runway')
        h = HypothesisSet('airliner', 'delta',
                          [Candidate('dell', .45), Candidate('deli', .35), Candidate('delta', .2)], ctx)
        self.assertEqual(h.words[0], 'dell')
        scorer = NeuralScorer(self.model)
        relatedness = dict(zip(h.words, (r for r, _ in scorer.score_candidates(h.words, ctx))))
        self.assertEqual(max(relatedness, key=relatedness.get), 'delta')
        ranked = rerank(h, scorer, None, FusionConfig(1, 1, 0, 0))
        self.assertEqual(ranked[0].word, 'delta')
        self.assertAlmostEqual(ranked[0].relatedness, relatedness['delta'], places=12)

    ##############################################

    def test_other_contexts(self):

        # the same candidates next to a keyboard keep the office brand on top
        ctx = ContextBundle([('keyboard', .9)], [('desk', .8)], 'a keyboard on the desk')
        h = HypothesisSet('office', 'dell',
                          [Candidate('dell', .45), Candidate('deli', .35), Candidate('delta', .2)], ctx)
        ranked = rerank(h, NeuralScorer(self.model), None, FusionConfig(1, 1, 0, 0))
        self.assertEqual(ranked[0].word, 'dell')

####################################################################################################

class TestPlantedBenchmark(unittest.TestCase):

    """The gold word of each set shares the topic of the image context."""

    ##############################################

    @classmethod
    def setUpClass(cls):
        cls.corpus = make_synthetic(seed=11, num_train=100, num_sets=500, dimension=8)
        cls.dataset = cls.corpus.hypothesis_sets
        cls.lm = UnigramModel.from_text(cls.corpus.unigram_text)

    ##############################################

    def records(self, scorer, cfg):
        reranker = Reranker(scorer, self.lm, cfg)
        return [EvalRecord.from_ranking(h, ranked) for h, ranked in reranker.rerank_all(self.dataset)]

    def top1(self, scorer, cfg):
        return accuracy(self.records(scorer, cfg), FULL).value

    ##############################################

    def test_baseline(self):

        records = [EvalRecord.from_baseline(h) for h in self.dataset]
        self.assertLessEqual(accuracy(records, FULL).value, .45)
        ranks = [record.gold_rank for record in records]
        self.assertTrue(2 <= np.mean(ranks) <= 3)

    ##############################################

    def test_cosine(self):

        baseline = self.top1(None, FusionConfig(1, 0, 0, 0))
        self.assertGreater(self.top1(CosineScorer(self.corpus.embedding_table()), FusionConfig(1, 1, 0, 1)), baseline)

    ##############################################

    def test_neural(self):

        table = self.corpus.embedding_table()
        model = build_model(ModelConfig.toy(dropout_rate=.5), table, derive_rng(11, 'init'))
        pairs = make_pairs(self.corpus.training_corpus(), 1, derive_rng(11, 'pairs'))
        Trainer(model, TrainingConfig(epochs=60, validation_split=0., seed=11)).train(pairs)
        baseline = self.top1(None, FusionConfig(1, 0, 0, 0))
        top1 = self.top1(NeuralScorer(model), FusionConfig(1, 1, 0, 1))
        self.assertGreaterEqual(top1, .8)
        self.assertGreaterEqual(top1 - baseline, .35)
        self.assertGreaterEqual(mrr(self.records(NeuralScorer(model), FusionConfig(1, 1, 0, 1)))
                                - mrr(self.records(None, FusionConfig(1, 0, 0, 0))), .15)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
