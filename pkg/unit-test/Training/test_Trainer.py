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
from PyRelatedness.Layers.Normalization import INFER
from PyRelatedness.Model.Config import FDCLSTM, FDCLSTM_AT, ModelConfig
from PyRelatedness.Model.RelatednessModel import build_model
from PyRelatedness.Tools.Random import derive_rng
from PyRelatedness.Training.Pairs import make_pairs
from PyRelatedness.Training.Trainer import (Trainer, TrainingConfig,
                                            binary_accuracy, evaluate_pairs, split_pairs, train,
                                            training_manifest)

####################################################################################################

def make_setup(variant, seed=0, gold_per_topic=4, **kwargs):

    """Return a toy model and the 200 pairs of a synthetic corpus of 100 images."""

    corpus = make_synthetic(seed=seed, gold_per_topic=gold_per_topic, num_train=100, num_sets=5, dimension=8)
    config = ModelConfig.toy(variant, **kwargs)
    model = build_model(config, corpus.embedding_table(), derive_rng(seed, 'init'))
    pairs = make_pairs(corpus.training_corpus(), 1, derive_rng(seed, 'pairs'))
    return model, pairs

####################################################################################################

class TestTrainingConfig(unittest.TestCase):

    ##############################################

    def test_config(self):

        config = TrainingConfig()
        self.assertEqual(config.epochs, 30)
        self.assertEqual(config.batch_size, 32)
        self.assertEqual(config.learning_rate, 2e-3)
        self.assertEqual(TrainingConfig.from_dict(config.to_dict()).to_dict(), config.to_dict())
        for kwargs in (dict(epochs=0), dict(batch_size=1), dict(validation_split=1.),
                       dict(learning_rate=-1.), dict(foo=1)):
            with self.assertRaises(ValueError):
                TrainingConfig(**kwargs)

    ##############################################

    def test_helpers(self):

        self.assertEqual(binary_accuracy([.9, .2, .6, .4], [1, 0, 0, 0]), .75)
        train_part, validation = split_pairs(list(range(20)), .1, derive_rng(0, 'split'))
        self.assertEqual(len(validation), 2)
        self.assertEqual(sorted(train_part + validation), list(range(20)))
        self.assertEqual(split_pairs([1, 2, 3], 0., derive_rng(0, 'split')), ([1, 2, 3], []))

####################################################################################################

class TestTrainer(unittest.TestCase):

    ##############################################

    def test_overfit(self):

        # default dropout, the negatives of an image are gold words of other topics
        for variant in (FDCLSTM, FDCLSTM_AT):
            for seed in range(3):
                model, pairs = make_setup(variant, seed=seed)
                self.assertEqual(model.config.dropout_rate, .7)
                self.assertEqual(len(pairs), 200)
                config = TrainingConfig(epochs=200, validation_split=0., patience=0, seed=seed)
                history = Trainer(model, config).train(pairs)
                self.assertEqual(len(history), 200)
                self.assertFalse(history.has_validation)
                loss, accuracy = evaluate_pairs(model, pairs)
                message = '{} seed {}'.format(variant, seed)
                self.assertGreaterEqual(accuracy, .95, message)
                self.assertLess(loss, history.loss[0], message)
                scores = model.score_batch([(pair.candidate, pair.ctx) for pair in pairs])
                targets = np.array([pair.target for pair in pairs])
                self.assertGreater(np.median(scores[targets == 1]), .9, message)
                self.assertLess(np.median(scores[targets == 0]), .1, message)

    ##############################################

    def test_loss_decreases(self):

        for variant in (FDCLSTM, FDCLSTM_AT):
            losses = []
            for seed in range(3):
                model, pairs = make_setup(variant, seed=seed)
                config = TrainingConfig(epochs=5, validation_split=0., seed=seed)
                losses.append(Trainer(model, config).train(pairs).loss)
            mean_loss = np.mean(losses, axis=0)
            self.assertEqual(mean_loss.shape, (5,))
            self.assertTrue(np.all(np.diff(mean_loss) <= 0), '{} {}'.format(variant, mean_loss))

    ##############################################

    def test_step_descends(self):

        # a small enough step decreases the loss of the pair it is computed on
        for variant in (FDCLSTM, FDCLSTM_AT):
            model, pairs = make_setup(variant, seed=6)
            for pair in pairs[:6]:
                before, _ = evaluate_pairs(model, [pair])
                trainer = Trainer(model, TrainingConfig(learning_rate=1e-4, seed=6))
                loss, scores = trainer.step([pair], INFER)
                self.assertAlmostEqual(loss, before, places=12)
                self.assertEqual(scores.shape, (1,))
                after, _ = evaluate_pairs(model, [pair])
                self.assertLess(after, before, '{} {}'.format(variant, pair))

    ##############################################

    def test_step_state(self):

        model, pairs = make_setup(FDCLSTM_AT, seed=7)
        trainer = Trainer(model, TrainingConfig(seed=7))
        with self.assertRaises(ValueError):
            trainer.step([])
        trainer.step(pairs[:8])
        optimizer = trainer._optimizer
        for _ in range(4):
            trainer.step(pairs[:8])
        # the moments carry over from one step to the next
        self.assertIs(trainer._optimizer, optimizer)
        self.assertEqual(optimizer.state.t, 5)

    ##############################################

    def test_determinism(self):

        values = []
        for _ in range(2):
            model, pairs = make_setup(FDCLSTM, seed=4)
            model, history = train(model, pairs, epochs=2, seed=4)
            values.append(([tensor.numpy() for _, tensor in model.parameters()], history.loss))
        for a, b in zip(values[0][0], values[1][0]):
            np_test.assert_array_equal(a, b)
        self.assertEqual(values[0][1], values[1][1])

    ##############################################

    def test_freeze_embeddings(self):

        model, pairs = make_setup(FDCLSTM, seed=2)
        before = model.embeddings.matrix.numpy()
        checksum = model.embeddings.checksum()
        Trainer(model, TrainingConfig(epochs=1, freeze_embeddings=True, seed=2)).train(pairs)
        np_test.assert_array_equal(model.embeddings.matrix.numpy(), before)
        self.assertEqual(model.embeddings.checksum(), checksum)

    ##############################################

    def test_validation_and_early_stop(self):

        model, pairs = make_setup(FDCLSTM_AT, seed=5)
        config = TrainingConfig(epochs=40, validation_split=.1, patience=1, seed=5, learning_rate=5e-2)
        history = Trainer(model, config).train(pairs)
        self.assertTrue(history.has_validation)
        self.assertEqual(len(history.val_loss), len(history))
        self.assertEqual(history.val_loss[history.best_epoch], min(history.val_loss))
        if history.stopped_early:
            self.assertEqual(len(history) - 1 - history.best_epoch, 1)
        # the restored parameters are those of the best epoch
        validation = split_pairs(pairs, .1, derive_rng(5, 'split'))[1]
        loss, _ = evaluate_pairs(model, validation)
        self.assertAlmostEqual(loss, min(history.val_loss), places=10)

        manifest = training_manifest(model, config, history, data=dict(pairs=len(pairs)))
        self.assertEqual(manifest['history']['best_epoch'], history.best_epoch)
        self.assertEqual(manifest['embedding_checksum'], model.embeddings.checksum())

    ##############################################

    def test_errors(self):

        model, pairs = make_setup(FDCLSTM, seed=0)
        with self.assertRaises(ValueError):
            Trainer(model).train([])
        with self.assertRaises(ValueError):
            Trainer(model, TrainingConfig(batch_size=64)).train(pairs[:10])

####################################################################################################

if __name__ == '__main__':

    unittest.main()
