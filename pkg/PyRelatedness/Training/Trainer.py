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

"""This module implements the training loop.

Example of usage::

    config = TrainingConfig(epochs=30, batch_size=32, seed=42)
    trainer = Trainer(model, config)
    history = trainer.train(pairs)

Each epoch shuffles the pairs, runs the model in train mode (dropout, batch statistics) on the
mini-batches and applies a Nadam step per batch.  When a validation split is requested, the
validation pairs are scored in infer mode at the end of each epoch, the parameters of the best
epoch are restored at the end and training stops when the validation loss doesn't improve for
*patience* epochs.

"""

####################################################################################################

__all__ = [
    'Trainer',
    'TrainingConfig',
    'TrainingHistory',
    'binary_accuracy',
    'evaluate_pairs',
    'split_pairs',
    'train',
    'training_manifest',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Layers.Normalization import TRAIN
from ..Tensor import no_grad
from ..Tools.Random import derive_rng
from .Loss import bce_loss
from .Optimizer import Nadam, NadamState

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class TrainingConfig:

    """This class holds the training hyper-parameters.

    Public Attributes:

      :attr:`epochs`

      :attr:`batch_size`
        at least 2, batch normalisation needs two rows

      :attr:`learning_rate`, :attr:`beta1`, :attr:`beta2`, :attr:`epsilon`
        Nadam hyper-parameters

      :attr:`patience`
        number of epochs without validation improvement before stopping, 0 disables early stopping

      :attr:`validation_split`
        fraction of the pairs held out for validation

      :attr:`neg_ratio`
        negative pairs per positive pair

      :attr:`freeze_embeddings`

      :attr:`seed`
        root seed

    """

    DEFAULTS = dict(
        epochs=30,
        batch_size=32,
        learning_rate=NadamState.DEFAULT_LEARNING_RATE,
        beta1=NadamState.DEFAULT_BETA1,
        beta2=NadamState.DEFAULT_BETA2,
        epsilon=NadamState.DEFAULT_EPSILON,
        patience=5,
        validation_split=.1,
        neg_ratio=1,
        freeze_embeddings=False,
        seed=42,
    )

    ##############################################

    def __init__(self, **kwargs):

        for key in kwargs:
            if key not in self.DEFAULTS:
                raise ValueError("Unknown training parameter {}".format(key))
        for key, default in self.DEFAULTS.items():
            value = kwargs.get(key, default)
            setattr(self, key, type(default)(value))
        self.validate()

    ##############################################

    def validate(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 2:
            raise ValueError("batch_size must be >= 2 for batch normalisation, got {}".format(self.batch_size))
        if self.patience < 0:
            raise ValueError("patience must be >= 0")
        if not 0 <= self.validation_split < 1:
            raise ValueError("validation_split must be in [0, 1)")
        if self.neg_ratio < 1:
            raise ValueError("neg_ratio must be >= 1")
        # the learning rate and the betas are checked by NadamState
        self.make_optimizer_state()

    ##############################################

    def make_optimizer_state(self):
        return NadamState(self.learning_rate, self.beta1, self.beta2, self.epsilon)

    ##############################################

    def to_dict(self):
        return {key: getattr(self, key) for key in self.DEFAULTS}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def __repr__(self):
        return 'TrainingConfig {}'.format(self.to_dict())

####################################################################################################

class TrainingHistory:

    """This class records the per epoch metrics.

    Public Attributes:

      :attr:`loss`, :attr:`accuracy`
        mean train mode loss and binary accuracy over the epoch batches

      :attr:`val_loss`, :attr:`val_accuracy`
        infer mode metrics on the validation pairs, empty without validation

      :attr:`best_epoch`
        0-based epoch of the restored parameters

      :attr:`stopped_early`

    """

    ##############################################

    def __init__(self):
        self.loss = []
        self.accuracy = []
        self.val_loss = []
        self.val_accuracy = []
        self.best_epoch = None
        self.stopped_early = False

    ##############################################

    def __len__(self):
        return len(self.loss)

    @property
    def has_validation(self):
        return bool(self.val_loss)

    ##############################################

    def to_dict(self):
        return dict(
            loss=[float(x) for x in self.loss],
            accuracy=[float(x) for x in self.accuracy],
            val_loss=[float(x) for x in self.val_loss],
            val_accuracy=[float(x) for x in self.val_accuracy],
            best_epoch=self.best_epoch,
            stopped_early=self.stopped_early,
        )

####################################################################################################

def binary_accuracy(scores, targets, threshold=.5):
    """Return the fraction of scores on the same side of *threshold* as their target"""
    scores = np.asarray(scores)
    targets = np.asarray(targets)
    return float(np.mean((scores >= threshold) == (targets >= threshold)))

####################################################################################################

def evaluate_pairs(model, pairs, batch_size=256):

    """Return the infer mode (loss, accuracy) of the model on *pairs*."""

    if not pairs:
        raise ValueError("No pair to evaluate")
    scores = model.score_batch([(pair.candidate, pair.ctx) for pair in pairs], batch_size)
    targets = np.array([pair.target for pair in pairs])
    with no_grad():
        loss = bce_loss(scores, targets).item()
    return loss, binary_accuracy(scores, targets)

####################################################################################################

def split_pairs(pairs, fraction, rng):

    """Return a (train, validation) split of the pairs, the validation part holds
    ``round(fraction * len(pairs))`` pairs.
    """

    pairs = list(pairs)
    count = int(round(fraction * len(pairs)))
    if not count:
        return pairs, []
    order = rng.permutation(len(pairs))
    validation = sorted(order[:count])
    train = sorted(order[count:])
    return [pairs[i] for i in train], [pairs[i] for i in validation]

####################################################################################################

class Trainer:

    """This class trains a :class:`RelatednessModel`."""

    _logger = _module_logger.getChild('Trainer')

    ##############################################

    def __init__(self, model, config=None):
        self._model = model
        self._config = config or TrainingConfig()
        self._optimizer = None
        self._dropout_rng = None

    ##############################################

    @property
    def model(self):
        return self._model

    @property
    def config(self):
        return self._config

    ##############################################

    def _snapshot(self):
        parameters = [tensor.numpy() for _, tensor in self._model.parameters()]
        buffers = [np.array(array) for _, array in self._model.buffers()]
        return parameters, buffers

    def _restore(self, snapshot):
        parameters, buffers = snapshot
        for (_, tensor), values in zip(self._model.parameters(), parameters):
            tensor.assign(values)
        for (_, array), values in zip(self._model.buffers(), buffers):
            array[...] = values

    ##############################################

    def _batches(self, size, rng):
        order = rng.permutation(size)
        batch_size = self._config.batch_size
        batches = [order[start:start+batch_size] for start in range(0, size, batch_size)]
        # a batch of one row cannot be normalised
        if len(batches) > 1 and len(batches[-1]) < 2:
            batches[-2] = np.concatenate(batches[-2:])
            del batches[-1]
        return batches

    ##############################################

    def _make_optimizer(self):
        model = self._model
        if self._config.freeze_embeddings:
            model.embeddings.freeze()
        else:
            model.embeddings.unfreeze()
        self._optimizer = Nadam(model.parameters(trainable_only=True), self._config.make_optimizer_state())
        return self._optimizer

    ##############################################

    def step(self, pairs, mode=TRAIN, rng=None):

        """Apply one Nadam step on the batch of *pairs* and return the batch loss and the scores.

        The model runs in *mode*, train mode draws dropout from *rng*, by default the dropout
        generator of the configured seed.  The optimizer state persists across the steps.
        """

        pairs = list(pairs)
        if not pairs:
            raise ValueError("Empty batch")
        if self._optimizer is None:
            self._make_optimizer()
        if rng is None and mode == TRAIN:
            if self._dropout_rng is None:
                self._dropout_rng = derive_rng(self._config.seed, 'dropout')
            rng = self._dropout_rng
        targets = np.array([pair.target for pair in pairs])
        scores = self._model.forward_batch([pair.candidate for pair in pairs],
                                           [pair.ctx for pair in pairs],
                                           mode, rng)
        loss = bce_loss(scores, targets)
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        return loss.item(), scores.values

    ##############################################

    def train(self, pairs):

        """Train the model on *pairs* and return the :class:`TrainingHistory`."""

        config = self._config
        model = self._model
        pairs = list(pairs)
        if not pairs:
            raise ValueError("No training pair")
        if len(pairs) < config.batch_size:
            raise ValueError("{} pairs for a batch size of {}".format(len(pairs), config.batch_size))

        train_pairs, validation_pairs = split_pairs(pairs, config.validation_split,
                                                    derive_rng(config.seed, 'split'))
        if len(train_pairs) < 2:
            raise ValueError("The training split holds less than 2 pairs")
        shuffle_rng = derive_rng(config.seed, 'shuffle')
        self._dropout_rng = derive_rng(config.seed, 'dropout')
        self._make_optimizer()

        self._logger.info("Train {} on {} pairs, validate on {} pairs, {}".format(
            model.variant, len(train_pairs), len(validation_pairs), config))

        history = TrainingHistory()
        best_loss = None
        best_snapshot = None
        bad_epochs = 0
        for epoch in range(config.epochs):
            loss_sum = 0.
            correct = 0.
            for batch in self._batches(len(train_pairs), shuffle_rng):
                batch_pairs = [train_pairs[i] for i in batch]
                loss, scores = self.step(batch_pairs, TRAIN, self._dropout_rng)
                targets = np.array([pair.target for pair in batch_pairs])
                loss_sum += loss * len(batch)
                correct += binary_accuracy(scores, targets) * len(batch)
                self._logger.debug("epoch {} batch loss {:.6f}".format(epoch, loss))
            history.loss.append(loss_sum / len(train_pairs))
            history.accuracy.append(correct / len(train_pairs))

            message = "epoch {}/{} loss {:.4f} accuracy {:.4f}".format(
                epoch + 1, config.epochs, history.loss[-1], history.accuracy[-1])
            if validation_pairs:
                val_loss, val_accuracy = evaluate_pairs(model, validation_pairs)
                history.val_loss.append(val_loss)
                history.val_accuracy.append(val_accuracy)
                message += " val_loss {:.4f} val_accuracy {:.4f}".format(val_loss, val_accuracy)
                if best_loss is None or val_loss < best_loss:
                    best_loss = val_loss
                    best_snapshot = self._snapshot()
                    history.best_epoch = epoch
                    bad_epochs = 0
                else:
                    bad_epochs += 1
            else:
                history.best_epoch = epoch
            self._logger.info(message)

            if validation_pairs and config.patience and bad_epochs >= config.patience:
                self._logger.info("Early stop at epoch {}, best epoch {}".format(epoch + 1, history.best_epoch + 1))
                history.stopped_early = True
                break

        if best_snapshot is not None:
            self._restore(best_snapshot)
        return history

####################################################################################################

def train(model, pairs, epochs=None, batch_size=None, seed=None, validation_split=None, config=None):

    """Train *model* on *pairs* and return the model and its :class:`TrainingHistory`.

    The keyword arguments override the corresponding fields of *config*.
    """

    parameters = config.to_dict() if config is not None else {}
    for key, value in (('epochs', epochs),
                       ('batch_size', batch_size),
                       ('seed', seed),
                       ('validation_split', validation_split)):
        if value is not None:
            parameters[key] = value
    history = Trainer(model, TrainingConfig(**parameters)).train(pairs)
    return model, history

####################################################################################################

def training_manifest(model, config, history, data=None, model_checksum=None):

    """Return the provenance record of a training run as a dictionary ready for YAML."""

    return dict(
        model=model.config.to_dict(),
        parameter_count=int(model.parameter_count),
        training=config.to_dict(),
        data=dict(data or {}),
        embedding_checksum=model.embeddings.checksum(),
        model_checksum=model_checksum,
        history=history.to_dict(),
    )
