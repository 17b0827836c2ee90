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
"""This module runs the finite difference checks of the layer and model gradients.

The checks use the small configuration :meth:`ModelConfig.toy`, a batch of four pairs and a
weighted sum (layers) or the binary cross-entropy (models) as scalar objective.  Large parameter
tensors are sampled so a full run takes a few seconds.
"""

####################################################################################################

__all__ = [
    'DEFAULT_TOLERANCE',
    'GradientCheckEntry',
    'GradientCheckReport',
    'layer_gradient_checks',
    'model_gradient_checks',
    'run_gradient_suite',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Layers.Attention import AttentionParams, attention_pool
from ..Layers.Convolution import ConvChannel, masked_conv
from ..Layers.Dense import DenseLayer
from ..Layers.Embedding import EmbeddingTable
from ..Layers.Match import MatchParams, match_features
from ..Layers.Normalization import BatchNormParams, TRAIN, batch_norm
from ..Layers.Recurrent import LSTMParams, lstm_forward
from ..Model.Config import ModelConfig, VARIANTS
from ..Model.Context import ContextBundle
from ..Model.RelatednessModel import build_model
from ..Tensor import Tensor
from ..Tensor import Functions as F
from ..Tensor.GradientCheck import gradient_errors
from ..Tools.Random import derive_rng
from .Loss import bce_loss

####################################################################################################

_module_logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-3
DEFAULT_MAX_ENTRIES = 12

BATCH_SIZE = 4

####################################################################################################

class GradientCheckEntry:

    def __init__(self, name, errors):
        self.name = name
        self.errors = list(errors)

    @property
    def max_error(self):
        return max(self.errors) if self.errors else 0.

    def __repr__(self):
        return '{} {:.3e}'.format(self.name, self.max_error)

####################################################################################################

class GradientCheckReport:

    ##############################################

    def __init__(self, entries, tolerance=DEFAULT_TOLERANCE):
        self.entries = list(entries)
        self.tolerance = tolerance

    ##############################################

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def max_error(self):
        return max((entry.max_error for entry in self.entries), default=0.)

    @property
    def passed(self):
        return self.max_error < self.tolerance

    @property
    def failures(self):
        return [entry for entry in self.entries if entry.max_error >= self.tolerance]

    ##############################################

    def to_table(self):
        lines = ['{:<24} {:>10}'.format('check', 'error')]
        for entry in self.entries:
            flag = '' if entry.max_error < self.tolerance else ' FAIL'
            lines.append('{:<24} {:>10.3e}{}'.format(entry.name, entry.max_error, flag))
        return '\n'.join(lines)

####################################################################################################

def _weighted_sum(output, rng):
    # a random projection keeps the normalisation gradients away from zero
    weights = rng.normal(size=output.shape)
    return F.sum(F.mul(output, Tensor(weights)))

def _leaf(rng, shape):
    return Tensor(rng.normal(size=shape), requires_grad=True)

def _tensors(layer):
    return [tensor for _, tensor in layer.parameters()]

####################################################################################################

def layer_gradient_checks(seed, max_entries=DEFAULT_MAX_ENTRIES):

    """Check the convolution, LSTM, attention, batch normalisation, dense and match layers."""

    rng = derive_rng(seed, 'gradient.layers')
    sample_rng = derive_rng(seed, 'gradient.sample')
    config = ModelConfig.toy()
    d = config.embedding_dimension
    H = config.hidden_size
    j = config.kernels_per_channel
    length = 6
    entries = []

    def check(name, function, tensors):
        errors = gradient_errors(function, tensors, max_entries=max_entries, rng=sample_rng)
        entry = GradientCheckEntry(name, errors)
        _module_logger.debug(repr(entry))
        entries.append(entry)

    # the last two tokens of the second row are padding
    x = _leaf(rng, (BATCH_SIZE*length, d))
    mask = np.zeros((BATCH_SIZE, length), dtype=bool)
    mask[1, -2:] = True
    channel = ConvChannel.initialize(3, d, j, rng)
    projection = rng.normal(size=(BATCH_SIZE*(length - 2), j))
    check('conv',
          lambda: F.sum(F.mul(masked_conv(x, mask, channel), Tensor(projection))),
          [x] + _tensors(channel))

    sequence = _leaf(rng, (BATCH_SIZE, 5, j))
    lstm = LSTMParams.initialize(j, H, rng)
    projection = rng.normal(size=(BATCH_SIZE, 5, H))
    check('lstm',
          lambda: F.sum(F.mul(lstm_forward(sequence, lstm), Tensor(projection))),
          [sequence] + _tensors(lstm))

    states = _leaf(rng, (BATCH_SIZE, 5, H))
    attention = AttentionParams.initialize(H, rng)
    projection = rng.normal(size=(BATCH_SIZE, H))
    # the last step of the first row is padding
    valid = np.ones((BATCH_SIZE, 5), dtype=bool)
    valid[0, -1] = False
    check('attention',
          lambda: F.sum(F.mul(attention_pool(states, attention, valid), Tensor(projection))),
          [states] + _tensors(attention))

    features = _leaf(rng, (BATCH_SIZE, 6))
    norm = BatchNormParams.initialize(6)
    norm.gamma.values[...] = rng.uniform(.5, 1.5, size=6)
    projection = rng.normal(size=(BATCH_SIZE, 6))
    check('batch_norm',
          lambda: F.sum(F.mul(batch_norm(features, norm, TRAIN), Tensor(projection))),
          [features] + _tensors(norm))

    inputs = _leaf(rng, (BATCH_SIZE, 6))
    layer = DenseLayer.initialize(6, 3, rng, activation='tanh')
    projection = rng.normal(size=(BATCH_SIZE, 3))
    check('dense',
          lambda: F.sum(F.mul(layer(inputs), Tensor(projection))),
          [inputs] + _tensors(layer))

    context = _leaf(rng, (BATCH_SIZE*length, d))
    candidate = _leaf(rng, (BATCH_SIZE*2, d))
    candidate_mask = np.zeros((BATCH_SIZE, 2), dtype=bool)
    candidate_mask[2, 1] = True
    match = MatchParams.initialize(d, 2, rng)
    projection = rng.normal(size=(BATCH_SIZE, match.output_size))
    check('match',
          lambda: F.sum(F.mul(match_features(context, mask, candidate, candidate_mask, match),
                              Tensor(projection))),
          [context, candidate] + _tensors(match))

    probabilities = Tensor(rng.uniform(.1, .9, size=BATCH_SIZE), requires_grad=True)
    targets = np.array([1., 0., 1., 0.])
    check('bce', lambda: bce_loss(probabilities, targets), [probabilities])

    return entries

####################################################################################################

def _toy_batch(rng, dimension):

    words = ['sign', 'store', 'coffee', 'street', 'car', 'road', 'menu', 'shop', 'open', 'bus']
    table = EmbeddingTable.from_vectors(words, rng.normal(size=(len(words), dimension)))
    candidates = ['coffee', 'bus', 'street', 'zebra']
    contexts = [
        ContextBundle([('coffee cup', .9), ('menu', .4)], [('shop', .7)], 'a coffee shop with a sign'),
        ContextBundle([('car', .8)], [('road', .6)], 'a bus on the road'),
        ContextBundle([('sign', .5)], [('street', .9)], 'street sign'),
        ContextBundle([('store', .3)], [], 'an open store'),
    ]
    targets = np.array([1., 1., 0., 0.])
    return table, candidates, contexts, targets

def model_gradient_checks(seed, max_entries=DEFAULT_MAX_ENTRIES):

    """Check the loss gradient of the toy model of each variant with respect to every parameter.

    The model runs in train mode: dropout is drawn from a generator rebuilt at each evaluation so
    every evaluation sees the same mask.
    """

    entries = []
    sample_rng = derive_rng(seed, 'gradient.sample')
    for variant in VARIANTS:
        config = ModelConfig.toy(variant)
        table, candidates, contexts, targets = _toy_batch(derive_rng(seed, 'gradient.data'),
                                                          config.embedding_dimension)
        model = build_model(config, table, derive_rng(seed, 'gradient.' + variant))
        parameters = model.parameters(trainable_only=True)

        def loss():
            scores = model.forward_batch(candidates, contexts, TRAIN, derive_rng(seed, 'gradient.dropout'))
            return bce_loss(scores, targets)

        errors = gradient_errors(loss, [tensor for _, tensor in parameters],
                                 max_entries=max_entries, rng=sample_rng)
        for (name, _), error in zip(parameters, errors):
            entry = GradientCheckEntry('{}:{}'.format(variant, name), [error])
            _module_logger.debug(repr(entry))
            entries.append(entry)

    return entries

####################################################################################################

def run_gradient_suite(seed=0, tolerance=DEFAULT_TOLERANCE, max_entries=DEFAULT_MAX_ENTRIES):

    """Run the layer and model checks and return a :class:`GradientCheckReport`."""

    entries = layer_gradient_checks(seed, max_entries) + model_gradient_checks(seed, max_entries)
    report = GradientCheckReport(entries, tolerance)
    if report.passed:
        _module_logger.info("Gradient checks passed, max relative error {:.3e}".format(report.max_error))
    else:
        _module_logger.error("Gradient checks failed: {}".format(', '.join(map(repr, report.failures))))
    return report
