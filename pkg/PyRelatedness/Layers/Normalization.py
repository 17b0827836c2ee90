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

"""This module implements batch normalisation and inverted dropout.

Both layers behave differently in the *train* and *infer* modes.
"""

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F

####################################################################################################

TRAIN = 'train'
INFER = 'infer'
MODES = (TRAIN, INFER)

def check_mode(mode):
    if mode not in MODES:
        raise ValueError("Incorrect mode {}, expected one of {}".format(mode, MODES))
    return mode

####################################################################################################

class BatchSizeError(ValueError):
    pass

####################################################################################################

class BatchNormParams:

    """This class holds a batch normalisation layer.

    Public Attributes:

      :attr:`gamma`
        scale, learned

      :attr:`beta`
        shift, learned

      :attr:`running_mean`

      :attr:`running_variance`
        exponential moving averages updated in train mode, the variance is the unbiased estimate

      :attr:`epsilon`

      :attr:`momentum`
        weight of the previous running value

      :attr:`mode`
        default mode when none is given to :func:`batch_norm`

    """

    DEFAULT_EPSILON = 1e-5
    DEFAULT_MOMENTUM = 0.9

    ##############################################

    def __init__(self, gamma, beta, running_mean, running_variance,
                 epsilon=DEFAULT_EPSILON, momentum=DEFAULT_MOMENTUM, name='bn', mode=TRAIN):

        features = gamma.shape[0]
        if beta.shape != (features,):
            raise ValueError("gamma {} vs beta {}".format(gamma.shape, beta.shape))
        running_mean = np.array(running_mean, dtype=np.float64)
        running_variance = np.array(running_variance, dtype=np.float64)
        if running_mean.shape != (features,) or running_variance.shape != (features,):
            raise ValueError("Running statistics don't match {} features".format(features))
        if np.any(running_variance < 0):
            raise ValueError("Running variance must be non negative")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= momentum < 1:
            raise ValueError("momentum must be in [0, 1)")

        self.gamma = gamma
        self.beta = beta
        self.running_mean = running_mean
        self.running_variance = running_variance
        self.epsilon = float(epsilon)
        self.momentum = float(momentum)
        self.name = name
        self.mode = check_mode(mode)

    ##############################################

    @classmethod
    def initialize(cls, features, epsilon=DEFAULT_EPSILON, momentum=DEFAULT_MOMENTUM, name='bn'):
        return cls(
            Tensor(np.ones(features), requires_grad=True, name=name + '.gamma'),
            Tensor(np.zeros(features), requires_grad=True, name=name + '.beta'),
            np.zeros(features),
            np.ones(features),
            epsilon, momentum, name,
        )

    ##############################################

    @property
    def features(self):
        return self.gamma.shape[0]

    def parameters(self):
        return (
            (self.name + '.gamma', self.gamma),
            (self.name + '.beta', self.beta),
        )

    def buffers(self):
        """Return the non learned state"""
        return (
            (self.name + '.running_mean', self.running_mean),
            (self.name + '.running_variance', self.running_variance),
        )

####################################################################################################

def batch_norm(x, params, mode=None):

    """Normalise the features (columns) of the batch *x*.

    In train mode the batch statistics are used and the running statistics are updated, in infer
    mode the running statistics are used.
    """

    mode = check_mode(mode or params.mode)
    if mode == TRAIN:
        n = x.shape[0]
        if n < 2:
            raise BatchSizeError("Batch normalisation needs a batch of at least 2 in train mode")
        output, mean, variance = F.batch_norm_train(x, params.gamma, params.beta, params.epsilon)
        momentum = params.momentum
        params.running_mean[...] = momentum*params.running_mean + (1. - momentum)*mean
        unbiased = variance * n / (n - 1)
        params.running_variance[...] = momentum*params.running_variance + (1. - momentum)*unbiased
        return output
    else:
        return F.batch_norm_infer(x, params.gamma, params.beta,
                                  params.running_mean, params.running_variance, params.epsilon)

####################################################################################################

def dropout(x, rate, mode, rng=None):

    """Inverted dropout: in train mode each entry is zeroed with probability *rate* and the
    survivors are scaled by :math:`1 / (1 - rate)`, in infer mode the input is returned unchanged.
    """

    rate = float(rate)
    if not 0 <= rate < 1:
        raise ValueError("Dropout rate must be in [0, 1), got {}".format(rate))
    mode = check_mode(mode)
    if mode == INFER or rate == 0:
        return x
    if rng is None:
        raise ValueError("A random generator is required in train mode")
    keep = rng.random(x.shape) >= rate
    mask = Tensor(keep / (1. - rate))
    return F.mul(x, mask)
