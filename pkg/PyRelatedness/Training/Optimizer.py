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

"""This module implements the Nesterov accelerated Adam optimiser (Nadam).

For a parameter :math:`\\theta` with gradient :math:`g` at step :math:`t`:

.. math::

    m_t = \\beta_1 m_{t-1} + (1 - \\beta_1) g \\\\
    v_t = \\beta_2 v_{t-1} + (1 - \\beta_2) g^2 \\\\
    \\hat{m}_t = m_t / (1 - \\beta_1^t) \\qquad \\hat{v}_t = v_t / (1 - \\beta_2^t) \\\\
    \\bar{m}_t = \\beta_1 \\hat{m}_t + (1 - \\beta_1) g / (1 - \\beta_1^t) \\\\
    \\theta_t = \\theta_{t-1} - lr \\, \\bar{m}_t / (\\sqrt{\\hat{v}_t} + \\epsilon)

"""

####################################################################################################

__all__ = [
    'Nadam',
    'NadamState',
    'NonFiniteGradientError',
    'nadam_step',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Tensor import DimensionError

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class NonFiniteGradientError(ArithmeticError):
    pass

####################################################################################################

class NadamState:

    """This class holds the step count, the moment accumulators and the hyper-parameters.

    Public Attributes:

      :attr:`t`
        number of steps done

      :attr:`first_moments`, :attr:`second_moments`
        dictionaries parameter key -> array shaped like the parameter

    """

    DEFAULT_LEARNING_RATE = 2e-3
    DEFAULT_BETA1 = .9
    DEFAULT_BETA2 = .999
    DEFAULT_EPSILON = 1e-8

    ##############################################

    def __init__(self,
                 learning_rate=DEFAULT_LEARNING_RATE,
                 beta1=DEFAULT_BETA1,
                 beta2=DEFAULT_BETA2,
                 epsilon=DEFAULT_EPSILON,
                 ):

        if learning_rate <= 0:
            raise ValueError("Learning rate must be positive")
        for name, beta in (('beta1', beta1), ('beta2', beta2)):
            if not 0 <= beta < 1:
                raise ValueError("{} must be in [0, 1), got {}".format(name, beta))
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")

        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self.t = 0
        self.first_moments = {}
        self.second_moments = {}

    ##############################################

    def moments(self, key, shape):
        if key not in self.first_moments:
            self.first_moments[key] = np.zeros(shape)
            self.second_moments[key] = np.zeros(shape)
        m = self.first_moments[key]
        if m.shape != tuple(shape):
            raise DimensionError("Moment of {} has shape {}, gradient has {}".format(key, m.shape, shape))
        return m, self.second_moments[key]

    ##############################################

    def hyper_parameters(self):
        return dict(learning_rate=self.learning_rate, beta1=self.beta1, beta2=self.beta2, epsilon=self.epsilon)

####################################################################################################

def _named(parameters):
    named = []
    for i, item in enumerate(parameters):
        if isinstance(item, tuple):
            named.append(item)
        else:
            named.append((item.name or i, item))
    return named

####################################################################################################

def nadam_step(parameters, gradients, state):

    """Update in place the *parameters*, a list of tensors or of (name, tensor), with their
    *gradients* and return the parameters and the state.

    The gradients are checked before any update, a non finite gradient raises
    :class:`NonFiniteGradientError` and leaves the parameters and the state unchanged.
    """

    parameters = _named(parameters)
    gradients = [np.asarray(gradient, dtype=np.float64) for gradient in gradients]
    if len(parameters) != len(gradients):
        raise ValueError("{} gradients for {} parameters".format(len(gradients), len(parameters)))
    for (key, tensor), gradient in zip(parameters, gradients):
        if gradient.shape != tensor.shape:
            raise DimensionError("Gradient of {} has shape {}, parameter has {}".format(key, gradient.shape, tensor.shape))
        if not np.all(np.isfinite(gradient)):
            raise NonFiniteGradientError("Non finite gradient for parameter {} at step {}".format(key, state.t + 1))

    state.t += 1
    t = state.t
    beta1, beta2 = state.beta1, state.beta2
    correction1 = 1. - beta1**t
    correction2 = 1. - beta2**t

    for (key, tensor), g in zip(parameters, gradients):
        m, v = state.moments(key, g.shape)
        m *= beta1
        m += (1. - beta1) * g
        v *= beta2
        v += (1. - beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        m_nesterov = beta1 * m_hat + (1. - beta1) * g / correction1
        delta = state.learning_rate * m_nesterov / (np.sqrt(v_hat) + state.epsilon)
        tensor.assign(tensor.values - delta)

    return parameters, state

####################################################################################################

class Nadam:

    """This class applies :func:`nadam_step` to the accumulated gradients of a list of named
    parameters.
    """

    _logger = _module_logger.getChild('Nadam')

    ##############################################

    def __init__(self, parameters, state=None):
        self._parameters = _named(parameters)
        self.state = state or NadamState()

    ##############################################

    @property
    def parameters(self):
        return list(self._parameters)

    def zero_grad(self):
        for _, tensor in self._parameters:
            tensor.zero_grad()

    ##############################################

    def step(self):
        gradients = [tensor.grad if tensor.grad is not None else np.zeros(tensor.shape)
                     for _, tensor in self._parameters]
        nadam_step(self._parameters, gradients, self.state)
