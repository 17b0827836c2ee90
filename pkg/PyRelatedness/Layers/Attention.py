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

"""This module implements the feed forward attention pooling.

Each state is scored independently, :math:`e_t = \\tanh(h_t W_a) v_a^T`, the weights are
:math:`\\alpha = softmax(e)` and the pooled vector is :math:`c = \\sum_t \\alpha_t h_t`.  Since a
score only depends on its own state, the pooling ignores the order of the sequence.  Padding steps
are masked out of the softmax.
"""

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from .Initializer import uniform

####################################################################################################

class AttentionParams:

    """Public Attributes:

      :attr:`weight`
        :math:`W_a`, (H, H)

      :attr:`vector`
        :math:`v_a`, (H,)

    """

    ##############################################

    def __init__(self, weight, vector, name='attention'):
        H = weight.shape[0]
        if weight.shape != (H, H) or vector.shape != (H,):
            raise ValueError("Inconsistent attention shapes {} {}".format(weight.shape, vector.shape))
        self.weight = weight
        self.vector = vector
        self.name = name

    ##############################################

    @classmethod
    def initialize(cls, hidden_size, rng, name='attention'):
        return cls(
            Tensor(uniform(rng, (hidden_size, hidden_size)), requires_grad=True, name=name + '.weight'),
            Tensor(uniform(rng, (hidden_size,)), requires_grad=True, name=name + '.vector'),
            name,
        )

    ##############################################

    @property
    def hidden_size(self):
        return self.weight.shape[0]

    def parameters(self):
        return (
            (self.name + '.weight', self.weight),
            (self.name + '.vector', self.vector),
        )

####################################################################################################

def _check_states(states, params):
    if states.ndim not in (2, 3) or states.shape[-1] != params.hidden_size:
        raise ValueError("States {} for hidden size {}".format(states.shape, params.hidden_size))

def _energies(states, params):
    H = params.hidden_size
    rows = states if states.ndim == 2 else F.reshape(states, (states.shape[0]*states.shape[1], H))
    return F.matmul(F.tanh(F.matmul(rows, params.weight)), F.reshape(params.vector, (H, 1)))

####################################################################################################

# energy offset of the masked steps, their weight underflows to zero
MASK_OFFSET = -1e9

def _mask_offsets(valid, shape):
    valid = np.asarray(valid, dtype=bool)
    if valid.shape != shape:
        raise ValueError("Step mask {} for energies {}".format(valid.shape, shape))
    offsets = np.where(valid, 0., MASK_OFFSET)
    # a row without valid step keeps uniform weights
    offsets[~valid.any(axis=-1)] = 0.
    return Tensor(offsets)

####################################################################################################

def attention_weights(states, params, valid=None):

    """Return the attention weights :math:`\\alpha`, a (T,) tensor summing to one.

    For a (B, T, H) batch of state sequences, return a (B, T) tensor whose rows sum to one.  The
    boolean array *valid*, shaped as :math:`\\alpha`, gives a zero weight to the padding steps.
    """

    _check_states(states, params)
    energies = _energies(states, params)
    if states.ndim == 2:
        energies = F.reshape(energies, (states.shape[0],))
        if valid is not None:
            energies = F.add(energies, _mask_offsets(valid, energies.shape))
        return F.softmax_norm(energies)
    energies = F.reshape(energies, states.shape[:2])
    if valid is not None:
        energies = F.add(energies, _mask_offsets(valid, energies.shape))
    return F.softmax_rows(energies)

####################################################################################################

def attention_pool(states, params, valid=None):

    """Return the context vector :math:`c` as a (1, H) tensor, (B, H) for a batch."""

    alpha = attention_weights(states, params, valid)
    if states.ndim == 2:
        T = states.shape[0]
        return F.matmul(F.reshape(alpha, (1, T)), states)
    return F.weighted_sum(alpha, states)
