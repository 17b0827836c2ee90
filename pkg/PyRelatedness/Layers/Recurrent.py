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

"""This module implements the LSTM layer.
"""

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from .Initializer import uniform, FORGET_GATE_BIAS

####################################################################################################

class LSTMParams:

    """This class holds the LSTM weights.

    The four gate blocks are stored side by side in the order input, forget, output, candidate.

    Public Attributes:

      :attr:`input_weights`
        (n, 4H)

      :attr:`recurrent_weights`
        (H, 4H)

      :attr:`bias`
        (4H,)

    """

    GATES = ('input', 'forget', 'output', 'candidate')

    ##############################################

    def __init__(self, input_weights, recurrent_weights, bias, name='lstm'):

        hidden_size = recurrent_weights.shape[0]
        if (input_weights.shape[1] != 4*hidden_size
            or recurrent_weights.shape != (hidden_size, 4*hidden_size)
            or bias.shape != (4*hidden_size,)):
            raise ValueError("Inconsistent LSTM blocks {} {} {}".format(
                input_weights.shape, recurrent_weights.shape, bias.shape))

        self.input_weights = input_weights
        self.recurrent_weights = recurrent_weights
        self.bias = bias
        self.name = name

    ##############################################

    @classmethod
    def initialize(cls, input_size, hidden_size, rng, name='lstm'):
        bias = np.zeros(4*hidden_size)
        bias[hidden_size:2*hidden_size] = FORGET_GATE_BIAS
        return cls(
            Tensor(uniform(rng, (input_size, 4*hidden_size)), requires_grad=True, name=name + '.input_weights'),
            Tensor(uniform(rng, (hidden_size, 4*hidden_size)), requires_grad=True, name=name + '.recurrent_weights'),
            Tensor(bias, requires_grad=True, name=name + '.bias'),
            name,
        )

    ##############################################

    @property
    def hidden_size(self):
        return self.recurrent_weights.shape[0]

    @property
    def input_size(self):
        return self.input_weights.shape[0]

    def gate_block(self, gate):
        """Return the column slice of a gate"""
        H = self.hidden_size
        index = self.GATES.index(gate)
        return slice(index*H, (index+1)*H)

    def parameters(self):
        return (
            (self.name + '.input_weights', self.input_weights),
            (self.name + '.recurrent_weights', self.recurrent_weights),
            (self.name + '.bias', self.bias),
        )

####################################################################################################

def lstm_forward(sequence, params):

    """Run the LSTM over the rows of *sequence*, one row per time step, and return all the hidden
    states :math:`h_1 \\dots h_T` as a (T, H) tensor.

    A (B, T, n) batch of sequences gives a (B, T, H) tensor.
    """

    if sequence.ndim not in (2, 3) or sequence.shape[-2] < 1:
        raise ValueError("Expected a (T, n) or (B, T, n) sequence, got {}".format(sequence.shape))
    return F.lstm_sequence(sequence, params.input_weights, params.recurrent_weights, params.bias)

####################################################################################################

def last_state(states, valid=None):

    """Return :math:`h_T` as a (1, H) tensor, (B, H) for a batch.

    For a batch, the boolean (B, T) array *valid* selects the last valid step of each sequence, a
    sequence without valid step falls back to the last step.
    """

    if states.ndim == 3:
        B, T, H = states.shape
        if valid is None:
            return F.slice_columns(F.reshape(states, (B, T*H)), (T-1)*H, T*H)
        valid = np.asarray(valid, dtype=bool)
        if valid.shape != (B, T):
            raise ValueError("Step mask {} for states {}".format(valid.shape, states.shape))
        steps = np.where(valid.any(axis=1), T - 1 - np.argmax(valid[:, ::-1], axis=1), T - 1)
        selector = np.zeros((B, T))
        selector[np.arange(B), steps] = 1.
        return F.weighted_sum(Tensor(selector), states)
    T = states.shape[0]
    return F.slice_rows(states, T - 1, T)
