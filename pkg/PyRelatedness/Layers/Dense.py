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

"""This module implements the fully connected layer.
"""

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from .Initializer import uniform

####################################################################################################

def dense(x, weight, bias, activation='linear'):

    """Return :math:`activation(x W + b)` for a (m, n) input, a (n, p) weight and a (p,) bias."""

    return F.apply_unary(F.add_bias(F.matmul(x, weight), bias), activation)

####################################################################################################

class DenseLayer:

    """Public Attributes:

      :attr:`weight`

      :attr:`bias`

      :attr:`activation`
        relu, tanh, sigmoid or linear

    """

    ##############################################

    def __init__(self, weight, bias, activation='linear', name='dense'):
        if bias.shape != (weight.shape[1],):
            raise ValueError("Bias {} for weight {}".format(bias.shape, weight.shape))
        self.weight = weight
        self.bias = bias
        self.activation = activation
        self.name = name

    ##############################################

    @classmethod
    def initialize(cls, input_size, output_size, rng, activation='linear', name='dense'):
        return cls(
            Tensor(uniform(rng, (input_size, output_size)), requires_grad=True, name=name + '.weight'),
            Tensor(np.zeros(output_size), requires_grad=True, name=name + '.bias'),
            activation, name,
        )

    ##############################################

    @property
    def input_size(self):
        return self.weight.shape[0]

    @property
    def output_size(self):
        return self.weight.shape[1]

    def parameters(self):
        return (
            (self.name + '.weight', self.weight),
            (self.name + '.bias', self.bias),
        )

    ##############################################

    def __call__(self, x):
        return dense(x, self.weight, self.bias, self.activation)
