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

"""This module implements the binary cross-entropy loss.
"""

####################################################################################################

import math

import numpy as np

####################################################################################################

from ..Math import PROBABILITY_FLOOR, clamp_probability
from ..Tensor import Tensor
from ..Tensor import Functions as F

####################################################################################################

def bce_loss(prediction, target, floor=PROBABILITY_FLOOR):

    """Return the mean binary cross-entropy of the predictions against the targets.

    The predictions are clamped to :math:`[floor, 1 - floor]` so the loss is finite.
    """

    if not isinstance(prediction, Tensor):
        prediction = Tensor(np.atleast_1d(prediction))
    target = np.asarray(target, dtype=np.float64)
    if target.size != prediction.size:
        raise ValueError("{} targets for {} predictions".format(target.size, prediction.size))
    if np.any((target < 0) | (target > 1)):
        raise ValueError("Targets must be in [0, 1]")
    return F.binary_cross_entropy(prediction, target, floor)

####################################################################################################

def bce_value(prediction, target, floor=PROBABILITY_FLOOR):
    """Return the loss of a single prediction as a float"""
    p = clamp_probability(prediction, floor)
    return -(target*math.log(p) + (1. - target)*math.log(1. - p))
