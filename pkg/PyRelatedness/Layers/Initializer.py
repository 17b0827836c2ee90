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

"""This module implements the weight initialisations.

No initialisation is prescribed by the architecture, the choices are the usual ones: He normal for
the ReLU convolutions, a small uniform range for the recurrent, attention and dense weights and a
forget gate bias of one.

"""

####################################################################################################

import numpy as np

####################################################################################################

UNIFORM_RANGE = 0.08
FORGET_GATE_BIAS = 1.

####################################################################################################

def he_normal(rng, fan_in, shape):
    return rng.normal(0., np.sqrt(2. / fan_in), size=shape)

def uniform(rng, shape, scale=UNIFORM_RANGE):
    return rng.uniform(-scale, scale, size=shape)
