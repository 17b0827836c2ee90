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

"""This module implements small numerical helpers.
"""

####################################################################################################

import math

####################################################################################################

PROBABILITY_FLOOR = 1e-7

####################################################################################################

def odd(x):
    """Return True is *x* is odd"""
    return x & 1

def even(x):
    """Return True is *x* is even"""
    return not(odd(x))

####################################################################################################

def clamp_probability(p, floor=PROBABILITY_FLOOR):
    """Clamp *p* to :math:`[floor, 1 - floor]`"""
    return min(max(float(p), floor), 1. - floor)

def safe_log(x, floor):
    """Return :math:`\\log \\max(x, floor)`"""
    return math.log(max(float(x), floor))

####################################################################################################

def relative_error(a, b, floor=1e-8):
    """Return :math:`|a - b| / \\max(|a|, |b|, floor)`"""
    return abs(a - b) / max(abs(a), abs(b), floor)
