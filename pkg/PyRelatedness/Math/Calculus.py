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

"""This module provides the finite difference machinery used to verify the reverse-mode gradients.

The stencil coefficients are computed exactly with rationals, the gradient of a scalar function of
an array is then estimated entry by entry with a centred stencil.
"""

####################################################################################################

import fractions

import numpy as np

####################################################################################################

from . import odd

####################################################################################################

def compute_exact_finite_difference_coefficients(derivative_order, grid, x0=0):

    """This function compute the finite difference coefficients for the given derivative order and
    grid.  The parameter *x0* specifies where is computed the derivative on the grid.  The grid is
    given as a list of integer offsets.

    The algorithm is the classical recursive construction of finite difference weights on an
    arbitrary grid.
    """

    N = len(grid)

    # d[m,n,v]
    d = [[[0
           for v in range(N)]
          for n in range(N)]
         for m in range(derivative_order +1)]

    d[0][0][0] = fractions.Fraction(1,1)
    c1 = 1
    for n in range(1, N):
        c2 = 1
        for v in range(n):
            c3 = grid[n] - grid[v]
            c2 *= c3
            if n <= derivative_order:
                d[n][n-1][v] = 0
            for m in range(min(n, derivative_order) +1):
                d[m][n][v] = ( (grid[n] - x0)*d[m][n-1][v] - m*d[m-1][n-1][v] ) / c3
        for m in range(min(n, derivative_order) +1):
            d[m][n][n] = fractions.Fraction(c1,c2)*( m*d[m-1][n-1][n-1] - (grid[n-1] - x0)*d[m][n-1][n-1] )
        c1 = c2

    return d[-1][-1]

####################################################################################################

_coefficient_cache = {}

def centred_stencil(accuracy_order=2):

    """Return the offsets and the float coefficients of the centred first derivative stencil at the
    given accuracy order.  Offsets with a null coefficient are dropped.
    """

    if odd(accuracy_order) or accuracy_order < 2:
        raise ValueError("Wrong accuracy order {}".format(accuracy_order))

    stencil = _coefficient_cache.get(accuracy_order, None)
    if stencil is None:
        window_size = accuracy_order // 2
        grid = list(range(-window_size, window_size +1))
        coefficients = compute_exact_finite_difference_coefficients(1, grid)
        stencil = tuple((offset, float(coefficient))
                        for offset, coefficient in zip(grid, coefficients)
                        if coefficient)
        _coefficient_cache[accuracy_order] = stencil

    return stencil

####################################################################################################

def numerical_gradient(function, x, eps, accuracy_order=2, entries=None):

    """Estimate the gradient of the scalar *function* at the array *x*.

    *x* is perturbed in place and restored after each evaluation.  When *entries* is given, only
    these flat indices are estimated and the other entries of the result are left to zero.
    """

    stencil = centred_stencil(accuracy_order)
    gradient = np.zeros_like(x, dtype=np.float64)
    flat_x = x.reshape(-1)
    flat_gradient = gradient.reshape(-1)
    if entries is None:
        entries = range(flat_x.size)
    for i in entries:
        saved = flat_x[i]
        value = 0.
        for offset, coefficient in stencil:
            flat_x[i] = saved + offset*eps
            value += coefficient * float(function())
        flat_x[i] = saved
        flat_gradient[i] = value / eps
    return gradient
