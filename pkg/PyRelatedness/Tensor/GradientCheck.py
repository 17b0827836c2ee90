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

"""This module implements the finite difference oracle used to verify the reverse-mode gradients.
"""

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Math import relative_error
from ..Math.Calculus import numerical_gradient
from .Tensor import Tensor, DimensionError

####################################################################################################

_module_logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-4
DEFAULT_ACCURACY_ORDER = 4
RELATIVE_ERROR_FLOOR = 1e-8
# entries above this error are estimated again with a step ten times smaller
REFINE_THRESHOLD = 1e-4
REFINE_FACTOR = 10.

####################################################################################################

def _scalar_value(output):
    if not isinstance(output, Tensor):
        raise DimensionError("The checked function must return a Tensor")
    if output.size != 1:
        raise DimensionError("The checked function must return a single value, got shape {}".format(output.shape))
    return output.item()

####################################################################################################

def gradient_errors(function, tensors, eps=DEFAULT_EPSILON, accuracy_order=DEFAULT_ACCURACY_ORDER,
                    max_entries=None, rng=None):

    """Compare the autodiff gradient of the scalar *function* with respect to each leaf of
    *tensors* to its centred finite difference estimate.

    *function* is called without argument and must rebuild its graph from the current values of
    the leaves.  When *max_entries* is set, at most this number of entries per tensor are checked,
    drawn without replacement from *rng*.  Return a list of the maximum relative error per tensor.
    """

    if eps <= 0:
        raise ValueError("eps must be positive")
    if max_entries is not None and rng is None:
        raise ValueError("an entry sample requires a random generator")

    for tensor in tensors:
        tensor.zero_grad()
    output = function()
    _scalar_value(output)
    output.backward()

    errors = []
    for tensor in tensors:
        analytic = tensor.grad if tensor.grad is not None else np.zeros(tensor.shape)
        if max_entries is None or tensor.size <= max_entries:
            entries = np.arange(tensor.size)
        else:
            entries = np.sort(rng.choice(tensor.size, size=max_entries, replace=False))
        evaluate = lambda: _scalar_value(function())
        flat_analytic = analytic.reshape(-1)
        flat_numeric = numerical_gradient(evaluate, tensor.values, eps, accuracy_order, entries).reshape(-1)
        entry_errors = {i: relative_error(flat_analytic[i], flat_numeric[i], RELATIVE_ERROR_FLOOR)
                        for i in entries}
        suspects = [i for i in entries if entry_errors[i] >= REFINE_THRESHOLD]
        if suspects:
            # a stencil straddling a kink of relu or of the loss clipping gives a wrong estimate
            refined = numerical_gradient(evaluate, tensor.values, eps/REFINE_FACTOR, accuracy_order,
                                         suspects).reshape(-1)
            for i in suspects:
                error = relative_error(flat_analytic[i], refined[i], RELATIVE_ERROR_FLOOR)
                entry_errors[i] = min(entry_errors[i], error)
            _module_logger.debug("refined {} entries of {}".format(len(suspects), tensor.name))
        error = max(entry_errors.values()) if entry_errors else 0.
        errors.append(error)
        tensor.zero_grad()

    return errors

####################################################################################################

def finite_diff_check(function, x, eps=DEFAULT_EPSILON, accuracy_order=DEFAULT_ACCURACY_ORDER):

    """Return the maximum relative error between the autodiff gradient of the scalar function
    ``function(x)`` and its centred finite difference estimate.

    The relative error of an entry is :math:`|a - n| / \\max(|a|, |n|, 10^{-8})`.
    """

    if not x.requires_grad:
        x.requires_grad = True
    errors = gradient_errors(lambda: function(x), (x,), eps, accuracy_order)
    _module_logger.debug("finite difference check: max relative error {:.3e}".format(errors[0]))
    return errors[0]
