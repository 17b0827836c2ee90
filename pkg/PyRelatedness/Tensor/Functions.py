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

"""This module implements the differentiable operations on :class:`Tensor`.

Each function computes its output with Numpy and registers the local gradient rule.  Shapes must
agree exactly: the only broadcast is the row-wise bias addition of :func:`add_bias`.

"""

####################################################################################################

__all__ = [
    'add',
    'add_bias',
    'apply_unary',
    'batch_norm_infer',
    'batch_norm_train',
    'binary_cross_entropy',
    'concat',
    'gather_rows',
    'lstm_sequence',
    'matmul',
    'mean',
    'mul',
    'relu',
    'reshape',
    'scale',
    'sigmoid',
    'slice_columns',
    'slice_rows',
    'softmax_norm',
    'softmax_rows',
    'sub',
    'sum',
    'tanh',
    'transpose',
    'unfold',
    'unfold_batch',
    'weighted_sum',
]

####################################################################################################

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit, softmax

####################################################################################################

from .Tensor import Tensor, DimensionError, DTYPE

####################################################################################################

def _as_tensor(x):
    if isinstance(x, Tensor):
        return x
    return Tensor(x)

def _check_same_shape(operation, a, b):
    if a.shape != b.shape:
        raise DimensionError("{}: shape mismatch {} vs {}".format(operation, a.shape, b.shape))

def _check_ndim(operation, x, ndim):
    if x.ndim != ndim:
        raise DimensionError("{}: expected a {}-d tensor, got shape {}".format(operation, ndim, x.shape))

####################################################################################################
#
# Element-wise arithmetic
#

def add(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape('add', a, b)
    return Tensor._from_operation(a.values + b.values, 'add', (a, b), lambda g: (g, g))

def sub(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape('sub', a, b)
    return Tensor._from_operation(a.values - b.values, 'sub', (a, b), lambda g: (g, -g))

def mul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape('mul', a, b)
    return Tensor._from_operation(a.values * b.values, 'mul', (a, b),
                                  lambda g: (g * b.values, g * a.values))

def scale(x, factor):
    factor = float(factor)
    return Tensor._from_operation(x.values * factor, 'scale', (x,), lambda g: (g * factor,))

####################################################################################################
#
# Non-linearities
#

def relu(x):
    # the subgradient at 0 is 0
    mask = x.values > 0
    return Tensor._from_operation(np.where(mask, x.values, 0.), 'relu', (x,), lambda g: (g * mask,))

def tanh(x):
    y = np.tanh(x.values)
    return Tensor._from_operation(y, 'tanh', (x,), lambda g: (g * (1. - y*y),))

def sigmoid(x):
    y = expit(x.values)
    return Tensor._from_operation(y, 'sigmoid', (x,), lambda g: (g * y * (1. - y),))

_unary_functions = {
    'relu': relu,
    'tanh': tanh,
    'sigmoid': sigmoid,
    'linear': lambda x: x,
}

def apply_unary(x, function):

    """Apply the element-wise function named *function*: relu, tanh, sigmoid or linear."""

    try:
        return _unary_functions[function](x)
    except KeyError:
        raise ValueError("Unknown function {}".format(function))

####################################################################################################
#
# Linear algebra
#

def matmul(a, b):
    _check_ndim('matmul', a, 2)
    _check_ndim('matmul', b, 2)
    if a.shape[1] != b.shape[0]:
        raise DimensionError("matmul: inner dimensions of {} and {} don't agree".format(a.shape, b.shape))
    def rule(g):
        return g @ b.values.T, a.values.T @ g
    return Tensor._from_operation(a.values @ b.values, 'matmul', (a, b), rule)

def add_bias(x, b):
    _check_ndim('add_bias', x, 2)
    _check_ndim('add_bias', b, 1)
    if x.shape[1] != b.shape[0]:
        raise DimensionError("add_bias: {} rows vs bias {}".format(x.shape, b.shape))
    return Tensor._from_operation(x.values + b.values, 'add_bias', (x, b),
                                  lambda g: (g, g.sum(axis=0)))

def transpose(x):
    _check_ndim('transpose', x, 2)
    return Tensor._from_operation(x.values.T, 'transpose', (x,), lambda g: (g.T,))

def reshape(x, shape):
    shape = tuple(shape)
    input_shape = x.shape
    try:
        values = x.values.reshape(shape)
    except ValueError:
        raise DimensionError("reshape: cannot reshape {} to {}".format(input_shape, shape))
    return Tensor._from_operation(values, 'reshape', (x,), lambda g: (g.reshape(input_shape),))

####################################################################################################
#
# Reductions
#

def sum(x):
    shape = x.shape
    return Tensor._from_operation(np.sum(x.values), 'sum', (x,),
                                  lambda g: (np.full(shape, float(g), dtype=DTYPE),))

def mean(x):
    shape = x.shape
    n = x.size
    return Tensor._from_operation(np.mean(x.values), 'mean', (x,),
                                  lambda g: (np.full(shape, float(g) / n, dtype=DTYPE),))

def softmax_norm(v):

    """Normalised exponential of a vector, computed with max subtraction."""

    if v.ndim != 1:
        raise DimensionError("softmax_norm: expected a vector, got shape {}".format(v.shape))
    s = softmax(v.values)
    def rule(g):
        return (s * (g - np.dot(g, s)),)
    return Tensor._from_operation(s, 'softmax', (v,), rule)

####################################################################################################
#
# Structural operations
#

def concat(tensors, axis=0):
    tensors = [_as_tensor(x) for x in tensors]
    if not tensors:
        raise ValueError("concat: nothing to concatenate")
    ndim = tensors[0].ndim
    for x in tensors:
        if x.ndim != ndim:
            raise DimensionError("concat: mixed ranks {}".format([y.shape for y in tensors]))
    try:
        values = np.concatenate([x.values for x in tensors], axis=axis)
    except ValueError:
        raise DimensionError("concat: incompatible shapes {}".format([x.shape for x in tensors]))
    bounds = np.cumsum([0] + [x.shape[axis] for x in tensors])
    def rule(g):
        return tuple(np.take(g, range(start, stop), axis=axis)
                     for start, stop in zip(bounds[:-1], bounds[1:]))
    return Tensor._from_operation(values, 'concat', tensors, rule)

def _slice(x, axis, start, stop, name):
    _check_ndim(name, x, 2)
    extent = x.shape[axis]
    if not 0 <= start < stop <= extent:
        raise DimensionError("{}: invalid range [{}, {}) for shape {}".format(name, start, stop, x.shape))
    index = [slice(None), slice(None)]
    index[axis] = slice(start, stop)
    index = tuple(index)
    shape = x.shape
    def rule(g):
        gradient = np.zeros(shape, dtype=DTYPE)
        gradient[index] = g
        return (gradient,)
    return Tensor._from_operation(x.values[index], name, (x,), rule)

def slice_rows(x, start, stop):
    return _slice(x, 0, start, stop, 'slice_rows')

def slice_columns(x, start, stop):
    return _slice(x, 1, start, stop, 'slice_columns')

def gather_rows(table, indices):

    """Return the rows of *table* selected by *indices*, the gradient is scattered back with
    accumulation on repeated indices.
    """

    _check_ndim('gather_rows', table, 2)
    indices = np.asarray(indices, dtype=np.int64)
    if indices.ndim != 1 or indices.size == 0:
        raise DimensionError("gather_rows: expected a non empty index vector")
    if indices.min() < 0 or indices.max() >= table.shape[0]:
        raise IndexError("gather_rows: index out of range for table {}".format(table.shape))
    shape = table.shape
    def rule(g):
        gradient = np.zeros(shape, dtype=DTYPE)
        np.add.at(gradient, indices, g)
        return (gradient,)
    return Tensor._from_operation(table.values[indices], 'gather_rows', (table,), rule)

def unfold(x, width):

    """Concatenate each window of *width* consecutive rows of a matrix.

    For an input of shape (s, d) return a matrix of shape (s - width + 1, width * d) where row *i*
    is :math:`x_i \\oplus x_{i+1} \\oplus \\dots \\oplus x_{i+width-1}`.
    """

    return unfold_batch(x, 1, width)

def unfold_batch(x, batch, width):

    """Apply :func:`unfold` to a batch of sequences of the same length stacked along the rows.

    For an input of shape (batch * s, d) return a matrix of shape (batch * (s - width + 1),
    width * d), the windows never cross two sequences.
    """

    _check_ndim('unfold', x, 2)
    rows, d = x.shape
    if batch < 1 or rows % batch:
        raise DimensionError("unfold: {} rows for a batch of {}".format(rows, batch))
    s = rows // batch
    if not 1 <= width <= s:
        raise DimensionError("unfold: window {} for {} rows".format(width, s))
    length = s - width + 1
    # (batch, length, 1, width, d) -> (batch*length, width*d)
    windows = sliding_window_view(x.values.reshape(batch, s, d), (width, d), axis=(1, 2))
    windows = windows[:, :, 0].reshape(batch*length, width*d)
    def rule(g):
        g = g.reshape(batch, length, width, d)
        gradient = np.zeros((batch, s, d), dtype=DTYPE)
        for offset in range(width):
            gradient[:, offset:offset+length] += g[:, :, offset]
        return (gradient.reshape(rows, d),)
    return Tensor._from_operation(np.ascontiguousarray(windows), 'unfold', (x,), rule)

####################################################################################################
#
# Fused layers
#

def lstm_sequence(x, w, u, b):

    """Run an LSTM over the rows of *x* and return all the hidden states.

    *x* is a (T, n) sequence or a (B, T, n) batch of sequences, the output is (T, H) or (B, T, H).
    The gate blocks of *w* (n x 4H), *u* (H x 4H) and *b* (4H) are ordered input, forget, output,
    candidate.  The initial hidden and cell states are null.  The backward rule is the exact
    back-propagation through time.
    """

    if x.ndim not in (2, 3):
        raise DimensionError("lstm: expected a 2-d or 3-d input, got shape {}".format(x.shape))
    batched = x.ndim == 3
    X = x.values if batched else x.values[np.newaxis]
    N, T, n = X.shape
    if w.shape[0] != n or w.shape[1] % 4:
        raise DimensionError("lstm: input weights {} for input {}".format(w.shape, x.shape))
    H = w.shape[1] // 4
    if u.shape != (H, 4*H) or b.shape != (4*H,):
        raise DimensionError("lstm: recurrent weights {} / bias {} for hidden size {}".format(u.shape, b.shape, H))

    W, U, B = w.values, u.values, b.values
    input_projection = X @ W + B
    gates = np.zeros((N, T, 4*H), dtype=DTYPE)
    cells = np.zeros((N, T+1, H), dtype=DTYPE)   # cells[:, 0] is the initial state
    states = np.zeros((N, T+1, H), dtype=DTYPE)
    for t in range(T):
        z = input_projection[:, t] + states[:, t] @ U
        i = expit(z[:, :H])
        f = expit(z[:, H:2*H])
        o = expit(z[:, 2*H:3*H])
        c_tilde = np.tanh(z[:, 3*H:])
        gates[:, t] = np.concatenate((i, f, o, c_tilde), axis=1)
        cells[:, t+1] = f*cells[:, t] + i*c_tilde
        states[:, t+1] = o*np.tanh(cells[:, t+1])

    def rule(g):
        if not batched:
            g = g[np.newaxis]
        dz = np.zeros((N, T, 4*H), dtype=DTYPE)
        dh_next = np.zeros((N, H), dtype=DTYPE)
        dc_next = np.zeros((N, H), dtype=DTYPE)
        for t in range(T-1, -1, -1):
            gate = gates[:, t]
            i, f, o, c_tilde = gate[:, :H], gate[:, H:2*H], gate[:, 2*H:3*H], gate[:, 3*H:]
            tanh_c = np.tanh(cells[:, t+1])
            dh = g[:, t] + dh_next
            dc = dh*o*(1. - tanh_c*tanh_c) + dc_next
            dz[:, t, :H] = dc*c_tilde * i*(1. - i)
            dz[:, t, H:2*H] = dc*cells[:, t] * f*(1. - f)
            dz[:, t, 2*H:3*H] = dh*tanh_c * o*(1. - o)
            dz[:, t, 3*H:] = dc*i * (1. - c_tilde*c_tilde)
            dc_next = dc*f
            dh_next = dz[:, t] @ U.T
        dx = dz @ W.T
        if not batched:
            dx = dx[0]
        flat_dz = dz.reshape(N*T, 4*H)
        return (dx,
                X.reshape(N*T, n).T @ flat_dz,
                states[:, :-1].reshape(N*T, H).T @ flat_dz,
                flat_dz.sum(axis=0))

    output = states[:, 1:] if batched else states[0, 1:]
    return Tensor._from_operation(output, 'lstm', (x, w, u, b), rule)

####################################################################################################

def softmax_rows(x):

    """Normalised exponential of each row of a matrix."""

    _check_ndim('softmax_rows', x, 2)
    s = softmax(x.values, axis=1)
    def rule(g):
        return (s * (g - (g*s).sum(axis=1, keepdims=True)),)
    return Tensor._from_operation(s, 'softmax_rows', (x,), rule)

def weighted_sum(alpha, states):

    """Return the (B, H) matrix of the sums :math:`\\sum_t \\alpha_{bt} h_{bt}` for (B, T) weights and
    (B, T, H) states.
    """

    _check_ndim('weighted_sum', alpha, 2)
    _check_ndim('weighted_sum', states, 3)
    if alpha.shape != states.shape[:2]:
        raise DimensionError("weighted_sum: weights {} for states {}".format(alpha.shape, states.shape))
    A, S = alpha.values, states.values
    def rule(g):
        return np.einsum('bh,bth->bt', g, S), A[:, :, np.newaxis] * g[:, np.newaxis, :]
    return Tensor._from_operation(np.einsum('bt,bth->bh', A, S), 'weighted_sum', (alpha, states), rule)

####################################################################################################

def batch_norm_train(x, gamma, beta, epsilon):

    """Normalise the columns of *x* by the batch statistics then scale and shift.

    Return the output tensor, the batch mean and the biased batch variance.
    """

    _check_ndim('batch_norm', x, 2)
    N, F = x.shape
    if gamma.shape != (F,) or beta.shape != (F,):
        raise DimensionError("batch_norm: {} features vs gamma {} / beta {}".format(F, gamma.shape, beta.shape))
    mu = x.values.mean(axis=0)
    centred = x.values - mu
    variance = (centred*centred).mean(axis=0)
    inv_std = 1. / np.sqrt(variance + epsilon)
    x_hat = centred * inv_std
    def rule(g):
        dx_hat = g * gamma.values
        dx = inv_std / N * (N*dx_hat - dx_hat.sum(axis=0) - x_hat*(dx_hat*x_hat).sum(axis=0))
        return dx, (g*x_hat).sum(axis=0), g.sum(axis=0)
    output = Tensor._from_operation(x_hat*gamma.values + beta.values, 'batch_norm', (x, gamma, beta), rule)
    return output, mu, variance

def batch_norm_infer(x, gamma, beta, running_mean, running_variance, epsilon):

    """Normalise the columns of *x* by the running statistics then scale and shift."""

    _check_ndim('batch_norm', x, 2)
    F = x.shape[1]
    if gamma.shape != (F,) or beta.shape != (F,):
        raise DimensionError("batch_norm: {} features vs gamma {} / beta {}".format(F, gamma.shape, beta.shape))
    inv_std = 1. / np.sqrt(np.asarray(running_variance) + epsilon)
    x_hat = (x.values - running_mean) * inv_std
    def rule(g):
        return g*gamma.values*inv_std, (g*x_hat).sum(axis=0), g.sum(axis=0)
    return Tensor._from_operation(x_hat*gamma.values + beta.values, 'batch_norm', (x, gamma, beta), rule)

####################################################################################################

def binary_cross_entropy(prediction, target, floor):

    """Mean binary cross-entropy of the predictions clamped to :math:`[floor, 1 - floor]`.

    *target* is a constant array.  The clamp has a null gradient outside of its range.
    """

    target = np.asarray(target, dtype=DTYPE).reshape(prediction.shape)
    p = prediction.values
    inside = (p >= floor) & (p <= 1. - floor)
    p = np.clip(p, floor, 1. - floor)
    n = p.size
    loss = -np.mean(target*np.log(p) + (1. - target)*np.log(1. - p))
    def rule(g):
        return (float(g) * inside * (p - target) / (p*(1. - p)) / n,)
    return Tensor._from_operation(loss, 'bce', (prediction,), rule)
