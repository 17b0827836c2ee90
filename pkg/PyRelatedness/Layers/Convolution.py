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

"""This module implements the windowed convolution channels.

A channel of width *k* slides over the rows of a sentence matrix :math:`x \\in R^{s \\times d}`.  The
window at position *i* is the concatenation :math:`w_i = x_i \\oplus \\dots \\oplus x_{i+k-1}` and the
feature of kernel *j* is :math:`m_i = relu(w_i \\cdot c_j + b_j)`.  The output has one row per window,
:math:`(s - k + 1) \\times j`.  There is no pooling.

"""

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from .Embedding import SentenceMatrix
from .Initializer import he_normal

####################################################################################################

class SequenceTooShortError(ValueError):
    pass

####################################################################################################

class ConvChannel:

    """This class holds the parameters of a convolution channel.

    Public Attributes:

      :attr:`width`
        kernel width *k* in tokens

      :attr:`kernels`
        :class:`Tensor` of shape (k*d, j), column *j* is the flattened k x d kernel

      :attr:`bias`
        :class:`Tensor` of shape (j,)

    """

    ##############################################

    def __init__(self, width, kernels, bias, name='conv'):

        if width < 1:
            raise ValueError("Kernel width must be >= 1")
        if kernels.ndim != 2 or kernels.shape[0] % width:
            raise ValueError("Kernel matrix {} incompatible with width {}".format(kernels.shape, width))
        if bias.shape != (kernels.shape[1],):
            raise ValueError("Bias {} for {} kernels".format(bias.shape, kernels.shape[1]))

        self._width = int(width)
        self.kernels = kernels
        self.bias = bias
        self.name = name

    ##############################################

    @classmethod
    def initialize(cls, width, dimension, count, rng, name='conv'):
        fan_in = width * dimension
        kernels = Tensor(he_normal(rng, fan_in, (fan_in, count)), requires_grad=True, name=name + '.kernels')
        bias = Tensor(np.zeros(count), requires_grad=True, name=name + '.bias')
        return cls(width, kernels, bias, name)

    ##############################################

    @property
    def width(self):
        return self._width

    @property
    def count(self):
        return self.kernels.shape[1]

    @property
    def dimension(self):
        return self.kernels.shape[0] // self._width

    def kernel(self, j):
        """Return the kernel *j* as a k x d array"""
        return self.kernels.values[:, j].reshape(self._width, self.dimension)

    def output_length(self, s):
        return s - self._width + 1

    def parameters(self):
        return (
            (self.name + '.kernels', self.kernels),
            (self.name + '.bias', self.bias),
        )

####################################################################################################

def _as_matrix(x):
    if isinstance(x, SentenceMatrix):
        return x.x
    return x

####################################################################################################

def conv_channel(x, channel):

    """Apply the channel to a sentence matrix (or a (s, d) tensor) and return the (s-k+1, j) feature
    map.
    """

    return conv_channel_batch(_as_matrix(x), 1, channel)

####################################################################################################

def conv_channel_batch(x, batch, channel):

    """Apply the channel to *batch* sequences of the same length stacked along the rows of *x*.

    The feature maps are stacked the same way, (batch * (s-k+1), j).
    """

    rows, d = x.shape
    if batch < 1 or rows % batch:
        raise ValueError("{} rows for a batch of {}".format(rows, batch))
    s = rows // batch
    if s < channel.width:
        raise SequenceTooShortError("Sequence of {} rows is shorter than the kernel width {}".format(s, channel.width))
    if d != channel.dimension:
        raise ValueError("Input dimension {} vs kernel dimension {}".format(d, channel.dimension))
    windows = F.unfold_batch(x, batch, channel.width)
    return F.relu(F.add_bias(F.matmul(windows, channel.kernels), channel.bias))

####################################################################################################

def window_validity(mask, width):

    """Return a boolean array, one entry per window, true when no position of the window is masked.

    *mask* is true at masked (padding) positions.  For a (B, s) batch of masks, return the
    flattened (B * (s-k+1),) array matching the rows of :func:`conv_channel_batch`.
    """

    mask = np.asarray(mask, dtype=bool)
    if mask.ndim == 2:
        return np.concatenate([window_validity(row, width) for row in mask])
    length = mask.size - width + 1
    if length < 1:
        raise SequenceTooShortError("Mask of {} positions is shorter than the kernel width {}".format(mask.size, width))
    masked_count = np.convolve(mask.astype(np.int64), np.ones(width, dtype=np.int64), mode='valid')
    return masked_count[:length] == 0

####################################################################################################

def mask_windows(feature_map, validity):

    """Zero the rows of a feature map for the invalid windows."""

    validity = np.asarray(validity, dtype=np.float64)
    if validity.shape != (feature_map.shape[0],):
        raise ValueError("{} window flags for a map of {} rows".format(validity.shape, feature_map.shape[0]))
    if validity.all():
        return feature_map
    mask = Tensor(np.repeat(validity[:, np.newaxis], feature_map.shape[1], axis=1))
    return F.mul(feature_map, mask)

####################################################################################################

def masked_conv(x, mask, channel):

    """Apply the channel and force to zero every window touching a masked position.

    *mask* is true at masked (padding) positions, it is a (s,) array for a single sequence or a
    (B, s) array for a batch stacked along the rows of *x*.  The output for the other windows is
    the one of :func:`conv_channel`, and it doesn't depend on the values at the masked positions.
    """

    x = _as_matrix(x)
    mask = np.asarray(mask, dtype=bool)
    batch = 1 if mask.ndim == 1 else mask.shape[0]
    if mask.size != x.shape[0]:
        raise ValueError("Mask of {} positions for a sequence of {} rows".format(mask.size, x.shape[0]))
    feature_map = conv_channel_batch(x, batch, channel)
    return mask_windows(feature_map, window_validity(mask, channel.width))
