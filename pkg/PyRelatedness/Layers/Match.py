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

"""This module implements the bilinear match between a candidate and the context tokens.

The candidate vector :math:`u` is the mean of the embeddings of its tokens.  Each of the *K* forms
:math:`W_k` scores a context token :math:`x_t` by :math:`s_{tk} = x_t^T W_k u`.  The scores of a
form are pooled over the context tokens twice, by their mean and by a soft maximum, giving a
(B, 2K) block.  Padding tokens don't take part in the scores nor in the pooling.

A form starts as the identity plus a small noise, so the initial scores are close to dot products
between the context tokens and the candidate.

"""

####################################################################################################

__all__ = [
    'DEFAULT_SHARPNESS',
    'MatchParams',
    'match_features',
]

####################################################################################################

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from .Initializer import uniform

####################################################################################################

DEFAULT_SHARPNESS = 4.
# score offset of the padding tokens in the soft maximum
MASK_OFFSET = -1e9

####################################################################################################

class MatchParams:

    """Public Attributes:

      :attr:`weight`
        the *K* forms side by side, (d, d*K)

      :attr:`forms`

      :attr:`sharpness`
        inverse temperature of the soft maximum

    """

    ##############################################

    def __init__(self, weight, forms, sharpness=DEFAULT_SHARPNESS, name='match'):
        d = weight.shape[0]
        if forms < 1 or weight.shape != (d, d*forms):
            raise ValueError("Match weight {} for {} forms".format(weight.shape, forms))
        self.weight = weight
        self.forms = forms
        self.sharpness = float(sharpness)
        self.name = name

    ##############################################

    @classmethod
    def initialize(cls, dimension, forms, rng, sharpness=DEFAULT_SHARPNESS, name='match'):
        identity = np.tile(np.eye(dimension), (1, forms))
        weight = identity + uniform(rng, (dimension, dimension*forms))
        return cls(Tensor(weight, requires_grad=True, name=name + '.weight'), forms, sharpness, name)

    ##############################################

    @property
    def dimension(self):
        return self.weight.shape[0]

    @property
    def output_size(self):
        return 2*self.forms

    def parameters(self):
        return ((self.name + '.weight', self.weight),)

####################################################################################################

def _averaging_matrix(mask):

    """Return the (B, B*s) matrix averaging the unmasked rows of each sequence, a row of zeros for a
    fully masked sequence.
    """

    keep = ~mask
    batch, length = mask.shape
    counts = keep.sum(axis=1)
    weights = np.where(keep, 1. / np.maximum(counts, 1)[:, np.newaxis], 0.)
    matrix = np.zeros((batch, batch*length))
    for b in range(batch):
        matrix[b, b*length:(b+1)*length] = weights[b]
    return matrix

####################################################################################################

def match_features(context, context_mask, candidate, candidate_mask, params):

    """Return the (B, 2K) match block.

    *context* stacks the (B * Lx, d) embeddings of the context tokens, *candidate* the (B * Lc, d)
    embeddings of the candidate tokens.  The masks are (B, L) boolean arrays, true at the padding
    positions.
    """

    context_mask = np.asarray(context_mask, dtype=bool)
    candidate_mask = np.asarray(candidate_mask, dtype=bool)
    batch, length = context_mask.shape
    d = params.dimension
    K = params.forms
    if context.shape != (batch*length, d) or candidate.shape != (candidate_mask.size, d):
        raise ValueError("Inputs {} {} for masks {} {} and dimension {}".format(
            context.shape, candidate.shape, context_mask.shape, candidate_mask.shape, d))
    if candidate_mask.shape[0] != batch:
        raise ValueError("{} candidates for {} contexts".format(candidate_mask.shape[0], batch))

    keep = (~context_mask).reshape(-1, 1).astype(np.float64)
    tokens = F.mul(context, Tensor(np.repeat(keep, d, axis=1)))
    u = F.matmul(Tensor(_averaging_matrix(candidate_mask)), candidate)

    # spread the candidate vector over the rows of its context and over the forms
    owner = np.repeat(np.eye(batch), length, axis=0)
    u_rows = F.matmul(F.matmul(Tensor(owner), u), Tensor(np.tile(np.eye(d), (1, K))))
    products = F.mul(F.matmul(tokens, params.weight), u_rows)
    scores = F.matmul(products, Tensor(np.kron(np.eye(K), np.ones((d, 1)))))

    mean_pool = F.matmul(Tensor(_averaging_matrix(context_mask)), scores)

    # one row per (form, image)
    by_form = F.reshape(F.transpose(scores), (K*batch, length))
    offsets = np.where(context_mask, MASK_OFFSET, 0.)
    offsets[context_mask.all(axis=1)] = 0.
    energies = F.add(F.scale(by_form, params.sharpness), Tensor(np.tile(offsets, (K, 1))))
    alpha = F.softmax_rows(energies)
    soft_max = F.weighted_sum(alpha, F.reshape(by_form, (K*batch, length, 1)))
    soft_max_pool = F.transpose(F.reshape(soft_max, (K, batch)))

    return F.concat((mean_pool, soft_max_pool), axis=1)
