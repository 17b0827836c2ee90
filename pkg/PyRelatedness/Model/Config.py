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

"""This module defines the architecture configuration of the relatedness model.
"""

####################################################################################################

__all__ = [
    'FDCLSTM',
    'FDCLSTM_AT',
    'VARIANTS',
    'ModelConfig',
]

####################################################################################################

FDCLSTM = 'fdclstm'
FDCLSTM_AT = 'fdclstm-at'
VARIANTS = (FDCLSTM, FDCLSTM_AT)

####################################################################################################

class ModelConfig:

    """This class holds the architecture hyper-parameters.

    Public Attributes:

      :attr:`variant`
        ``fdclstm`` (final LSTM state, no batch normalisation after the convolutions) or
        ``fdclstm-at`` (attention pooling, batch normalisation after each convolution)

      :attr:`kernel_widths`
        the four kernel widths of a subnetwork, (3, 3, 5, 8)

      :attr:`kernels_per_channel`

      :attr:`embedding_dimension`

      :attr:`hidden_size`
        LSTM hidden size

      :attr:`mlp_sizes`
        hidden layer sizes after the merge layer

      :attr:`dropout_rate`

      :attr:`max_candidate_length`
        candidate tokens, the channel input is padded to this length

      :attr:`max_context_length`
        context tokens, the context sequence is padded or truncated to this length

      :attr:`candidate_kernel_width`
        kernel width of the masked candidate channel

      :attr:`overlap_buckets`
        size of the hashed frequency count dictionary

      :attr:`overlap_width`
        output size of the overlap projection

      :attr:`match_forms`
        number of bilinear forms matching the candidate to the context tokens, 0 to disable the
        match block

    """

    NUMBER_OF_CHANNELS = 4

    DEFAULTS = dict(
        variant=FDCLSTM_AT,
        kernel_widths=(3, 3, 5, 8),
        kernels_per_channel=64,
        embedding_dimension=50,
        hidden_size=64,
        mlp_sizes=(128, 64),
        dropout_rate=0.7,
        max_candidate_length=4,
        max_context_length=32,
        candidate_kernel_width=1,
        overlap_buckets=1024,
        overlap_width=32,
        match_forms=4,
        bn_epsilon=1e-5,
        bn_momentum=0.9,
    )

    ##############################################

    def __init__(self, **kwargs):

        for key in kwargs:
            if key not in self.DEFAULTS:
                raise ValueError("Unknown model parameter {}".format(key))
        parameters = dict(self.DEFAULTS)
        parameters.update(kwargs)

        self.variant = str(parameters['variant'])
        self.kernel_widths = tuple(int(x) for x in parameters['kernel_widths'])
        self.kernels_per_channel = int(parameters['kernels_per_channel'])
        self.embedding_dimension = int(parameters['embedding_dimension'])
        self.hidden_size = int(parameters['hidden_size'])
        self.mlp_sizes = tuple(int(x) for x in parameters['mlp_sizes'])
        self.dropout_rate = float(parameters['dropout_rate'])
        self.max_candidate_length = int(parameters['max_candidate_length'])
        self.max_context_length = int(parameters['max_context_length'])
        self.candidate_kernel_width = int(parameters['candidate_kernel_width'])
        self.overlap_buckets = int(parameters['overlap_buckets'])
        self.overlap_width = int(parameters['overlap_width'])
        self.match_forms = int(parameters['match_forms'])
        self.bn_epsilon = float(parameters['bn_epsilon'])
        self.bn_momentum = float(parameters['bn_momentum'])

        self.validate()

    ##############################################

    @classmethod
    def toy(cls, variant=FDCLSTM_AT, **kwargs):

        """Return the small configuration used by the gradient checks and the overfit tests:
        d=8, H=8, j=4, a context of 12 tokens and one hidden layer of 32 units.
        """

        parameters = dict(
            variant=variant,
            kernels_per_channel=4,
            embedding_dimension=8,
            hidden_size=8,
            mlp_sizes=(32,),
            max_candidate_length=2,
            max_context_length=12,
            overlap_buckets=32,
            overlap_width=4,
        )
        parameters.update(kwargs)
        return cls(**parameters)

    ##############################################

    def validate(self):

        if self.variant not in VARIANTS:
            raise ValueError("Incorrect variant {}, expected one of {}".format(self.variant, VARIANTS))
        if len(self.kernel_widths) != self.NUMBER_OF_CHANNELS:
            raise ValueError("A subnetwork has exactly {} channels".format(self.NUMBER_OF_CHANNELS))
        if min(self.kernel_widths) < 1 or self.candidate_kernel_width < 1:
            raise ValueError("Kernel widths must be >= 1")
        for name in ('kernels_per_channel', 'embedding_dimension', 'hidden_size',
                     'overlap_buckets', 'overlap_width'):
            if getattr(self, name) < 1:
                raise ValueError("{} must be >= 1".format(name))
        if self.match_forms < 0:
            raise ValueError("match_forms must be >= 0")
        if any(size < 1 for size in self.mlp_sizes):
            raise ValueError("MLP sizes must be >= 1")
        if not 0 <= self.dropout_rate < 1:
            raise ValueError("Dropout rate must be in [0, 1)")
        if self.max_context_length < max(self.kernel_widths):
            raise ValueError("The context length {} is shorter than the widest kernel".format(self.max_context_length))
        if self.max_candidate_length < self.candidate_kernel_width:
            raise ValueError("The candidate length is shorter than the candidate kernel")

    ##############################################

    @property
    def has_attention(self):
        return self.variant == FDCLSTM_AT

    @property
    def bn_after_conv(self):
        return self.variant == FDCLSTM_AT

    ##############################################

    @property
    def lstm_sequence_length(self):
        """Length of the channel maps once truncated to the shortest one"""
        return self.max_context_length - max(self.kernel_widths) + 1

    @property
    def context_feature_size(self):
        return sum(self.max_context_length - k + 1 for k in self.kernel_widths) * self.kernels_per_channel

    @property
    def candidate_feature_size(self):
        return (self.max_candidate_length - self.candidate_kernel_width + 1) * self.kernels_per_channel

    @property
    def merge_size(self):
        return (self.context_feature_size + self.hidden_size + self.candidate_feature_size
                + self.overlap_width + self.match_size)

    @property
    def match_size(self):
        return 2*self.match_forms

    @property
    def overlap_input_size(self):
        # hashed counts, candidate indicator, candidate count
        return self.overlap_buckets + 2

    ##############################################

    def to_dict(self):
        d = {key: getattr(self, key) for key in self.DEFAULTS}
        d['kernel_widths'] = list(self.kernel_widths)
        d['mlp_sizes'] = list(self.mlp_sizes)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    ##############################################

    def __eq__(self, other):
        return isinstance(other, ModelConfig) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'ModelConfig {}'.format(self.to_dict())
