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

"""This module assembles the relatedness model.

The model scores how related a candidate word is to the visual context of an image:

* the candidate tokens go through a masked convolution channel;
* the context sequence, object labels then place labels then caption tokens, padded to a fixed
  length, feeds two subnetworks sharing the embedding table:

  * subnetwork A, four convolution channels whose feature maps are flattened and concatenated;
  * subnetwork B, four convolution channels whose maps are truncated to the shortest one and
    concatenated feature wise, then an LSTM, then attention pooling (``fdclstm-at``) or the last
    state (``fdclstm``);

* the overlap features are projected by a dense layer;
* bilinear forms match the mean candidate embedding to each context token, the scores are pooled
  by their mean and a soft maximum;
* the blocks are concatenated, batch normalised and go through an MLP stack with dropout and
  a sigmoid head.

In the ``fdclstm-at`` variant the outputs of the context convolutions are batch normalised.

"""

####################################################################################################

__all__ = [
    'RelatednessModel',
    'build_model',
    'forward',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Layers.Attention import AttentionParams, attention_pool
from ..Layers.Convolution import ConvChannel, conv_channel_batch, mask_windows, masked_conv, window_validity
from ..Layers.Dense import DenseLayer
from ..Layers.Embedding import embed_indices
from ..Layers.Match import MatchParams, match_features
from ..Layers.Normalization import BatchNormParams, INFER, batch_norm, check_mode, dropout
from ..Layers.Recurrent import LSTMParams, last_state, lstm_forward
from ..Tensor import DimensionError, Tensor, no_grad
from ..Tensor import Functions as F
from ..Tools.StringTools import tokenize
from .Context import overlap_features

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class RelatednessModel:

    """This class holds the parameters of a relatedness model and implements its forward pass.

    A trained model is not modified by scoring: in infer mode the batch normalisation layers use
    their running statistics and dropout is disabled.

    Public Attributes:

      :attr:`config`
        :class:`ModelConfig`

      :attr:`embeddings`
        :class:`EmbeddingTable` shared by the candidate channel and the two subnetworks

      :attr:`candidate_channel`

      :attr:`context_channels`
        the channels of subnetwork A

      :attr:`sequence_channels`
        the channels of subnetwork B

      :attr:`lstm`

      :attr:`attention`
        None for the ``fdclstm`` variant

      :attr:`context_norms`, :attr:`sequence_norms`
        batch normalisation after each context convolution, empty for the ``fdclstm`` variant

      :attr:`overlap_projection`

      :attr:`match`
        :class:`MatchParams`, None when the configuration has no match form

      :attr:`merge_norm`

      :attr:`hidden_layers`, :attr:`hidden_norms`
        the MLP stack

      :attr:`head`

    """

    _logger = _module_logger.getChild('RelatednessModel')

    ##############################################

    def __init__(self, config, embeddings,
                 candidate_channel,
                 context_channels, sequence_channels,
                 lstm, attention,
                 context_norms, sequence_norms,
                 overlap_projection,
                 match,
                 merge_norm,
                 hidden_layers, hidden_norms,
                 head,
                 ):

        self.config = config
        self.embeddings = embeddings
        self.candidate_channel = candidate_channel
        self.context_channels = list(context_channels)
        self.sequence_channels = list(sequence_channels)
        self.lstm = lstm
        self.attention = attention
        self.context_norms = list(context_norms)
        self.sequence_norms = list(sequence_norms)
        self.overlap_projection = overlap_projection
        self.match = match
        self.merge_norm = merge_norm
        self.hidden_layers = list(hidden_layers)
        self.hidden_norms = list(hidden_norms)
        self.head = head

        self._check_shapes()

    ##############################################

    def _check_shapes(self):

        config = self.config
        if self.embeddings.dimension != config.embedding_dimension:
            raise DimensionError("Embedding dimension {} vs configured {}".format(
                self.embeddings.dimension, config.embedding_dimension))
        widths = tuple(channel.width for channel in self.context_channels)
        if widths != config.kernel_widths or tuple(c.width for c in self.sequence_channels) != widths:
            raise DimensionError("Channel widths {} vs configured {}".format(widths, config.kernel_widths))
        if (self.attention is not None) != config.has_attention:
            raise ValueError("Attention layer inconsistent with variant {}".format(config.variant))
        if bool(self.context_norms or self.sequence_norms) != config.bn_after_conv:
            raise ValueError("Convolution normalisation inconsistent with variant {}".format(config.variant))
        if (self.match.forms if self.match is not None else 0) != config.match_forms:
            raise ValueError("Match block inconsistent with {} forms".format(config.match_forms))
        if self.lstm.input_size != config.NUMBER_OF_CHANNELS * config.kernels_per_channel:
            raise DimensionError("LSTM input size {}".format(self.lstm.input_size))
        if self.hidden_layers:
            input_size = self.hidden_layers[0].input_size
        else:
            input_size = self.head.input_size
        if input_size != config.merge_size:
            raise DimensionError("Merge size {} vs MLP input {}".format(config.merge_size, input_size))

    ##############################################

    @property
    def variant(self):
        return self.config.variant

    @property
    def has_attention(self):
        return self.attention is not None

    ##############################################

    def _layers(self):
        yield self.candidate_channel
        yield from self.context_channels
        yield from self.sequence_channels
        yield self.lstm
        if self.attention is not None:
            yield self.attention
        yield from self.context_norms
        yield from self.sequence_norms
        yield self.overlap_projection
        if self.match is not None:
            yield self.match
        yield self.merge_norm
        for layer, norm in zip(self.hidden_layers, self.hidden_norms):
            yield layer
            yield norm
        yield self.head

    ##############################################

    def parameters(self, trainable_only=False):

        """Return the list of (name, tensor) in a fixed order, the embedding matrix first."""

        parameters = [('embedding', self.embeddings.matrix)]
        for layer in self._layers():
            parameters.extend(layer.parameters())
        if trainable_only:
            parameters = [(name, tensor) for name, tensor in parameters if tensor.requires_grad]
        return parameters

    def batch_norms(self):
        return [layer for layer in self._layers() if isinstance(layer, BatchNormParams)]

    def buffers(self):
        buffers = []
        for norm in self.batch_norms():
            buffers.extend(norm.buffers())
        return buffers

    @property
    def parameter_count(self):
        return sum(tensor.size for _, tensor in self.parameters())

    ##############################################

    def encode_candidate(self, candidate):

        """Return the padded token indices of a candidate and its padding mask."""

        tokens = tokenize(candidate)
        if not tokens:
            raise ValueError("Empty candidate word")
        length = self.config.max_candidate_length
        if len(tokens) > length:
            self._logger.warning("Candidate {} truncated to {} tokens".format(candidate, length))
            tokens = tokens[:length]
        return self._pad(tokens, length)

    ##############################################

    def encode_context(self, ctx):

        """Return the padded token indices of the context sequence and its padding mask."""

        tokens = ctx.tokens()
        length = self.config.max_context_length
        if len(tokens) > length:
            self._logger.debug("Context of {} tokens truncated to {}".format(len(tokens), length))
            tokens = tokens[:length]
        return self._pad(tokens, length)

    ##############################################

    def _pad(self, tokens, length):
        indices = self.embeddings.indices(tokens)
        padding = length - len(indices)
        indices = indices + [self.embeddings.pad_index]*padding
        mask = np.zeros(length, dtype=bool)
        if padding:
            mask[-padding:] = True
        return indices, mask

    ##############################################

    def _channel_maps(self, x, masks, channels, norms, mode):

        """Return the feature maps of the channels for a batch stacked along the rows of *x*.

        With batch normalisation, the statistics run over the batch and the positions, the padded
        windows are zeroed before and after the normalisation.
        """

        batch = masks.shape[0]
        feature_maps = []
        for i, channel in enumerate(channels):
            validity = window_validity(masks, channel.width)
            feature_map = mask_windows(conv_channel_batch(x, batch, channel), validity)
            if norms:
                feature_map = mask_windows(batch_norm(feature_map, norms[i], mode), validity)
            feature_maps.append(feature_map)
        return feature_maps

    ##############################################

    @staticmethod
    def _flatten(feature_map, batch):
        return F.reshape(feature_map, (batch, feature_map.size // batch))

    ##############################################

    def _step_validity(self, masks):

        """Return the (B, T) array of the LSTM steps reading at least one unpadded window."""

        T = self.config.lstm_sequence_length
        width = min(self.config.kernel_widths)
        validity = window_validity(masks, width).reshape(masks.shape[0], -1)
        return validity[:, :T]

    ##############################################

    def _sequence_features(self, feature_maps, masks):

        """Truncate the maps to the shortest one, concatenate them feature wise and run the LSTM,
        return a (B, H) tensor.

        The attention and the final state ignore the steps made only of padding.
        """

        batch = masks.shape[0]
        T = self.config.lstm_sequence_length
        j = self.config.kernels_per_channel
        sequences = []
        for feature_map in feature_maps:
            flat = self._flatten(feature_map, batch)
            if flat.shape[1] != T*j:
                flat = F.slice_columns(flat, 0, T*j)
            sequences.append(F.reshape(flat, (batch, T, j)))
        states = lstm_forward(F.concat(sequences, axis=2), self.lstm)
        valid = self._step_validity(masks)
        if self.attention is not None:
            return attention_pool(states, self.attention, valid)
        else:
            return last_state(states, valid)

    ##############################################

    def forward_batch(self, candidates, contexts, mode=INFER, rng=None):

        """Return the scores of a batch of (candidate, context) pairs as a (B,) tensor.

        In train mode the batch must hold at least two pairs and a random generator is required for
        dropout.
        """

        mode = check_mode(mode)
        candidates = list(candidates)
        contexts = list(contexts)
        if len(candidates) != len(contexts):
            raise ValueError("{} candidates for {} contexts".format(len(candidates), len(contexts)))
        if not candidates:
            raise ValueError("Empty batch")
        config = self.config
        batch = len(candidates)

        encoded = [self.encode_candidate(candidate) for candidate in candidates]
        candidate_x = embed_indices(np.concatenate([indices for indices, _ in encoded]), self.embeddings)
        candidate_masks = np.array([mask for _, mask in encoded])
        candidate_block = self._flatten(masked_conv(candidate_x, candidate_masks, self.candidate_channel), batch)

        encoded = [self.encode_context(ctx) for ctx in contexts]
        x = embed_indices(np.concatenate([indices for indices, _ in encoded]), self.embeddings)
        masks = np.array([mask for _, mask in encoded])
        context_maps = self._channel_maps(x, masks, self.context_channels, self.context_norms, mode)
        sequence_maps = self._channel_maps(x, masks, self.sequence_channels, self.sequence_norms, mode)
        context_block = F.concat([self._flatten(feature_map, batch) for feature_map in context_maps], axis=1)
        sequence_block = self._sequence_features(sequence_maps, masks)

        overlaps = np.vstack([overlap_features(candidate, ctx).as_array(config.overlap_buckets)
                              for candidate, ctx in zip(candidates, contexts)])
        overlap_block = self.overlap_projection(Tensor(overlaps))

        blocks = [context_block, sequence_block, candidate_block, overlap_block]
        if self.match is not None:
            blocks.append(match_features(x, masks, candidate_x, candidate_masks, self.match))
        merged = F.concat(blocks, axis=1)
        hidden = batch_norm(merged, self.merge_norm, mode)
        for layer, norm in zip(self.hidden_layers, self.hidden_norms):
            hidden = layer(hidden)
            hidden = batch_norm(hidden, norm, mode)
            hidden = dropout(hidden, config.dropout_rate, mode, rng)
        scores = self.head(hidden)
        return F.reshape(scores, (batch,))

    ##############################################

    def forward(self, candidate, ctx, mode=INFER, rng=None):
        """Return the score of a single pair"""
        return self.forward_batch([candidate], [ctx], mode, rng).item()

    ##############################################

    def score_batch(self, pairs, batch_size=256):

        """Score an iterable of (candidate, context) pairs in infer mode and return a Numpy array."""

        pairs = list(pairs)
        scores = []
        with no_grad():
            for start in range(0, len(pairs), batch_size):
                chunk = pairs[start:start+batch_size]
                output = self.forward_batch([c for c, _ in chunk], [ctx for _, ctx in chunk], INFER)
                scores.append(output.numpy())
        if not scores:
            return np.zeros(0)
        return np.concatenate(scores)

####################################################################################################

def build_model(config, embeddings, rng):

    """Build and initialise a model for *config* and *embeddings*.

    The initialisation only depends on the state of *rng*.
    """

    config.validate()
    if embeddings.dimension != config.embedding_dimension:
        raise DimensionError("Embedding dimension {} doesn't match the configured dimension {}".format(
            embeddings.dimension, config.embedding_dimension))

    d = config.embedding_dimension
    j = config.kernels_per_channel
    H = config.hidden_size

    def make_norm(features, name):
        return BatchNormParams.initialize(features, config.bn_epsilon, config.bn_momentum, name)

    candidate_channel = ConvChannel.initialize(config.candidate_kernel_width, d, j, rng, 'candidate.conv')
    context_channels = [ConvChannel.initialize(width, d, j, rng, 'context.conv{}'.format(i))
                        for i, width in enumerate(config.kernel_widths)]
    sequence_channels = [ConvChannel.initialize(width, d, j, rng, 'sequence.conv{}'.format(i))
                         for i, width in enumerate(config.kernel_widths)]
    lstm = LSTMParams.initialize(config.NUMBER_OF_CHANNELS*j, H, rng, 'sequence.lstm')
    if config.has_attention:
        attention = AttentionParams.initialize(H, rng, 'sequence.attention')
    else:
        attention = None
    if config.bn_after_conv:
        context_norms = [make_norm(j, 'context.bn{}'.format(i)) for i in range(config.NUMBER_OF_CHANNELS)]
        sequence_norms = [make_norm(j, 'sequence.bn{}'.format(i)) for i in range(config.NUMBER_OF_CHANNELS)]
    else:
        context_norms = sequence_norms = []
    overlap_projection = DenseLayer.initialize(config.overlap_input_size, config.overlap_width, rng,
                                               'relu', 'overlap.projection')
    if config.match_forms:
        match = MatchParams.initialize(d, config.match_forms, rng, name='match')
    else:
        match = None
    merge_norm = make_norm(config.merge_size, 'merge.bn')
    hidden_layers = []
    hidden_norms = []
    input_size = config.merge_size
    for i, size in enumerate(config.mlp_sizes):
        hidden_layers.append(DenseLayer.initialize(input_size, size, rng, 'relu', 'mlp{}'.format(i)))
        hidden_norms.append(make_norm(size, 'mlp{}.bn'.format(i)))
        input_size = size
    head = DenseLayer.initialize(input_size, 1, rng, 'sigmoid', 'head')

    model = RelatednessModel(config, embeddings,
                             candidate_channel,
                             context_channels, sequence_channels,
                             lstm, attention,
                             context_norms, sequence_norms,
                             overlap_projection, match, merge_norm,
                             hidden_layers, hidden_norms,
                             head)
    _module_logger.info("Built {} model with {} parameters".format(config.variant, model.parameter_count))
    return model

####################################################################################################

def forward(model, candidate, ctx, mode=INFER, rng=None):
    return model.forward(candidate, ctx, mode, rng)
