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

"""This module implements the word embedding table and the sentence matrix.
"""

####################################################################################################

import hashlib
import logging

import numpy as np

####################################################################################################

from ..Tensor import Tensor
from ..Tensor import Functions as F
from ..Tools.StringTools import normalize_word

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

UNK_TOKEN = '<unk>'
PAD_TOKEN = '<pad>'

####################################################################################################

class EmbeddingTable:

    """This class implements a vocabulary indexed table of word vectors.

    The table has two reserved rows: the unknown word row, initialised to the mean of the pretrained
    vectors, and the padding row, initialised to zero.

    Public Attributes:

      :attr:`vocab`
        dictionary word -> row index

      :attr:`matrix`
        :class:`Tensor` of shape (|V|, d)

      :attr:`unk_index`

      :attr:`pad_index`

    """

    _logger = _module_logger.getChild('EmbeddingTable')

    ##############################################

    def __init__(self, words, matrix, unk_index, pad_index, trainable=True):

        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValueError("Embedding matrix must be 2-d, got shape {}".format(matrix.shape))
        words = list(words)
        if len(words) != matrix.shape[0]:
            raise ValueError("{} words for {} rows".format(len(words), matrix.shape[0]))
        for index in (unk_index, pad_index):
            if not 0 <= index < matrix.shape[0]:
                raise ValueError("Reserved row {} out of range".format(index))

        self._words = words
        self._vocab = {word: index for index, word in enumerate(words)}
        self._matrix = Tensor(matrix, requires_grad=trainable, name='embedding')
        self._unk_index = int(unk_index)
        self._pad_index = int(pad_index)

    ##############################################

    @classmethod
    def from_vectors(cls, words, vectors, trainable=True):

        """Build a table from pretrained vectors and append the unknown and padding rows."""

        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or not vectors.shape[0]:
            raise ValueError("Expected a non empty (n, d) array of vectors")
        normalized = []
        seen = set()
        rows = []
        for word, vector in zip(words, vectors):
            word = normalize_word(word)
            if word in seen:
                cls._logger.warning("Duplicate word {} in embeddings, first wins".format(word))
                continue
            seen.add(word)
            normalized.append(word)
            rows.append(vector)
        rows = np.array(rows)
        unk = rows.mean(axis=0)
        pad = np.zeros(rows.shape[1])
        matrix = np.vstack((rows, unk, pad))
        return cls(normalized + [UNK_TOKEN, PAD_TOKEN], matrix,
                   unk_index=len(normalized), pad_index=len(normalized) + 1,
                   trainable=trainable)

    ##############################################

    @property
    def vocab(self):
        return self._vocab

    @property
    def words(self):
        return list(self._words)

    @property
    def matrix(self):
        return self._matrix

    @property
    def dimension(self):
        return self._matrix.shape[1]

    @property
    def unk_index(self):
        return self._unk_index

    @property
    def pad_index(self):
        return self._pad_index

    @property
    def trainable(self):
        return self._matrix.requires_grad

    def __len__(self):
        return self._matrix.shape[0]

    ##############################################

    def freeze(self):
        self._matrix.requires_grad = False

    def unfreeze(self):
        self._matrix.requires_grad = True

    ##############################################

    def __contains__(self, word):
        word = normalize_word(word)
        return word in self._vocab and word not in (UNK_TOKEN, PAD_TOKEN)

    def index(self, word):
        return self._vocab.get(normalize_word(word), self._unk_index)

    def indices(self, tokens):
        return [self.index(token) for token in tokens]

    def vector(self, word):
        return self._matrix.values[self.index(word)]

    ##############################################

    def checksum(self):

        """Return a SHA-256 digest of the vocabulary and of the current matrix."""

        digest = hashlib.sha256()
        digest.update('\n'.join(self._words).encode('utf-8'))
        digest.update(np.ascontiguousarray(self._matrix.values).tobytes())
        return digest.hexdigest()

####################################################################################################

class SentenceMatrix:

    """This class holds the embedded rows of a token sequence.

    Public Attributes:

      :attr:`x`
        :class:`Tensor` of shape (s, d), row *i* is the embedding of token *i*

      :attr:`tokens`

    """

    ##############################################

    def __init__(self, x, tokens):
        if x.ndim != 2 or not x.shape[0]:
            raise ValueError("A sentence matrix needs at least one row")
        self.x = x
        self.tokens = list(tokens)

    ##############################################

    @property
    def s(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    def __len__(self):
        return self.s

####################################################################################################

def embed_indices(indices, table):
    return F.gather_rows(table.matrix, indices)

####################################################################################################

def embed(tokens, table):

    """Return the :class:`SentenceMatrix` of *tokens*, unknown words map to the unknown row."""

    tokens = [normalize_word(token) for token in tokens]
    if not tokens:
        raise ValueError("Cannot embed an empty token list")
    return SentenceMatrix(embed_indices(table.indices(tokens), table), tokens)
