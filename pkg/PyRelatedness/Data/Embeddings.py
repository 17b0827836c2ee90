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

"""This module reads and writes word vectors in the usual pretrained text layout: one word per line
followed by its *d* components separated by spaces.  A first line made of two integers, the word
count and the dimension, is skipped.
"""

####################################################################################################

__all__ = [
    'load_embeddings',
    'load_vectors',
    'save_embeddings',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Layers.Embedding import EmbeddingTable
from ..Tools.Path import ensure_parent_directory
from ..Tools.StringTools import str_real
from .Format import ParseError

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

def _is_count_header(fields):
    return len(fields) == 2 and all(field.isdigit() for field in fields)

####################################################################################################

def load_vectors(path):

    """Return the list of words and the (n, d) array of their vectors.

    The dimension is set by the first vector, a line with another dimension aborts the loading.
    """

    words = []
    vectors = []
    dimension = None
    with open(path, encoding='utf-8') as fh:
        for line_number, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if line_number == 1 and _is_count_header(fields):
                continue
            word, components = fields[0], fields[1:]
            if not components:
                raise ParseError(path, line_number, "word {} has no vector".format(word))
            if dimension is None:
                dimension = len(components)
            elif len(components) != dimension:
                raise ParseError(path, line_number, "vector of dimension {}, expected {}".format(len(components), dimension))
            try:
                vector = [float(x) for x in components]
            except ValueError:
                raise ParseError(path, line_number, "invalid vector component")
            if not all(np.isfinite(vector)):
                raise ParseError(path, line_number, "non finite component in the vector of {}".format(word))
            words.append(word)
            vectors.append(vector)
    if not words:
        raise ParseError(path, None, "no records")
    return words, np.array(vectors, dtype=np.float64)

####################################################################################################

def load_embeddings(path, trainable=True):

    """Return the :class:`EmbeddingTable` of a word vector file."""

    words, vectors = load_vectors(path)
    table = EmbeddingTable.from_vectors(words, vectors, trainable)
    _module_logger.info("Loaded {} vectors of dimension {} from {}".format(len(words), table.dimension, path))
    return table

####################################################################################################

def save_embeddings(path, words, vectors):
    vectors = np.asarray(vectors, dtype=np.float64)
    if len(words) != len(vectors):
        raise ValueError("{} words for {} vectors".format(len(words), len(vectors)))
    ensure_parent_directory(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        for word, vector in zip(words, vectors):
            fh.write(' '.join([word] + [str_real(x) for x in vector]) + '\n')
