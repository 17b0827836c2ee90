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

"""This module reads and writes model files.

A model file is made of an ASCII preamble, a YAML header and a binary payload::

  PYRELATEDNESS-MODEL 1
  <header size in bytes>
  <YAML header>
  <payload>

The header records the architecture configuration, the vocabulary, the checksum of the embedding
table, and for each block (parameters and batch normalisation statistics) its name, shape and byte
offset in the payload.  The payload is the concatenation of the blocks as little endian float64.
The file only depends on the model, two saves of the same model are byte identical.

"""

####################################################################################################

__all__ = [
    'MAGIC',
    'FORMAT_VERSION',
    'ModelFileError',
    'model_file_checksum',
    'load_model',
    'save_model',
]

####################################################################################################

import hashlib
import logging

import numpy as np
import yaml

####################################################################################################

from ..Layers.Embedding import EmbeddingTable, PAD_TOKEN, UNK_TOKEN
from ..Tools.Path import ensure_parent_directory
from ..Tools.Random import derive_rng
from .Config import ModelConfig
from .RelatednessModel import build_model

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

MAGIC = 'PYRELATEDNESS-MODEL'
FORMAT_VERSION = 1
BLOCK_DTYPE = '<f8'

####################################################################################################

class ModelFileError(NameError):
    pass

####################################################################################################

def _blocks(model):
    blocks = [('parameter', name, tensor.values) for name, tensor in model.parameters()]
    blocks += [('buffer', name, array) for name, array in model.buffers()]
    return blocks

####################################################################################################

def save_model(model, path):

    """Write *model* to *path*."""

    payload = bytearray()
    block_headers = []
    for kind, name, array in _blocks(model):
        data = np.ascontiguousarray(array, dtype=BLOCK_DTYPE).tobytes()
        block_headers.append(dict(name=name, kind=kind, shape=list(array.shape), offset=len(payload)))
        payload += data
    payload = bytes(payload)

    header = dict(
        format_version=FORMAT_VERSION,
        config=model.config.to_dict(),
        vocabulary=model.embeddings.words,
        unk_index=model.embeddings.unk_index,
        pad_index=model.embeddings.pad_index,
        trainable_embeddings=model.embeddings.trainable,
        embedding_checksum=model.embeddings.checksum(),
        blocks=block_headers,
        payload_size=len(payload),
        payload_sha256=hashlib.sha256(payload).hexdigest(),
    )
    header = yaml.safe_dump(header, default_flow_style=None, sort_keys=True, allow_unicode=True).encode('utf-8')

    ensure_parent_directory(path)
    with open(path, 'wb') as fh:
        fh.write('{} {}\n{}\n'.format(MAGIC, FORMAT_VERSION, len(header)).encode('ascii'))
        fh.write(header)
        fh.write(payload)
    _module_logger.info("Saved model {} to {}".format(model.variant, path))

####################################################################################################

def _read_line(fh, path, what):
    line = fh.readline(128)
    if not line.endswith(b'\n'):
        raise ModelFileError("{}: truncated {}".format(path, what))
    try:
        return line.decode('ascii').strip()
    except UnicodeDecodeError:
        raise ModelFileError("{}: corrupted {}".format(path, what))

####################################################################################################

def _read_header(fh, path):

    preamble = _read_line(fh, path, 'preamble').split()
    if len(preamble) != 2 or preamble[0] != MAGIC:
        raise ModelFileError("{} is not a model file".format(path))
    try:
        version = int(preamble[1])
    except ValueError:
        raise ModelFileError("{}: bad format version {}".format(path, preamble[1]))
    if version != FORMAT_VERSION:
        raise ModelFileError("{}: format version {} is not supported, expected {}".format(path, version, FORMAT_VERSION))

    try:
        header_size = int(_read_line(fh, path, 'header size'))
    except ValueError:
        raise ModelFileError("{}: corrupted header size".format(path))
    data = fh.read(header_size)
    if len(data) != header_size:
        raise ModelFileError("{}: truncated header".format(path))
    try:
        header = yaml.load(data.decode('utf-8'), Loader=yaml.SafeLoader)
    except (UnicodeDecodeError, yaml.YAMLError) as exception:
        raise ModelFileError("{}: corrupted header: {}".format(path, exception))
    if not isinstance(header, dict):
        raise ModelFileError("{}: corrupted header".format(path))
    for key in ('config', 'vocabulary', 'unk_index', 'pad_index', 'blocks', 'payload_size', 'payload_sha256'):
        if key not in header:
            raise ModelFileError("{}: header misses {}".format(path, key))
    return header

####################################################################################################

def load_model(path, embedding_dimension=None):

    """Load a model from *path*.

    When *embedding_dimension* is given, it must match the dimension recorded in the file.  The
    model is only returned once every block has been checked and assigned.
    """

    with open(path, 'rb') as fh:
        header = _read_header(fh, path)
        payload = fh.read()

    if len(payload) != header['payload_size']:
        raise ModelFileError("{}: payload of {} bytes, expected {}".format(path, len(payload), header['payload_size']))
    if hashlib.sha256(payload).hexdigest() != header['payload_sha256']:
        raise ModelFileError("{}: payload checksum mismatch".format(path))

    try:
        config = ModelConfig.from_dict(header['config'])
    except (TypeError, ValueError) as exception:
        raise ModelFileError("{}: invalid configuration: {}".format(path, exception))
    if embedding_dimension is not None and embedding_dimension != config.embedding_dimension:
        raise ModelFileError("{}: embedding dimension mismatch, file has {}, expected {}".format(
            path, config.embedding_dimension, embedding_dimension))

    words = header['vocabulary']
    vocabulary_size = len(words)
    unk_index = header['unk_index']
    pad_index = header['pad_index']
    if words[unk_index] != UNK_TOKEN or words[pad_index] != PAD_TOKEN:
        raise ModelFileError("{}: reserved rows are corrupted".format(path))
    placeholder = np.zeros((vocabulary_size, config.embedding_dimension))
    embeddings = EmbeddingTable(words, placeholder, unk_index, pad_index,
                                trainable=header.get('trainable_embeddings', True))
    # the random initialisation is overwritten below
    model = build_model(config, embeddings, derive_rng(0, 'load'))

    targets = {}
    for name, tensor in model.parameters():
        targets[name] = ('parameter', tensor)
    for name, array in model.buffers():
        targets[name] = ('buffer', array)
    if set(targets) != set(block['name'] for block in header['blocks']):
        raise ModelFileError("{}: the blocks don't match the {} architecture".format(path, config.variant))

    values = {}
    for block in header['blocks']:
        name = block['name']
        kind, target = targets[name]
        shape = tuple(block['shape'])
        if shape != tuple(target.shape) or kind != block['kind']:
            raise ModelFileError("{}: block {} has shape {}, expected {}".format(path, name, shape, tuple(target.shape)))
        size = int(np.prod(shape)) * 8
        offset = block['offset']
        if offset < 0 or offset + size > len(payload):
            raise ModelFileError("{}: block {} is out of the payload".format(path, name))
        values[name] = np.frombuffer(payload, dtype=BLOCK_DTYPE, count=size // 8, offset=offset).reshape(shape)

    for name, array in values.items():
        kind, target = targets[name]
        if kind == 'parameter':
            target.assign(array)
        else:
            target[...] = array

    if embeddings.checksum() != header.get('embedding_checksum'):
        raise ModelFileError("{}: embedding checksum mismatch".format(path))

    _module_logger.info("Loaded model {} from {}".format(config.variant, path))
    return model

####################################################################################################

def model_file_checksum(path):
    """Return the SHA-256 digest of a model file, recorded in the training manifest"""
    with open(path, 'rb') as fh:
        return hashlib.sha256(fh.read()).hexdigest()
