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

####################################################################################################

import os
import tempfile
import unittest

import numpy as np
from numpy import testing as np_test

####################################################################################################

import PyRelatedness.Logging.Logging as Logging
logger = Logging.setup_logging()

####################################################################################################

from PyRelatedness.Layers.Embedding import EmbeddingTable
from PyRelatedness.Layers.Normalization import TRAIN
from PyRelatedness.Model.Config import FDCLSTM, FDCLSTM_AT, ModelConfig
from PyRelatedness.Model.Context import ContextBundle
from PyRelatedness.Model.RelatednessModel import build_model
from PyRelatedness.Model.Serialization import ModelFileError, load_model, model_file_checksum, save_model
from PyRelatedness.Tools.Random import derive_rng

####################################################################################################

class TestSerialization(unittest.TestCase):

    ##############################################

    def setUp(self):

        self.directory = tempfile.TemporaryDirectory()
        rng = derive_rng(0, 'table')
        words = ['airliner', 'runway', 'plane', 'delta', 'a', 'on', 'the']
        self.table = EmbeddingTable.from_vectors(words, rng.normal(size=(len(words), 8)))
        self.ctx = ContextBundle([('airliner', .9)], [('runway', .8)], 'a plane on the runway')

    def tearDown(self):
        self.directory.cleanup()

    def path(self, name):
        return os.path.join(self.directory.name, name)

    ##############################################

    def make_model(self, variant):

        model = build_model(ModelConfig.toy(variant), self.table, derive_rng(0, 'init'))
        # move the running statistics away from their initial values
        contexts = [self.ctx, ContextBundle.empty(), self.ctx, ContextBundle([('plane', .5)])]
        model.forward_batch(['delta', 'runway', 'plane', 'a'], contexts, TRAIN, derive_rng(0, 'dropout'))
        return model

    ##############################################

    def test_round_trip(self):

        for variant in (FDCLSTM, FDCLSTM_AT):
            model = self.make_model(variant)
            path = self.path(variant + '.rel')
            save_model(model, path)
            loaded = load_model(path)
            self.assertEqual(loaded.config, model.config)
            self.assertEqual(loaded.embeddings.words, model.embeddings.words)
            for (name, tensor), (_, other) in zip(model.parameters(), loaded.parameters()):
                np_test.assert_array_equal(tensor.values, other.values, err_msg=name)
            for (name, array), (_, other) in zip(model.buffers(), loaded.buffers()):
                np_test.assert_array_equal(array, other, err_msg=name)
            for candidate in ('delta', 'runway', 'zebra'):
                self.assertEqual(loaded.forward(candidate, self.ctx), model.forward(candidate, self.ctx))

    ##############################################

    def test_deterministic_file(self):

        save_model(self.make_model(FDCLSTM_AT), self.path('a.rel'))
        save_model(self.make_model(FDCLSTM_AT), self.path('b.rel'))
        with open(self.path('a.rel'), 'rb') as fh1, open(self.path('b.rel'), 'rb') as fh2:
            self.assertEqual(fh1.read(), fh2.read())
        self.assertEqual(model_file_checksum(self.path('a.rel')), model_file_checksum(self.path('b.rel')))

    ##############################################

    def test_corruption(self):

        path = self.path('model.rel')
        save_model(self.make_model(FDCLSTM_AT), path)
        with open(path, 'rb') as fh:
            data = fh.read()

        def check(corrupted):
            corrupted_path = self.path('corrupted.rel')
            with open(corrupted_path, 'wb') as fh:
                fh.write(corrupted)
            with self.assertRaises(ModelFileError):
                load_model(corrupted_path)

        check(b'NOT-A-MODEL 1\n' + data.split(b'\n', 1)[1])
        check(data.replace(b'PYRELATEDNESS-MODEL 1', b'PYRELATEDNESS-MODEL 9', 1))
        # header size line
        lines = data.split(b'\n', 2)
        check(lines[0] + b'\nxyz\n' + lines[2])
        # header body, the key names are altered
        check(data.replace(b'payload_sha256', b'payload_shaXXX', 1))
        # payload
        check(data[:-8] + bytes(8 - i for i in range(8)))
        check(data[:-4])
        check(b'')

    ##############################################

    def test_dimension_mismatch(self):

        path = self.path('model.rel')
        save_model(self.make_model(FDCLSTM), path)
        with self.assertRaises(ModelFileError):
            load_model(path, embedding_dimension=50)
        self.assertEqual(load_model(path, embedding_dimension=8).config.embedding_dimension, 8)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
