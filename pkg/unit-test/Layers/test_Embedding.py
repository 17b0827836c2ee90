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

import unittest

import numpy as np
from numpy import testing as np_test

####################################################################################################

import PyRelatedness.Logging.Logging as Logging
logger = Logging.setup_logging()

####################################################################################################

from PyRelatedness.Layers.Dense import DenseLayer, dense
from PyRelatedness.Layers.Embedding import EmbeddingTable, embed
from PyRelatedness.Tensor import Tensor
from PyRelatedness.Tensor import Functions as F
from PyRelatedness.Tensor.GradientCheck import gradient_errors
from PyRelatedness.Tools.Random import derive_rng

####################################################################################################

class TestEmbedding(unittest.TestCase):

    ##############################################

    def setUp(self):
        self.vectors = np.arange(150.).reshape(3, 50)
        self.table = EmbeddingTable.from_vectors(['cat', 'dog', 'Runway'], self.vectors)

    ##############################################

    def test_lookup(self):

        table = self.table
        np_test.assert_array_equal(table.vector('dog'), self.vectors[1])
        # lowercased
        np_test.assert_array_equal(table.vector('RUNWAY'), self.vectors[2])
        np_test.assert_array_equal(table.vector('zebra'), self.vectors.mean(axis=0))
        self.assertNotIn('zebra', table)
        self.assertIn('cat', table)
        np_test.assert_array_equal(table.matrix.values[table.pad_index], np.zeros(50))
        self.assertEqual(len(table), 5)

    ##############################################

    def test_embed(self):

        x = embed(['cat', 'dog', 'zebra', 'cat', 'runway'], self.table)
        self.assertEqual(x.x.shape, (5, 50))
        self.assertEqual((x.s, x.d), (5, 50))
        np_test.assert_array_equal(x.x.values[3], self.vectors[0])
        with self.assertRaises(ValueError):
            embed([], self.table)

    ##############################################

    def test_freeze(self):

        table = self.table
        self.assertTrue(table.trainable)
        table.freeze()
        self.assertFalse(table.matrix.requires_grad)
        table.unfreeze()
        self.assertTrue(table.matrix.requires_grad)

    ##############################################

    def test_checksum(self):

        other = EmbeddingTable.from_vectors(['cat', 'dog', 'runway'], self.vectors)
        self.assertEqual(self.table.checksum(), other.checksum())
        other.matrix.values[0, 0] += 1
        self.assertNotEqual(self.table.checksum(), other.checksum())

####################################################################################################

class TestDense(unittest.TestCase):

    ##############################################

    def test_identity(self):

        x = Tensor(np.arange(6.).reshape(2, 3))
        output = dense(x, Tensor(np.eye(3)), Tensor(np.zeros(3)))
        np_test.assert_array_equal(output.values, x.values)

    ##############################################

    def test_constant(self):

        x = Tensor(np.arange(6.).reshape(3, 2))
        c = np.array([1., -2., 3.])
        output = dense(x, Tensor(np.zeros((2, 3))), Tensor(c))
        np_test.assert_array_equal(output.values, np.tile(c, (3, 1)))

    ##############################################

    def test_gradient(self):

        rng = derive_rng(0, 'dense')
        layer = DenseLayer.initialize(4, 3, rng, activation='tanh')
        x = Tensor(rng.normal(size=(5, 4)), requires_grad=True)
        projection = Tensor(rng.normal(size=(5, 3)))
        errors = gradient_errors(lambda: F.sum(F.mul(layer(x), projection)), (x, layer.weight, layer.bias))
        self.assertLess(max(errors), 1e-3)
        self.assertEqual((layer.input_size, layer.output_size), (4, 3))

####################################################################################################

if __name__ == '__main__':

    unittest.main()
