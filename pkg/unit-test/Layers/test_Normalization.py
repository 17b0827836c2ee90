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

from PyRelatedness.Layers.Normalization import (BatchNormParams, BatchSizeError, INFER, TRAIN,
                                                batch_norm, dropout)
from PyRelatedness.Tensor import Tensor
from PyRelatedness.Tools.Random import derive_rng

####################################################################################################

class TestBatchNorm(unittest.TestCase):

    ##############################################

    def setUp(self):
        self.rng = derive_rng(0, 'bn')

    ##############################################

    def test_train(self):

        params = BatchNormParams.initialize(3)
        x = self.rng.normal(loc=5, scale=3, size=(20, 3))
        y = batch_norm(Tensor(x), params, TRAIN).values
        np_test.assert_allclose(y.mean(axis=0), np.zeros(3), atol=1e-6)
        np_test.assert_allclose(y.var(axis=0), np.ones(3), atol=1e-5)

        # running statistics, momentum .9
        np_test.assert_allclose(params.running_mean, .1*x.mean(axis=0))
        np_test.assert_allclose(params.running_variance, .9 + .1*x.var(axis=0, ddof=1))

    ##############################################

    def test_infer_identity(self):

        params = BatchNormParams.initialize(3)
        x = self.rng.normal(size=(4, 3))
        y = batch_norm(Tensor(x), params, INFER).values
        np_test.assert_allclose(y, x / np.sqrt(1 + params.epsilon), rtol=1e-12)
        # the shift from identity is relative, half of epsilon at first order
        np_test.assert_allclose(y, x, rtol=params.epsilon)
        self.assertTrue(np.all(np.abs(y - x) <= np.abs(x)*params.epsilon/2))

    ##############################################

    def test_infer_identity_large_values(self):

        params = BatchNormParams.initialize(2)
        x = np.array([[1e3, -250.], [3e2, 40.]])
        y = batch_norm(Tensor(x), params, INFER).values
        np_test.assert_allclose(y, x, rtol=params.epsilon)
        # infer mode doesn't touch the running statistics
        np_test.assert_array_equal(params.running_mean, np.zeros(3))

    ##############################################

    def test_constant_feature(self):

        params = BatchNormParams.initialize(2)
        x = np.full((5, 2), 3.)
        y = batch_norm(Tensor(x), params, TRAIN).values
        self.assertTrue(np.all(np.isfinite(y)))
        np_test.assert_array_equal(y, np.zeros((5, 2)))

    ##############################################

    def test_batch_size(self):

        params = BatchNormParams.initialize(2)
        with self.assertRaises(BatchSizeError):
            batch_norm(Tensor(np.ones((1, 2))), params, TRAIN)
        batch_norm(Tensor(np.ones((1, 2))), params, INFER)
        with self.assertRaises(ValueError):
            batch_norm(Tensor(np.ones((2, 2))), params, 'eval')

####################################################################################################

class TestDropout(unittest.TestCase):

    ##############################################

    def test_identity(self):

        x = Tensor(np.arange(10.))
        self.assertIs(dropout(x, .7, INFER), x)
        self.assertIs(dropout(x, 0, TRAIN, derive_rng(0, 'dropout')), x)
        self.assertIs(dropout(x, 0, INFER), x)
        with self.assertRaises(ValueError):
            dropout(x, .7, TRAIN)
        with self.assertRaises(ValueError):
            dropout(x, 1., TRAIN, derive_rng(0, 'dropout'))

    ##############################################

    def test_statistics(self):

        x = Tensor(np.ones(100000))
        y = dropout(x, .7, TRAIN, derive_rng(0, 'dropout')).values
        survivors = np.count_nonzero(y) / y.size
        self.assertLess(abs(survivors - .3), .01)
        self.assertLess(abs(y.mean() - 1.), .02)
        np_test.assert_allclose(y[y > 0], 1/.3)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
