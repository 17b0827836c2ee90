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

import unittest

import numpy as np
from numpy import testing as np_test

####################################################################################################

import PyRelatedness.Logging.Logging as Logging
logger = Logging.setup_logging()

####################################################################################################

from scipy.special import softmax

from PyRelatedness.Layers.Match import MatchParams, match_features
from PyRelatedness.Tensor import Tensor
from PyRelatedness.Tensor import Functions as F
from PyRelatedness.Tensor.GradientCheck import gradient_errors
from PyRelatedness.Tools.Random import derive_rng

####################################################################################################

def reference_features(context, context_mask, candidate, candidate_mask, params):

    B, L = context_mask.shape
    d = params.dimension
    K = params.forms
    W = params.weight.values
    x = context.reshape(B, L, d)
    y = candidate.reshape(B, -1, d)
    features = np.zeros((B, 2*K))
    for b in range(B):
        u = y[b][~candidate_mask[b]].mean(axis=0)
        tokens = x[b][~context_mask[b]]
        if not len(tokens):
            continue
        for k in range(K):
            s = tokens @ W[:, k*d:(k+1)*d] @ u
            features[b, k] = s.mean()
            features[b, K + k] = softmax(params.sharpness*s) @ s
    return features

####################################################################################################

class TestMatch(unittest.TestCase):

    ##############################################

    def setUp(self):

        self.rng = derive_rng(0, 'match')
        self.params = MatchParams.initialize(3, 2, self.rng)
        self.context = self.rng.normal(size=(3*5, 3))
        self.context_mask = np.zeros((3, 5), dtype=bool)
        self.context_mask[0, 3:] = True
        self.context_mask[2, 1:] = True
        self.candidate = self.rng.normal(size=(3*2, 3))
        self.candidate_mask = np.array([[0, 1], [0, 0], [0, 1]], dtype=bool)

    ##############################################

    def features(self, context=None, candidate=None, context_mask=None):
        if context is None:
            context = self.context
        if candidate is None:
            candidate = self.candidate
        if context_mask is None:
            context_mask = self.context_mask
        return match_features(Tensor(context), context_mask, Tensor(candidate), self.candidate_mask,
                              self.params).values

    ##############################################

    def test_initialize(self):

        params = self.params
        self.assertEqual(params.weight.shape, (3, 6))
        self.assertEqual(params.output_size, 4)
        self.assertEqual([name for name, _ in params.parameters()], ['match.weight'])
        np_test.assert_allclose(params.weight.values, np.tile(np.eye(3), (1, 2)), atol=.08)
        with self.assertRaises(ValueError):
            MatchParams(Tensor(np.zeros((3, 5))), 2)

    ##############################################

    def test_features(self):

        features = self.features()
        self.assertEqual(features.shape, (3, 4))
        expected = reference_features(self.context, self.context_mask,
                                      self.candidate, self.candidate_mask, self.params)
        np_test.assert_allclose(features, expected, rtol=1e-12, atol=1e-14)
        # the soft maximum is above the mean
        self.assertTrue(np.all(features[:, 2:] >= features[:, :2] - 1e-12))

    ##############################################

    def test_identity_form(self):

        # an identity form scores the dot product with the candidate
        params = MatchParams(Tensor(np.eye(2)), 1, sharpness=50.)
        context = np.array([[1., 0.], [0., 1.], [0., 0.]])
        candidate = np.array([[0., 2.]])
        features = match_features(Tensor(context), np.zeros((1, 3), dtype=bool),
                                  Tensor(candidate), np.zeros((1, 1), dtype=bool), params).values
        np_test.assert_allclose(features[0, 0], 2/3, rtol=1e-12)
        np_test.assert_allclose(features[0, 1], 2., rtol=1e-12)

    ##############################################

    def test_padding_is_inert(self):

        features = self.features()
        context = self.context.copy()
        context[3:5] = 1e3
        context[11:] = -7.
        candidate = self.candidate.copy()
        candidate[1] = 42.
        candidate[5] = -42.
        np_test.assert_array_equal(self.features(context, candidate), features)

    ##############################################

    def test_empty_context(self):

        context_mask = self.context_mask.copy()
        context_mask[1] = True
        features = self.features(context_mask=context_mask)
        np_test.assert_array_equal(features[1], np.zeros(4))
        np_test.assert_allclose(features[0], self.features()[0], rtol=0, atol=1e-15)

    ##############################################

    def test_shape_errors(self):

        with self.assertRaises(ValueError):
            self.features(context=self.context[:-1])
        with self.assertRaises(ValueError):
            match_features(Tensor(self.context), self.context_mask, Tensor(self.candidate[:4]),
                           self.candidate_mask[:2], self.params)

    ##############################################

    def test_gradient(self):

        context = Tensor(self.context.copy(), requires_grad=True)
        candidate = Tensor(self.candidate.copy(), requires_grad=True)
        projection = Tensor(self.rng.normal(size=(3, 4)))
        function = lambda: F.sum(F.mul(match_features(context, self.context_mask, candidate,
                                                      self.candidate_mask, self.params), projection))
        errors = gradient_errors(function, (context, candidate, self.params.weight))
        self.assertLess(max(errors), 1e-3)

####################################################################################################

if __name__ == '__main__':

    unittest.main()
