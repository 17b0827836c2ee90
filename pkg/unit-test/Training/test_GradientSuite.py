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

from PyRelatedness.Model.Config import VARIANTS
from PyRelatedness.Tensor import Tensor
from PyRelatedness.Tensor import Functions as F
from PyRelatedness.Tensor.GradientCheck import gradient_errors
from PyRelatedness.Training.GradientSuite import (GradientCheckEntry, GradientCheckReport,
                                                  layer_gradient_checks, model_gradient_checks,
                                                  run_gradient_suite)

####################################################################################################

class TestGradientSuite(unittest.TestCase):

    ##############################################

    def test_report(self):

        report = GradientCheckReport([GradientCheckEntry('a', [1e-6, 2e-5]),
                                      GradientCheckEntry('b', [5e-3])],
                                     tolerance=1e-3)
        self.assertFalse(report.passed)
        self.assertEqual([entry.name for entry in report.failures], ['b'])
        self.assertEqual(report.max_error, 5e-3)
        self.assertIn('FAIL', report.to_table())

    ##############################################

    def test_layers(self):

        entries = layer_gradient_checks(3)
        self.assertEqual([entry.name for entry in entries],
                         ['conv', 'lstm', 'attention', 'batch_norm', 'dense', 'match', 'bce'])
        for entry in entries:
            self.assertLess(entry.max_error, 1e-3, entry.name)

    ##############################################

    def test_many_seeds(self):

        # few entries per tensor, every tensor of every layer and model is still checked
        for seed in range(100):
            entries = layer_gradient_checks(seed, max_entries=2) + model_gradient_checks(seed, max_entries=1)
            for entry in entries:
                self.assertLess(entry.max_error, 1e-3, 'seed {} {}'.format(seed, entry.name))

    ##############################################

    def test_kink_crossing(self):

        # a relu input close to zero, the coarse stencil crosses the kink
        x = Tensor(np.array([5e-5, -3e-5, 1.]), requires_grad=True)
        errors = gradient_errors(lambda: F.sum(F.relu(x)), (x,))
        self.assertLess(errors[0], 1e-3)

    ##############################################

    def test_suite(self):

        report = run_gradient_suite(7)
        self.assertTrue(report.passed, report.to_table())
        for variant in VARIANTS:
            self.assertTrue(any(entry.name.startswith(variant + ':') for entry in report))

####################################################################################################

if __name__ == '__main__':

    unittest.main()
