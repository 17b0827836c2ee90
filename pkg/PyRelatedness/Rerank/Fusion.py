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

"""This module implements the log-linear fusion of the candidate scores.

The final score of a candidate is

.. math::

    s = \\exp(\\lambda_b \\ln s_b + \\lambda_r \\ln r + \\lambda_c \\ln c + \\lambda_u \\ln p_u)

where :math:`s_b` is the baseline score, :math:`r` the relatedness, :math:`c` the context confidence
and :math:`p_u` the unigram probability, each floored at :data:`SCORE_FLOOR`.  The score is
increasing in each component with a positive weight.

"""

####################################################################################################

__all__ = [
    'FusionConfig',
    'FusionConfigError',
    'SCORE_FLOOR',
    'fuse_scores',
]

####################################################################################################

import math

####################################################################################################

from .Scorer import NEURAL, SCORERS

####################################################################################################

SCORE_FLOOR = 1e-9

####################################################################################################

class FusionConfigError(ValueError):
    pass

####################################################################################################

class FusionConfig:

    """Public Attributes:

      :attr:`baseline`, :attr:`relatedness`, :attr:`context`, :attr:`unigram`
        non negative weights

      :attr:`scorer`
        neural, cosine or sentence

    """

    WEIGHT_NAMES = ('baseline', 'relatedness', 'context', 'unigram')
    DEFAULT_WEIGHTS = (1., 1., 0., 1.)

    ##############################################

    def __init__(self, baseline=1., relatedness=1., context=0., unigram=1., scorer=NEURAL):

        weights = []
        for name, value in zip(self.WEIGHT_NAMES, (baseline, relatedness, context, unigram)):
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise FusionConfigError("Weight {} is not a number: {}".format(name, value))
            if not math.isfinite(value) or value < 0:
                raise FusionConfigError("Weight {} must be a finite non negative number, got {}".format(name, value))
            weights.append(value)
        if not any(weights):
            raise FusionConfigError("At least one fusion weight must be positive")
        if scorer not in SCORERS:
            raise FusionConfigError("Incorrect scorer {}, expected one of {}".format(scorer, SCORERS))

        self.baseline, self.relatedness, self.context, self.unigram = weights
        self.scorer = scorer

    ##############################################

    @classmethod
    def from_string(cls, text, scorer=NEURAL):

        """Build a configuration from a string ``λb,λr,λc,λu``."""

        fields = [field.strip() for field in str(text).split(',')]
        if len(fields) != len(cls.WEIGHT_NAMES):
            raise FusionConfigError("Expected {} comma separated weights, got {}".format(len(cls.WEIGHT_NAMES), text))
        return cls(*fields, scorer=scorer)

    ##############################################

    @property
    def weights(self):
        return (self.baseline, self.relatedness, self.context, self.unigram)

    @property
    def uses_scorer(self):
        return self.relatedness > 0 or self.context > 0

    @property
    def is_baseline(self):
        return self.weights[1:] == (0., 0., 0.)

    def to_dict(self):
        d = dict(zip(self.WEIGHT_NAMES, self.weights))
        d['scorer'] = self.scorer
        return d

    def __repr__(self):
        return 'FusionConfig {}'.format(self.to_dict())

####################################################################################################

def _log(value, name):
    value = float(value)
    if not 0 <= value <= 1 or math.isnan(value):
        raise ValueError("{} must be in [0, 1], got {}".format(name, value))
    return math.log(max(value, SCORE_FLOOR))

####################################################################################################

def log_fused_score(baseline, relatedness, ctx_confidence, p_uni, cfg):
    """Return the logarithm of the fused score"""
    log_score = 0.
    for weight, value, name in zip(cfg.weights,
                                   (baseline, relatedness, ctx_confidence, p_uni),
                                   cfg.WEIGHT_NAMES):
        if weight:
            log_score += weight * _log(value, name)
    return log_score

####################################################################################################

def fuse_scores(c, relatedness, ctx_confidence, p_uni, cfg):

    """Return the final score of the candidate *c*."""

    return math.exp(log_fused_score(c.baseline_score, relatedness, ctx_confidence, p_uni, cfg))
