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

"""This module re-ranks the k-best hypotheses of a text spotting system.
"""

####################################################################################################

__all__ = [
    'RankedCandidate',
    'Reranker',
    'rerank',
]

####################################################################################################

import logging

####################################################################################################

from .Fusion import fuse_scores

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class RankedCandidate:

    """This class annotates a candidate with the components of its final score.

    Public Attributes:

      :attr:`candidate`

      :attr:`relatedness`

      :attr:`context`
        context confidence

      :attr:`unigram`
        unigram probability

      :attr:`final`

    """

    __slots__ = ('candidate', 'relatedness', 'context', 'unigram', 'final')

    ##############################################

    def __init__(self, candidate, relatedness, context, unigram, final):
        self.candidate = candidate
        self.relatedness = float(relatedness)
        self.context = float(context)
        self.unigram = float(unigram)
        self.final = float(final)

    ##############################################

    @property
    def word(self):
        return self.candidate.word

    @property
    def baseline(self):
        return self.candidate.baseline_score

    def sort_key(self):
        return (-self.final, -self.baseline, self.word)

    def __repr__(self):
        return 'RankedCandidate {0.word} baseline={0.baseline} relatedness={0.relatedness} final={0.final}'.format(self)

####################################################################################################

def rerank(h, scorer, lm, cfg):

    """Re-rank the hypothesis set *h* and return the list of :class:`RankedCandidate` sorted by
    decreasing final score, equal scores by decreasing baseline score then by word.

    *scorer* is only required when the relatedness or context weight is positive, *lm* when the
    unigram weight is positive.  The missing components are reported as 1.
    """

    candidates = list(h.candidates)
    if not candidates:
        raise ValueError("Nothing to re-rank for image {}".format(h.image_id))

    if cfg.uses_scorer:
        if scorer is None:
            raise ValueError("A relatedness scorer is required by {}".format(cfg))
        scores = scorer.score_candidates([c.word for c in candidates], h.ctx)
    else:
        scores = [(1., 1.)] * len(candidates)
    if cfg.unigram > 0 and lm is None:
        raise ValueError("A unigram model is required by {}".format(cfg))

    ranked = []
    for candidate, (relatedness, context) in zip(candidates, scores):
        unigram = lm.prob(candidate.word) if lm is not None else 1.
        final = fuse_scores(candidate, relatedness, context, unigram, cfg)
        ranked.append(RankedCandidate(candidate, relatedness, context, unigram, final))
    ranked.sort(key=RankedCandidate.sort_key)
    return ranked

####################################################################################################

class Reranker:

    """This class re-ranks hypothesis sets with a fixed scorer, language model and fusion
    configuration.
    """

    _logger = _module_logger.getChild('Reranker')

    ##############################################

    def __init__(self, scorer, lm, cfg):
        self.scorer = scorer
        self.lm = lm
        self.cfg = cfg

    ##############################################

    def __call__(self, h):
        return rerank(h, self.scorer, self.lm, self.cfg)

    ##############################################

    def rerank_all(self, hypothesis_sets, k=None):

        """Return the list of (hypothesis set, ranked candidates), the sets are truncated to their
        top-*k* candidates first when *k* is given.
        """

        results = []
        for h in hypothesis_sets:
            if k is not None:
                h = h.truncated(k)
            results.append((h, rerank(h, self.scorer, self.lm, self.cfg)))
        self._logger.debug("Re-ranked {} sets".format(len(results)))
        return results

    ##############################################

    @staticmethod
    def trace_records(h, ranked):

        """Return the audit records of a re-ranked set, one per candidate."""

        return [dict(image_id=h.image_id,
                     rank=rank,
                     word=item.word,
                     baseline=item.baseline,
                     relatedness=item.relatedness,
                     context=item.context,
                     unigram=item.unigram,
                     final=item.final)
                for rank, item in enumerate(ranked, start=1)]
