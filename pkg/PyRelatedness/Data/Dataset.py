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

"""This module joins the hypothesis sets with the contexts of their images and reports on the
ingestion.
"""

####################################################################################################

__all__ = [
    'IngestionReport',
    'attach_contexts',
    'load_dataset',
    'oov_rate',
]

####################################################################################################

import logging

####################################################################################################

from ..Model.Context import ContextBundle
from .Contexts import load_context
from .Hypotheses import load_hypotheses

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class IngestionReport:

    """Public Attributes:

      :attr:`records`
        number of hypothesis sets

      :attr:`contexts`
        number of context records

      :attr:`unresolved`
        image ids without context, they get an empty context

      :attr:`oov_rate`
        fraction of candidate and context tokens out of the embedding vocabulary, None without
        embeddings

    """

    ##############################################

    def __init__(self, records, contexts, unresolved, oov_rate=None):
        self.records = int(records)
        self.contexts = int(contexts)
        self.unresolved = sorted(set(unresolved))
        self.oov_rate = oov_rate

    ##############################################

    def to_dict(self):
        return dict(records=self.records,
                    contexts=self.contexts,
                    unresolved=list(self.unresolved),
                    oov_rate=self.oov_rate)

    def __str__(self):
        text = '{} hypothesis sets, {} contexts, {} unresolved image ids'.format(
            self.records, self.contexts, len(self.unresolved))
        if self.oov_rate is not None:
            text += ', OOV rate {:.3f}'.format(self.oov_rate)
        return text

####################################################################################################

def oov_rate(hypothesis_sets, embeddings):
    total = 0
    oov = 0
    for h in hypothesis_sets:
        context_tokens = h.ctx.tokens()
        if context_tokens and all(token not in embeddings for token in context_tokens):
            _module_logger.warning("Every context token of image {} is out of vocabulary".format(h.image_id))
        tokens = h.words + context_tokens
        total += len(tokens)
        oov += sum(1 for token in tokens if token not in embeddings)
    return oov / total if total else 0.

####################################################################################################

def attach_contexts(hypothesis_sets, contexts):

    """Return the hypothesis sets with their contexts and the list of unresolved image ids.

    An unresolved image gets an empty context flagged as a substitute.
    """

    attached = []
    unresolved = []
    for h in hypothesis_sets:
        ctx = contexts.get(h.image_id)
        if ctx is None:
            _module_logger.warning("No context for image {}, using an empty context".format(h.image_id))
            unresolved.append(h.image_id)
            ctx = ContextBundle.empty(substitute=True)
        attached.append(h.with_context(ctx))
    return attached, unresolved

####################################################################################################

def load_dataset(hypotheses_path, context_path, embeddings=None):

    """Load a hypothesis file and a context file and return the hypothesis sets with their context
    and an :class:`IngestionReport`.
    """

    contexts = load_context(context_path)
    hypothesis_sets, unresolved = attach_contexts(load_hypotheses(hypotheses_path), contexts)
    rate = oov_rate(hypothesis_sets, embeddings) if embeddings is not None else None
    report = IngestionReport(len(hypothesis_sets), len(contexts), unresolved, rate)
    _module_logger.info("Ingestion: {}".format(report))
    return hypothesis_sets, report
