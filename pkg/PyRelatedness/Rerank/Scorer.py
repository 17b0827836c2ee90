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

"""This module implements the relatedness scorers used by the re-ranker.

A scorer maps the candidates of a hypothesis set and the context of the image to pairs
(relatedness, context confidence), both in [0, 1]:

* :class:`NeuralScorer` uses a trained :class:`RelatednessModel`;
* :class:`CosineScorer` uses the cosine similarity between the word vector of the candidate and the
  vectors of the object and place labels;
* :class:`SentenceScorer` uses the cosine similarity between the candidate and the mean vector of
  the caption.

The context confidence is the confidence of the label matching the candidate (the overlap match
for the neural scorer, the most similar label for the cosine scorer).  Without a match, it is the
highest label confidence, and 1 for a context without label.

"""

####################################################################################################

__all__ = [
    'COSINE',
    'CosineScorer',
    'MAX',
    'MEAN',
    'NEURAL',
    'NeuralScorer',
    'SCORERS',
    'SENTENCE',
    'SentenceScorer',
    'cosine',
    'cosine_relatedness',
    'make_scorer',
    'similarity_to_probability',
]

####################################################################################################

import logging

import numpy as np

####################################################################################################

from ..Tools.StringTools import normalize_word

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

NEURAL = 'neural'
COSINE = 'cosine'
SENTENCE = 'sentence'
SCORERS = (NEURAL, COSINE, SENTENCE)

MAX = 'max'
MEAN = 'mean'

####################################################################################################

def cosine(u, v):
    """Return the cosine similarity of two vectors, None if one of them is null"""
    norm = np.linalg.norm(u) * np.linalg.norm(v)
    if norm == 0:
        return None
    return float(np.clip(np.dot(u, v) / norm, -1., 1.))

####################################################################################################

def _word_vector(word, embeddings):
    if word in embeddings:
        return embeddings.vector(word)
    return None

####################################################################################################

def cosine_relatedness(word, ctx, embeddings, mode=MAX, details=False):

    """Return the cosine similarity between *word* and the object and place terms of the context,
    aggregated by maximum or mean.

    The out-of-vocabulary terms are skipped.  When the word or every term is out of vocabulary the
    score is 0.  With *details*, return a tuple (score, oov, best term) where *oov* flags the out of
    vocabulary case.

    """

    if mode not in (MAX, MEAN):
        raise ValueError("Incorrect aggregation {}, expected {} or {}".format(mode, MAX, MEAN))

    word = normalize_word(word)
    similarities = []
    word_vector = _word_vector(word, embeddings)
    if word_vector is not None:
        for term in ctx.label_terms(include_caption=False):
            term_vector = _word_vector(term, embeddings)
            if term_vector is not None:
                similarity = cosine(word_vector, term_vector)
                if similarity is not None:
                    similarities.append((similarity, term))

    if not similarities:
        score, oov, best_term = 0., True, None
    else:
        best_similarity, best_term = max(similarities, key=lambda x: x[0])
        if mode == MAX:
            score = best_similarity
        else:
            score = float(np.mean([similarity for similarity, _ in similarities]))
        oov = False

    if details:
        return score, oov, best_term
    return score

####################################################################################################

def similarity_to_probability(similarity):
    """Map a cosine similarity in [-1, 1] to [0, 1]"""
    return (1. + similarity) / 2.

####################################################################################################

def _context_confidence(ctx, term):
    confidence = None
    if term is not None:
        confidence = ctx.matched_confidence(term)
    if confidence is None:
        confidence = ctx.max_confidence()
    return confidence

####################################################################################################

class NeuralScorer:

    name = NEURAL

    ##############################################

    def __init__(self, model):
        self._model = model

    @property
    def model(self):
        return self._model

    ##############################################

    def score_candidates(self, words, ctx):
        words = list(words)
        scores = self._model.score_batch([(word, ctx) for word in words])
        return [(float(score), _context_confidence(ctx, word)) for word, score in zip(words, scores)]

####################################################################################################

class CosineScorer:

    name = COSINE

    _logger = _module_logger.getChild('CosineScorer')

    ##############################################

    def __init__(self, embeddings, mode=MAX):
        if mode not in (MAX, MEAN):
            raise ValueError("Incorrect aggregation {}".format(mode))
        self._embeddings = embeddings
        self._mode = mode

    ##############################################

    def score_candidates(self, words, ctx):
        results = []
        for word in words:
            similarity, oov, term = cosine_relatedness(word, ctx, self._embeddings, self._mode, details=True)
            if oov:
                self._logger.debug("No in-vocabulary term to compare with {}".format(word))
            results.append((similarity_to_probability(similarity), _context_confidence(ctx, term)))
        return results

####################################################################################################

class SentenceScorer:

    name = SENTENCE

    ##############################################

    def __init__(self, embeddings):
        self._embeddings = embeddings

    ##############################################

    def caption_vector(self, ctx):
        vectors = [self._embeddings.vector(token) for token in ctx.caption if token in self._embeddings]
        if not vectors:
            return None
        return np.mean(vectors, axis=0)

    ##############################################

    def score_candidates(self, words, ctx):
        caption_vector = self.caption_vector(ctx)
        results = []
        for word in words:
            similarity = None
            word_vector = _word_vector(normalize_word(word), self._embeddings)
            if word_vector is not None and caption_vector is not None:
                similarity = cosine(word_vector, caption_vector)
            if similarity is None:
                similarity = 0.
            results.append((similarity_to_probability(similarity), _context_confidence(ctx, word)))
        return results

####################################################################################################

def make_scorer(kind, model=None, embeddings=None):

    """Return the scorer named *kind*, the neural scorer needs a model, the others an embedding
    table.
    """

    if kind == NEURAL:
        if model is None:
            raise ValueError("The neural scorer needs a model")
        return NeuralScorer(model)
    elif kind in (COSINE, SENTENCE):
        if embeddings is None:
            raise ValueError("The {} scorer needs embeddings".format(kind))
        if kind == COSINE:
            return CosineScorer(embeddings)
        else:
            return SentenceScorer(embeddings)
    else:
        raise ValueError("Incorrect scorer {}, expected one of {}".format(kind, SCORERS))
