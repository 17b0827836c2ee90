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

"""This module implements the visual context of an image and the overlap features.

A context gathers the labels of the object classifiers, the labels of the place classifier and the
tokens of a generated caption.  The overlap features count, for each term, the number of context
sources in which it appears: each object or place label is a source and the caption is one source.
A term seen by several classifiers is therefore weighted up.

"""

####################################################################################################

__all__ = [
    'ContextBundle',
    'OverlapVector',
    'bucket_of',
    'overlap_features',
]

####################################################################################################

import logging
import math

from collections import Counter

import numpy as np

####################################################################################################

from ..Tools.Random import name_key
from ..Tools.StringTools import normalize_word, tokenize

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class ContextBundle:

    """This class holds the visual context of an image.

    Public Attributes:

      :attr:`objects`
        list of (label, confidence)

      :attr:`places`
        list of (label, confidence)

      :attr:`caption`
        list of tokens

      :attr:`substitute`
        true when the bundle replaces a missing context record

    """

    ##############################################

    def __init__(self, objects=(), places=(), caption=(), substitute=False):

        self._objects = self._check_labels(objects, 'object')
        self._places = self._check_labels(places, 'place')
        if isinstance(caption, str):
            caption = tokenize(caption)
        else:
            caption = [token for word in caption for token in tokenize(word)]
        self._caption = caption
        self.substitute = bool(substitute)

    ##############################################

    @staticmethod
    def _check_labels(labels, kind):
        checked = []
        for label, confidence in labels:
            label = ' '.join(tokenize(label))
            confidence = float(confidence)
            if not label:
                raise ValueError("Empty {} label".format(kind))
            if not (0 <= confidence <= 1) or math.isnan(confidence):
                raise ValueError("Confidence of {} label {} is not in [0, 1]: {}".format(kind, label, confidence))
            checked.append((label, confidence))
        return checked

    ##############################################

    @classmethod
    def empty(cls, substitute=False):
        return cls(substitute=substitute)

    ##############################################

    @property
    def objects(self):
        return list(self._objects)

    @property
    def places(self):
        return list(self._places)

    @property
    def caption(self):
        return list(self._caption)

    @property
    def labels(self):
        return self._objects + self._places

    def is_empty(self):
        return not (self._objects or self._places or self._caption)

    def __eq__(self, other):
        return (isinstance(other, ContextBundle)
                and self._objects == other._objects
                and self._places == other._places
                and self._caption == other._caption)

    def __repr__(self):
        return 'ContextBundle objects={0._objects} places={0._places} caption={0._caption}'.format(self)

    ##############################################

    def tokens(self):

        """Return the context sequence: the object label tokens, then the place label tokens, then the
        caption tokens.
        """

        tokens = []
        for label, _ in self._objects + self._places:
            tokens.extend(label.split())
        tokens.extend(self._caption)
        return tokens

    ##############################################

    def label_terms(self, include_caption=False):

        """Return the distinct terms of the labels, and of the caption if requested, in order of
        appearance.
        """

        terms = []
        for label, _ in self.labels:
            terms.append(label)
            terms.extend(token for token in label.split() if token != label)
        if include_caption:
            terms.extend(self._caption)
        return list(dict.fromkeys(terms))

    ##############################################

    def sources(self):

        """Return the list of term sets, one per label and one for the caption."""

        sources = []
        for label, _ in self.labels:
            sources.append(set([label] + label.split()))
        if self._caption:
            sources.append(set(self._caption))
        return sources

    ##############################################

    def matched_confidence(self, word):

        """Return the highest confidence of the labels containing *word*, or None."""

        word = normalize_word(word)
        confidences = [confidence
                       for label, confidence in self.labels
                       if word == label or word in label.split()]
        if confidences:
            return max(confidences)
        return None

    ##############################################

    def max_confidence(self):
        """Return the highest label confidence, 1 when there is no label"""
        if self.labels:
            return max(confidence for _, confidence in self.labels)
        return 1.

####################################################################################################

class OverlapVector:

    """This class holds the raw overlap features of a candidate against a context.

    Public Attributes:

      :attr:`counts`
        dictionary term -> number of sources containing the term

      :attr:`indicator`
        1 if the candidate appears in a source, else 0

      :attr:`candidate_count`
        number of sources containing the candidate

    """

    ##############################################

    def __init__(self, counts, indicator, candidate_count):
        self.counts = dict(counts)
        self.indicator = int(indicator)
        self.candidate_count = int(candidate_count)

    ##############################################

    def __getitem__(self, term):
        return self.counts.get(normalize_word(term), 0)

    def is_zero(self):
        return not self.counts and not self.indicator

    ##############################################

    def as_array(self, buckets):

        """Return the dense feature vector: the counts hashed into *buckets* slots, then the
        indicator and the candidate count.
        """

        array = np.zeros(buckets + 2)
        for term, count in self.counts.items():
            array[bucket_of(term, buckets)] += count
        array[buckets] = self.indicator
        array[buckets + 1] = self.candidate_count
        return array

####################################################################################################

def bucket_of(term, buckets):
    return name_key(term) % buckets

####################################################################################################

def overlap_features(candidate, ctx):

    """Return the :class:`OverlapVector` of *candidate* against the context."""

    counts = Counter()
    for source in ctx.sources():
        counts.update(source)
    candidate = ' '.join(tokenize(candidate))
    candidate_count = counts.get(candidate, 0)
    return OverlapVector(counts, candidate_count > 0, candidate_count)
