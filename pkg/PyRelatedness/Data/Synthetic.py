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

"""This module generates a planted-signal corpus.

The vocabulary is split into topics.  The word vectors of a topic are drawn around a topic
centroid, so the words of a topic are similar.  Each image has a topic: its context is made of
object labels, a place label and a caption drawn from the topic, and its gold word is a topic word.

The hypothesis sets mix the gold word with words of other topics, and the baseline scores put the
gold word at a rank drawn uniformly in 1 ... 4, so the re-ranking gain of a relatedness scorer can
be measured.

"""

####################################################################################################

__all__ = [
    'SyntheticCorpus',
    'make_synthetic',
]

####################################################################################################

import logging
import os

import numpy as np
from scipy.special import softmax

####################################################################################################

from ..Layers.Embedding import EmbeddingTable
from ..Model.Context import ContextBundle
from ..Rerank.Hypothesis import Candidate, HypothesisSet
from ..Tools.Random import derive_rng
from .Contexts import save_context
from .Corpus import save_gold, save_lexicon, save_text
from .Embeddings import save_embeddings
from .Hypotheses import save_hypotheses

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

FILLER_WORDS = ('a', 'the', 'on', 'with', 'near', 'of')

FILE_NAMES = dict(
    embeddings='embeddings.txt',
    context='context.tsv',
    gold='train.gold.tsv',
    hypotheses='hypotheses.tsv',
    lexicon='lexicon.txt',
    unigram_corpus='unigram.txt',
)

####################################################################################################

class SyntheticCorpus:

    """Public Attributes:

      :attr:`words`, :attr:`vectors`
        the word vectors

      :attr:`topics`
        list of dictionaries kind -> words, the kinds are ``gold``, ``object``, ``place`` and
        ``caption``

      :attr:`train_items`
        list of (image id, gold word)

      :attr:`contexts`
        dictionary image id -> :class:`ContextBundle`, for the training and the test images

      :attr:`hypothesis_sets`

      :attr:`lexicon`

      :attr:`unigram_text`

    """

    ##############################################

    def __init__(self, words, vectors, topics, train_items, contexts, hypothesis_sets, lexicon, unigram_text):
        self.words = list(words)
        self.vectors = np.asarray(vectors)
        self.topics = topics
        self.train_items = list(train_items)
        self.contexts = dict(contexts)
        self.hypothesis_sets = list(hypothesis_sets)
        self.lexicon = frozenset(lexicon)
        self.unigram_text = unigram_text

    ##############################################

    def embedding_table(self, trainable=True):
        return EmbeddingTable.from_vectors(self.words, self.vectors, trainable)

    def training_corpus(self):
        """Return the list of (gold word, context) of the training images"""
        return [(gold, self.contexts[image_id]) for image_id, gold in self.train_items]

    def topic_of(self, word):
        for index, topic in enumerate(self.topics):
            if any(word in words for words in topic.values()):
                return index
        return None

    ##############################################

    def save(self, directory):

        """Write the corpus files into *directory* and return the dictionary kind -> path."""

        paths = {key: os.path.join(directory, name) for key, name in FILE_NAMES.items()}
        save_embeddings(paths['embeddings'], self.words, self.vectors)
        save_context(paths['context'], self.contexts)
        save_gold(paths['gold'], self.train_items)
        save_hypotheses(paths['hypotheses'], self.hypothesis_sets)
        save_lexicon(paths['lexicon'], self.lexicon)
        save_text(paths['unigram_corpus'], self.unigram_text)
        _module_logger.info("Synthetic corpus written to {}".format(directory))
        return paths

####################################################################################################

def _topic_words(topic, kind, count):
    return ['{}{}x{}'.format(kind, topic, i) for i in range(count)]

####################################################################################################

def _make_context(rng, topic, objects_per_image=2):
    objects = rng.choice(topic['object'], size=objects_per_image, replace=False)
    place = rng.choice(topic['place'])
    caption_word = rng.choice(topic['caption'])
    confidences = np.round(rng.uniform(.5, 1., size=objects_per_image + 1), 3)
    caption = 'a {} on the {} with {}'.format(objects[0], place, caption_word)
    return ContextBundle([(str(label), confidence) for label, confidence in zip(objects, confidences)],
                         [(str(place), confidences[-1])],
                         caption)

####################################################################################################

def make_synthetic(seed=42,
                   num_topics=5,
                   gold_per_topic=4,
                   objects_per_topic=6,
                   places_per_topic=3,
                   captions_per_topic=4,
                   num_train=100,
                   num_sets=500,
                   k=5,
                   dimension=50,
                   noise=.3,
                   max_gold_rank=4,
                   ):

    """Generate a :class:`SyntheticCorpus`, everything only depends on *seed*."""

    if num_topics < 2:
        raise ValueError("At least two topics are required")
    if k < 1 or k > 1 + (num_topics - 1)*gold_per_topic:
        raise ValueError("Cannot build {} candidates from {} topics".format(k, num_topics))
    rng = derive_rng(seed, 'synthetic')

    topics = []
    words = []
    vectors = []
    centroids = rng.normal(0., 1./np.sqrt(dimension), size=(num_topics, dimension))
    for index in range(num_topics):
        topic = dict(
            gold=_topic_words(index, 'word', gold_per_topic),
            object=_topic_words(index, 'obj', objects_per_topic),
            place=_topic_words(index, 'place', places_per_topic),
            caption=_topic_words(index, 'cap', captions_per_topic),
        )
        topics.append(topic)
        for kind in ('gold', 'object', 'place', 'caption'):
            for word in topic[kind]:
                words.append(word)
                vectors.append(centroids[index] + rng.normal(0., noise/np.sqrt(dimension), size=dimension))
    for word in FILLER_WORDS:
        words.append(word)
        vectors.append(rng.normal(0., 1./np.sqrt(dimension), size=dimension))
    vectors = np.array(vectors)

    contexts = {}
    train_items = []
    for i in range(num_train):
        image_id = 'train{:05d}'.format(i)
        topic = topics[i % num_topics]
        contexts[image_id] = _make_context(rng, topic)
        train_items.append((image_id, str(rng.choice(topic['gold']))))

    hypothesis_sets = []
    all_gold = [word for topic in topics for word in topic['gold']]
    for i in range(num_sets):
        image_id = 'test{:05d}'.format(i)
        index = int(rng.integers(num_topics))
        topic = topics[index]
        ctx = _make_context(rng, topic)
        contexts[image_id] = ctx
        gold = str(rng.choice(topic['gold']))
        others = [word for word in all_gold if word not in topic['gold']]
        distractors = [str(word) for word in rng.choice(others, size=k - 1, replace=False)]
        scores = softmax(np.sort(rng.normal(0., .5, size=k))[::-1])
        gold_rank = int(rng.integers(min(k, max_gold_rank)))
        words_by_rank = distractors[:gold_rank] + [gold] + distractors[gold_rank:]
        candidates = [Candidate(word, score) for word, score in zip(words_by_rank, scores)]
        hypothesis_sets.append(HypothesisSet(image_id, gold, candidates, ctx))

    lexicon_mask = rng.random(len(all_gold)) < .8
    lexicon = [word for word, keep in zip(all_gold, lexicon_mask) if keep]

    # flat unigram distribution over the topic words
    tokens = [word for word in words if word not in FILLER_WORDS] * 10
    tokens = [tokens[i] for i in rng.permutation(len(tokens))]
    unigram_text = '\n'.join(' '.join(tokens[i:i+20]) for i in range(0, len(tokens), 20)) + '\n'

    _module_logger.info("Synthetic corpus: {} words, {} training images, {} hypothesis sets".format(
        len(words), num_train, num_sets))
    return SyntheticCorpus(words, vectors, topics, train_items, contexts, hypothesis_sets, lexicon, unigram_text)
