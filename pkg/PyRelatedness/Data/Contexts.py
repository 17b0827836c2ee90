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

"""This module reads and writes the context files.

Each record gives the visual context of an image::

  image_id <tab> objects <tab> places <tab> caption

where objects and places are lists ``label:confidence|label:confidence``, possibly empty.  A
duplicated image id replaces the previous record.

"""

####################################################################################################

__all__ = [
    'CONTEXT_KIND',
    'CONTEXT_VERSION',
    'load_context',
    'save_context',
]

####################################################################################################

import logging

####################################################################################################

from ..Model.Context import ContextBundle
from ..Tools.StringTools import str_real
from .Format import ParseError, parse_real, read_records, write_records

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

CONTEXT_KIND = 'context'
CONTEXT_VERSION = 1

LABEL_SEPARATOR = '|'
CONFIDENCE_SEPARATOR = ':'

####################################################################################################

def _parse_labels(path, line_number, text):
    labels = []
    for item in text.split(LABEL_SEPARATOR):
        item = item.strip()
        if not item:
            continue
        label, separator, confidence = item.rpartition(CONFIDENCE_SEPARATOR)
        if not separator or not label:
            raise ParseError(path, line_number, "expected label:confidence, got {!r}".format(item))
        labels.append((label, parse_real(path, line_number, confidence, 'confidence')))
    return labels

####################################################################################################

def _format_labels(labels):
    return LABEL_SEPARATOR.join('{}{}{}'.format(label, CONFIDENCE_SEPARATOR, str_real(confidence))
                                for label, confidence in labels)

####################################################################################################

def load_context(path):

    """Return the dictionary image id -> :class:`ContextBundle` of a context file."""

    contexts = {}
    duplicates = 0
    for line_number, fields in read_records(path, CONTEXT_KIND, CONTEXT_VERSION):
        if len(fields) != 4:
            raise ParseError(path, line_number, "expected 4 fields, got {}".format(len(fields)))
        image_id, objects, places, caption = fields
        if not image_id:
            raise ParseError(path, line_number, "empty image id")
        try:
            ctx = ContextBundle(_parse_labels(path, line_number, objects),
                                _parse_labels(path, line_number, places),
                                caption)
        except ValueError as exception:
            raise ParseError(path, line_number, str(exception))
        if image_id in contexts:
            _module_logger.warning("{} line {}: duplicate image id {}, the last record wins".format(path, line_number, image_id))
            duplicates += 1
        contexts[image_id] = ctx
    _module_logger.info("Loaded {} contexts from {}, {} duplicates".format(len(contexts), path, duplicates))
    return contexts

####################################################################################################

def save_context(path, contexts):

    """Write a dictionary image id -> :class:`ContextBundle`."""

    write_records(path, CONTEXT_KIND, CONTEXT_VERSION,
                  ((image_id, _format_labels(ctx.objects), _format_labels(ctx.places), ' '.join(ctx.caption))
                   for image_id, ctx in contexts.items()))
