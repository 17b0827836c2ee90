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

"""This module implements the line oriented text format shared by the data files.

A data file starts with a header line ``#<kind> <version>`` followed by one record per line, the
fields are separated by tabs.  Blank lines are ignored.

"""

####################################################################################################

__all__ = [
    'ParseError',
    'parse_real',
    'read_records',
    'write_records',
]

####################################################################################################

import logging

####################################################################################################

from ..Tools.Path import ensure_parent_directory
from ..Tools.StringTools import FIELD_SEPARATOR, join_fields

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class ParseError(NameError):

    """Public Attributes:

      :attr:`path`

      :attr:`line_number`
        1-based, None for an error on the whole file

    """

    ##############################################

    def __init__(self, path, line_number, message):
        if line_number is None:
            text = '{}: {}'.format(path, message)
        else:
            text = '{} line {}: {}'.format(path, line_number, message)
        super().__init__(text)
        self.path = path
        self.line_number = line_number

####################################################################################################

def _header(kind, version):
    return '#{} {}'.format(kind, version)

####################################################################################################

def read_records(path, kind, version):

    """Yield the (line number, fields) of the records of a data file.

    Raise :class:`ParseError` when the header doesn't match or when the file has no record.
    """

    count = 0
    with open(path, encoding='utf-8') as fh:
        header = None
        for line_number, line in enumerate(fh, start=1):
            line = line.rstrip('\r\n')
            if not line.strip():
                continue
            if header is None:
                header = line.strip()
                expected = _header(kind, version)
                if header != expected:
                    if header.split()[0] == '#' + kind:
                        raise ParseError(path, line_number, "unsupported version {}, expected {}".format(header, expected))
                    raise ParseError(path, line_number, "expected header {}".format(expected))
                continue
            count += 1
            yield line_number, line.split(FIELD_SEPARATOR)
    if not count:
        raise ParseError(path, None, "no records")

####################################################################################################

def write_records(path, kind, version, records):

    """Write a data file, *records* is an iterable of field lists."""

    ensure_parent_directory(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(_header(kind, version) + '\n')
        count = 0
        for fields in records:
            fh.write(join_fields(fields) + '\n')
            count += 1
    _module_logger.info("Wrote {} {} records to {}".format(count, kind, path))

####################################################################################################

def parse_real(path, line_number, text, what):
    try:
        return float(text)
    except ValueError:
        raise ParseError(path, line_number, "{} is not a real: {!r}".format(what, text))
