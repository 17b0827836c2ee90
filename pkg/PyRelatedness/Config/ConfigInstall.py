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

import os
import sys

####################################################################################################

from ..Tools import Path as PathTools

####################################################################################################

class OsFactory:

    ##############################################

    def __init__(self):

        if sys.platform.startswith('linux'):
            self._name = 'linux'
        elif sys.platform.startswith('win'):
            self._name = 'windows'
        elif sys.platform.startswith('darwin'):
            self._name = 'osx'
        else:
            self._name = sys.platform

    ##############################################

    @property
    def name(self):
        return self._name

    @property
    def has_ansi_terminal(self):
        return self._name == 'linux'

OS = OsFactory()

####################################################################################################

_this_file = PathTools.to_absolute_path(__file__)

class Path:

    config_directory = os.path.dirname(_this_file)

####################################################################################################

class Logging:

    default_config_file = 'logging.yml'
    directories = (Path.config_directory,)

    ##############################################

    @staticmethod
    def find(config_file):
        if os.path.isabs(config_file) and os.path.exists(config_file):
            return config_file
        return PathTools.find(config_file, Logging.directories)

####################################################################################################

class Defaults:

    """Process wide defaults shared by the command line and the library entry points."""

    seed = 42
    manifest_suffix = '.manifest.yml'
    trace_suffix = '.trace.tsv'
