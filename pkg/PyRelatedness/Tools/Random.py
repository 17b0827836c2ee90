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

"""This module derives independent random generators from one root seed.

Every consumer asks for a generator by name, for example::

  rng = derive_rng(seed, 'init')

The stream only depends on the root seed and on the name, so adding a consumer does not shift the
draws of the others.

"""

####################################################################################################

import zlib

import numpy as np

####################################################################################################

def name_key(name):
    return zlib.crc32(str(name).encode('utf-8'))

####################################################################################################

def derive_rng(seed, name):
    sequence = np.random.SeedSequence([int(seed), name_key(name)])
    return np.random.default_rng(sequence)

