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

####################################################################################################

def to_absolute_path(path):

    # Expand ~ . and Remove trailing '/'

    return os.path.abspath(os.path.expanduser(path))

####################################################################################################

def find(file_name, directories):

    if isinstance(directories, (str, bytes)):
        directories = (directories,)
    for directory in directories:
        for directory_path, sub_directories, file_names in os.walk(directory):
            if file_name in file_names:
                return os.path.join(directory_path, file_name)

    raise NameError("File %s not found in directories %s" % (file_name, str(directories)))

####################################################################################################

def output_path_for(path, suffix):

    """Return a sibling path of *path* where the extension is replaced by *suffix*, e.g. the training
    manifest ``model.manifest.yml`` written next to ``model.rel``.

    """

    root, _ = os.path.splitext(str(path))
    return root + suffix

####################################################################################################

def ensure_parent_directory(path):

    directory = os.path.dirname(to_absolute_path(str(path)))
    os.makedirs(directory, exist_ok=True)
    return path
