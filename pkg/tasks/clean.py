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

from pathlib import Path
import os

from invoke import task

####################################################################################################

def find(matcher):
    to_delete = []
    for root, _, filenames in os.walk('.'):
        root = Path(root)
        for filename in filenames:
            filename = Path(filename)
            if matcher(filename):
                to_delete.append(root.joinpath(filename))
    if to_delete:
        rule = '='*100
        print(rule)
        for path in to_delete:
            print(path)
        print(rule)
        rc = input('remove ? [n]/y ')
        if rc == 'y':
            for path in to_delete:
                path.unlink()

####################################################################################################

@task
def emacs_backup(ctx):
    find(lambda filename: str(filename).endswith('~'))

@task
def pycache(ctx):
    find(lambda filename: filename.suffix == '.pyc')

@task
def outputs(ctx):
    """Remove the files written by the synthetic pipeline"""
    directory = Path(ctx.synthetic.directory)
    for path in sorted(directory.glob('*')):
        print('remove', path)
        path.unlink()

@task(emacs_backup, pycache)
def clean(ctx):
    pass
