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

from invoke import task

####################################################################################################

SOURCE_PATH = Path(__file__).resolve().parents[1]

def _command(*args):
    return ' '.join(['pyrelatedness'] + [str(arg) for arg in args])

####################################################################################################

@task
def unit_test(ctx):
    with ctx.cd(str(SOURCE_PATH)):
        ctx.run('pytest unit-test')

@task(help={'seed': 'Root seed of the checks'})
def gradcheck(ctx, seed=7):
    ctx.run(_command('gradcheck', '--seed', seed))

####################################################################################################

@task
def synthetic(ctx):

    """Run the whole pipeline on a synthetic corpus: generate, train, re-rank and sweep."""

    directory = Path(ctx.synthetic.directory)
    seed = ctx.synthetic.seed
    model = directory.joinpath('model.rel')
    ctx.run(_command('make-synthetic', '--seed', seed, '--out', directory))
    ctx.run(_command('train', '--seed', seed,
                     '--embeddings', directory.joinpath('embeddings.txt'),
                     '--context', directory.joinpath('context.tsv'),
                     '--gold', directory.joinpath('train.gold.tsv'),
                     '--plot', directory.joinpath('history.png'),
                     '--out', model))
    data = ('--hypotheses', directory.joinpath('hypotheses.tsv'),
            '--context', directory.joinpath('context.tsv'),
            '--model', model,
            '--unigram-corpus', directory.joinpath('unigram.txt'),
            '--lexicon', directory.joinpath('lexicon.txt'))
    ctx.run(_command('rerank', *data, '--out', directory.joinpath('reranked.tsv')))
    ctx.run(_command('sweep', *data, '--k-max', 5,
                     '--plot', directory.joinpath('sweep.png'),
                     '--out', directory.joinpath('sweep.yml')))
