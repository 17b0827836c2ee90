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
"""This module implements the ``pyrelatedness`` command line: training, re-ranking, evaluation,
k sweep, gradient checks and synthetic corpus generation.
"""

####################################################################################################

import argparse
import sys

import yaml

####################################################################################################

import PyRelatedness
import PyRelatedness.Logging.Logging as Logging
logger = Logging.setup_logging()

####################################################################################################

from PyRelatedness.Config.ConfigInstall import Defaults
from PyRelatedness.Data.Contexts import load_context
from PyRelatedness.Data.Corpus import load_gold, load_lexicon, save_traces
from PyRelatedness.Data.Dataset import load_dataset
from PyRelatedness.Data.Embeddings import load_embeddings
from PyRelatedness.Data.Hypotheses import save_hypotheses
from PyRelatedness.Data.Synthetic import make_synthetic
from PyRelatedness.Evaluation.Sweep import EvalReport, baseline_row, evaluate_k, k_sweep
from PyRelatedness.Model.Config import FDCLSTM_AT, ModelConfig, VARIANTS
from PyRelatedness.Model.Context import ContextBundle
from PyRelatedness.Model.RelatednessModel import build_model
from PyRelatedness.Model.Serialization import load_model, model_file_checksum, save_model
from PyRelatedness.Rerank.Fusion import FusionConfig
from PyRelatedness.Rerank.Reranker import Reranker
from PyRelatedness.Rerank.Scorer import NEURAL, SCORERS, make_scorer
from PyRelatedness.Rerank.Unigram import UnigramModel
from PyRelatedness.Tools.Path import ensure_parent_directory, output_path_for
from PyRelatedness.Tools.Random import derive_rng
from PyRelatedness.Training.GradientSuite import DEFAULT_TOLERANCE, run_gradient_suite
from PyRelatedness.Training.Pairs import make_pairs
from PyRelatedness.Training.Trainer import Trainer, TrainingConfig, training_manifest

####################################################################################################

DEFAULT_FUSION_WEIGHTS = '1,1,0,1'

# exceptions reported as a validation failure
VALIDATION_ERRORS = (ValueError, NameError, ArithmeticError, OSError)

####################################################################################################

def _require(args, *names):
    missing = ['--' + name.replace('_', '-') for name in names if getattr(args, name) is None]
    if missing:
        raise ValueError("{} requires {}".format(args.command, ', '.join(missing)))

####################################################################################################

def _log_config(args):
    settings = {key: value for key, value in sorted(vars(args).items()) if key != 'function'}
    logger.info("Effective configuration: {}".format(settings))

####################################################################################################

def _write_yaml(path, data):
    ensure_parent_directory(path)
    with open(path, 'w', encoding='utf-8') as fh:
        yaml.safe_dump(data, fh, default_flow_style=False, sort_keys=True)

####################################################################################################

def make_synthetic_command(args):

    _require(args, 'out')
    parameters = dict(seed=args.seed, num_sets=args.num_sets, k=args.k or 5)
    if args.toy:
        parameters['dimension'] = ModelConfig.toy().embedding_dimension
    corpus = make_synthetic(**parameters)
    paths = corpus.save(args.out)
    for kind, path in sorted(paths.items()):
        print('{:<16} {}'.format(kind, path))
    return 0

####################################################################################################

def train_command(args):

    _require(args, 'embeddings', 'context', 'gold', 'out')

    embeddings = load_embeddings(args.embeddings, trainable=not args.freeze_embeddings)
    contexts = load_context(args.context)
    corpus = []
    for image_id, word in load_gold(args.gold):
        ctx = contexts.get(image_id)
        if ctx is None:
            logger.warning("No context for image {}, an empty context is substituted".format(image_id))
            ctx = ContextBundle.empty(substitute=True)
        corpus.append((word, ctx))

    model_parameters = dict(variant=args.variant, embedding_dimension=embeddings.dimension)
    if args.toy:
        model_config = ModelConfig.toy(**model_parameters)
    else:
        model_config = ModelConfig(**model_parameters)
    training_parameters = dict(seed=args.seed, freeze_embeddings=args.freeze_embeddings)
    for key in ('epochs', 'batch_size', 'neg_ratio'):
        value = getattr(args, key)
        if value is not None:
            training_parameters[key] = value
    training_config = TrainingConfig(**training_parameters)
    logger.info("Model {}".format(model_config))
    logger.info("{}".format(training_config))

    pairs = make_pairs(corpus, training_config.neg_ratio, derive_rng(args.seed, 'pairs'))
    model = build_model(model_config, embeddings, derive_rng(args.seed, 'init'))
    history = Trainer(model, training_config).train(pairs)

    save_model(model, args.out)
    data = dict(embeddings=args.embeddings, context=args.context, gold=args.gold,
                images=len(corpus), pairs=len(pairs), vocabulary=len(embeddings))
    manifest = training_manifest(model, training_config, history, data, model_file_checksum(args.out))
    manifest_path = output_path_for(args.out, Defaults.manifest_suffix)
    _write_yaml(manifest_path, manifest)
    logger.info("Training manifest written to {}".format(manifest_path))

    if args.plot:
        from PyRelatedness.Plot.SweepPlot import save_history_plot
        save_history_plot(args.plot, history)
    return 0

####################################################################################################

def _make_reranker(args):

    """Load the dataset and build the re-ranker described by the command line."""

    _require(args, 'hypotheses', 'context')
    cfg = FusionConfig.from_string(args.fusion_weights, scorer=args.scorer)
    logger.info("{}".format(cfg))

    model = embeddings = None
    if cfg.uses_scorer:
        if cfg.scorer == NEURAL:
            _require(args, 'model')
            model = load_model(args.model)
        else:
            _require(args, 'embeddings')
            embeddings = load_embeddings(args.embeddings, trainable=False)
    dataset, _ = load_dataset(args.hypotheses, args.context,
                              embeddings if embeddings is not None else getattr(model, 'embeddings', None))
    scorer = make_scorer(cfg.scorer, model, embeddings) if cfg.uses_scorer else None

    if args.unigram_corpus is not None:
        lm = UnigramModel.from_file(args.unigram_corpus)
    elif cfg.unigram:
        raise ValueError("The unigram weight {} requires --unigram-corpus".format(cfg.unigram))
    else:
        lm = None
    lexicon = load_lexicon(args.lexicon) if args.lexicon is not None else None

    return dataset, scorer, lm, cfg, lexicon

####################################################################################################

def rerank_command(args):

    _require(args, 'out')
    dataset, scorer, lm, cfg, _ = _make_reranker(args)
    reranker = Reranker(scorer, lm, cfg)
    results = reranker.rerank_all(dataset, args.k)
    save_hypotheses(args.out, results)
    trace_path = output_path_for(args.out, Defaults.trace_suffix)
    save_traces(trace_path, (record for h, ranked in results for record in Reranker.trace_records(h, ranked)))
    logger.info("Re-ranked {} sets to {}, traces in {}".format(len(results), args.out, trace_path))
    return 0

####################################################################################################

def _emit_report(args, report):
    print(report.to_table(), end='')
    if args.out is not None:
        report.save(args.out)
        logger.info("Report written to {}".format(args.out))

def eval_command(args):

    dataset, scorer, lm, cfg, lexicon = _make_reranker(args)
    k = args.k if args.k is not None else max(h.k for h in dataset)
    row = evaluate_k(dataset, Reranker(scorer, lm, cfg), k, lexicon)
    settings = dict(fusion=cfg.to_dict(), k=k, records=len(dataset), lexicon=lexicon is not None)
    _emit_report(args, EvalReport(baseline_row(dataset, lexicon), [row], settings))
    return 0

def sweep_command(args):

    dataset, scorer, lm, cfg, lexicon = _make_reranker(args)
    report = k_sweep(dataset, scorer, cfg, args.k_max, lm, lexicon)
    _emit_report(args, report)
    if args.plot:
        from PyRelatedness.Plot.SweepPlot import save_k_sweep_plot
        save_k_sweep_plot(args.plot, report)
    return 0

####################################################################################################

def gradcheck_command(args):

    report = run_gradient_suite(args.seed, args.tolerance)
    print(report.to_table())
    return 0 if report.passed else 1

####################################################################################################

def _add_data_arguments(parser):

    parser.add_argument('--hypotheses', default=None, help='Hypothesis file')
    parser.add_argument('--context', default=None, help='Context file')
    parser.add_argument('--model', default=None, help='Model file of the neural scorer')
    parser.add_argument('--embeddings', default=None, help='Embedding file of the cosine scorers')
    parser.add_argument('--unigram-corpus', default=None, help='Text corpus of the unigram model')
    parser.add_argument('--lexicon', default=None, help='Lexicon file, one word per line')
    parser.add_argument('--fusion-weights',
                        default=DEFAULT_FUSION_WEIGHTS,
                        help='Weights of the baseline, relatedness, context and unigram scores')
    parser.add_argument('--scorer',
                        choices=SCORERS, default=NEURAL,
                        help='Relatedness scorer')

def make_parser():

    parser = argparse.ArgumentParser(prog='pyrelatedness',
                                     description='Re-rank text spotting hypotheses by semantic relatedness')
    parser.add_argument('--version', action='version', version='%(prog)s ' + PyRelatedness.__version__)
    # every subcommand accepts the seed after its name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed',
                        type=int, default=Defaults.seed,
                        help='Root seed of every random stream')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    subparser = subparsers.add_parser('train', parents=[common], help='Train a relatedness model')
    subparser.add_argument('--embeddings', default=None, help='Embedding file')
    subparser.add_argument('--context', default=None, help='Context file')
    subparser.add_argument('--gold', default=None, help='Gold file of the training images')
    subparser.add_argument('--variant', choices=VARIANTS, default=FDCLSTM_AT, help='Model variant')
    subparser.add_argument('--epochs', type=int, default=None)
    subparser.add_argument('--batch-size', type=int, default=None)
    subparser.add_argument('--neg-ratio', type=int, default=None, help='Negatives per positive')
    subparser.add_argument('--freeze-embeddings',
                           default=False, action='store_true',
                           help='Keep the pretrained embeddings static')
    subparser.add_argument('--toy',
                           default=False, action='store_true',
                           help='Use the small dimensions of the tests')
    subparser.add_argument('--plot', default=None, help='Training history figure')
    subparser.add_argument('--out', default=None, help='Model file')
    subparser.set_defaults(function=train_command)

    subparser = subparsers.add_parser('rerank', parents=[common], help='Re-rank hypothesis sets')
    _add_data_arguments(subparser)
    subparser.add_argument('--k', type=int, default=None, help='Keep the top-k candidates first')
    subparser.add_argument('--out', default=None, help='Re-ranked hypothesis file')
    subparser.set_defaults(function=rerank_command)

    subparser = subparsers.add_parser('eval', parents=[common], help='Evaluate the re-ranking at one k')
    _add_data_arguments(subparser)
    subparser.add_argument('--k', type=int, default=None, help='Candidates per set, all by default')
    subparser.add_argument('--out', default=None, help='YAML report')
    subparser.set_defaults(function=eval_command)

    subparser = subparsers.add_parser('sweep', parents=[common], help='Evaluate the re-ranking for k = 1 ... k-max')
    _add_data_arguments(subparser)
    subparser.add_argument('--k-max', type=int, default=10)
    subparser.add_argument('--plot', default=None, help='k sweep figure')
    subparser.add_argument('--out', default=None, help='YAML report')
    subparser.set_defaults(function=sweep_command)

    subparser = subparsers.add_parser('gradcheck', parents=[common], help='Run the finite difference gradient checks')
    subparser.add_argument('--tolerance', type=float, default=DEFAULT_TOLERANCE)
    subparser.set_defaults(function=gradcheck_command)

    subparser = subparsers.add_parser('make-synthetic', parents=[common], help='Write a planted signal corpus')
    subparser.add_argument('--num-sets', type=int, default=500, help='Number of hypothesis sets')
    subparser.add_argument('--k', type=int, default=None, help='Candidates per set')
    subparser.add_argument('--toy',
                           default=False, action='store_true',
                           help='Use the embedding dimension of the toy model')
    subparser.add_argument('--out', default=None, help='Output directory')
    subparser.set_defaults(function=make_synthetic_command)

    return parser

####################################################################################################

def run_command(argv=None):

    """Run the command line *argv* and return the exit code: 0 on success, 1 on a validation
    failure and 2 on a usage error.
    """

    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exception:
        return exception.code if isinstance(exception.code, int) else 2

    _log_config(args)
    try:
        return args.function(args)
    except VALIDATION_ERRORS as exception:
        logger.error("{} failed: {}: {}".format(args.command, exception.__class__.__name__, exception))
        return 1

####################################################################################################

def main():
    sys.exit(run_command())
