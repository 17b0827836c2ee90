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

"""This module provides helpers to plot the k sweeps and the training histories using Matplotlib.

Accuracies and MRR are plotted in percent.
"""

####################################################################################################

import matplotlib
matplotlib.use('Agg')
from matplotlib import pyplot

####################################################################################################

from ..Tools.Path import ensure_parent_directory

####################################################################################################

def k_sweep_plot(axe, report, **kwargs):

    ks = [row.k for row in report.rows]
    for metric in report.METRICS:
        values = [row.metric(metric) for row in report.rows]
        if all(value is None for value in values):
            continue
        values = [float('nan') if value is None else 100*value for value in values]
        line, = axe.plot(ks, values, marker='o', label=metric, **kwargs)
        baseline = report.baseline.metric(metric)
        if baseline is not None:
            axe.axhline(100*baseline, linestyle='--', color=line.get_color(), linewidth=.8)
    axe.set_xticks(ks)
    axe.grid(True)
    axe.set_xlabel("k-best hypotheses")
    axe.set_ylabel("[%]")
    axe.legend(loc='best')

####################################################################################################

def history_plot(axes, history, **kwargs):

    epochs = range(1, len(history) + 1)
    axes[0].plot(epochs, history.loss, label='train', **kwargs)
    axes[1].plot(epochs, history.accuracy, label='train', **kwargs)
    if history.has_validation:
        axes[0].plot(epochs, history.val_loss, label='validation', **kwargs)
        axes[1].plot(epochs, history.val_accuracy, label='validation', **kwargs)
    for axe, label in zip(axes, ("Loss", "Accuracy")):
        axe.grid(True)
        axe.set_xlabel("Epoch")
        axe.set_ylabel(label)
        axe.legend(loc='best')
    if history.best_epoch is not None:
        for axe in axes:
            axe.axvline(history.best_epoch + 1, linestyle=':', color='grey')

####################################################################################################

def save_k_sweep_plot(path, report):
    figure, axe = pyplot.subplots(figsize=(8, 5))
    k_sweep_plot(axe, report)
    _save(figure, path)

def save_history_plot(path, history):
    figure, axes = pyplot.subplots(2, 1, sharex=True, figsize=(8, 8))
    history_plot(axes, history)
    _save(figure, path)

def _save(figure, path):
    ensure_parent_directory(path)
    figure.tight_layout()
    figure.savefig(path)
    pyplot.close(figure)
