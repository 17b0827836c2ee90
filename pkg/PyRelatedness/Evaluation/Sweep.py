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

"""This module evaluates a re-ranker over a range of k-best list sizes.

For each k, the candidate lists are first truncated to their top-k candidates by baseline score
and then re-ranked.  The report starts with the baseline row, computed on the full candidate lists
without re-ranking.

"""

####################################################################################################

__all__ = [
    'EvalReport',
    'SweepRow',
    'baseline_row',
    'evaluate_k',
    'k_sweep',
]

####################################################################################################

import logging

import yaml

####################################################################################################

from ..Rerank.Reranker import Reranker
from ..Tools.Path import ensure_parent_directory
from .Metrics import DICT, EvalRecord, FULL, LIST, MetricValue, accuracy, mrr

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

class SweepRow:

    """This class holds the metrics of one evaluation.

    Public Attributes:

      :attr:`k`
        None for the baseline row

      :attr:`full`, :attr:`dict`, :attr:`list`
        :class:`MetricValue`

      :attr:`mrr`

      :attr:`count`
        number of records

    """

    ##############################################

    def __init__(self, k, full, dict_, list_, mrr, count):
        self.k = k
        self.full = full
        self.dict = dict_
        self.list = list_
        self.mrr = float(mrr)
        self.count = int(count)

    ##############################################

    @classmethod
    def from_records(cls, k, records, lexicon=None):
        if lexicon is not None:
            dict_ = accuracy(records, DICT, lexicon)
        else:
            dict_ = MetricValue(0, 0)
        return cls(k,
                   accuracy(records, FULL),
                   dict_,
                   accuracy(records, LIST),
                   mrr(records),
                   len(records))

    ##############################################

    @property
    def label(self):
        return 'baseline' if self.k is None else 'k={}'.format(self.k)

    def metric(self, name):
        if name == 'mrr':
            return self.mrr
        return getattr(self, name).value

    def to_dict(self):
        return dict(
            k=self.k,
            full=self.full.to_dict(),
            dict=self.dict.to_dict(),
            list=self.list.to_dict(),
            mrr=self.mrr,
            count=self.count,
        )

####################################################################################################

class EvalReport:

    """This class holds the rows of a k sweep.

    Public Attributes:

      :attr:`baseline`
        :class:`SweepRow` of the baseline

      :attr:`rows`
        one :class:`SweepRow` per k, in increasing order

      :attr:`settings`
        dictionary describing the run

    """

    METRICS = ('full', 'dict', 'list', 'mrr')
    HEADER = ('', 'full', 'dict', 'list', 'k', 'MRR')

    ##############################################

    def __init__(self, baseline, rows, settings=None):
        self.baseline = baseline
        self.rows = list(rows)
        self.settings = dict(settings or {})

    ##############################################

    def __len__(self):
        return len(self.rows)

    def row(self, k):
        for row in self.rows:
            if row.k == k:
                return row
        raise KeyError(k)

    ##############################################

    def best_k(self, metric):

        """Return the k maximising *metric*, the smallest one on ties, None when the metric is never
        defined.
        """

        best = None
        best_value = None
        for row in self.rows:
            value = row.metric(metric)
            if value is not None and (best_value is None or value > best_value):
                best, best_value = row.k, value
        return best

    @property
    def best(self):
        return {metric: self.best_k(metric) for metric in self.METRICS}

    ##############################################

    def _table_row(self, label, row):
        k = '-' if row.k is None else str(row.k)
        return (label, str(row.full), str(row.dict), str(row.list), k, '{:.1f}'.format(100*row.mrr))

    ##############################################

    def to_table(self):

        """Return the report as a text table with the columns full, dict, list, k and MRR, the
        values are percentages.
        """

        lines = [self._table_row(self.baseline.label, self.baseline)]
        lines += [self._table_row(row.label, row) for row in self.rows]
        best_k = self.best_k('mrr')
        if best_k is not None:
            lines.append(self._table_row('best', self.row(best_k)))
        lines.insert(0, self.HEADER)
        widths = [max(len(line[i]) for line in lines) for i in range(len(self.HEADER))]
        text = []
        for line in lines:
            cells = [line[0].ljust(widths[0])] + [cell.rjust(width) for cell, width in zip(line[1:], widths[1:])]
            text.append('  '.join(cells).rstrip())
        return '\n'.join(text) + '\n'

    ##############################################

    def to_dict(self):
        return dict(
            settings=self.settings,
            baseline=self.baseline.to_dict(),
            rows=[row.to_dict() for row in self.rows],
            best_k=self.best,
        )

    ##############################################

    def save(self, path):
        ensure_parent_directory(path)
        with open(path, 'w', encoding='utf-8') as fh:
            yaml.safe_dump(self.to_dict(), fh, default_flow_style=False, sort_keys=True)

####################################################################################################

def baseline_row(dataset, lexicon=None):
    records = [EvalRecord.from_baseline(h, lexicon) for h in dataset]
    return SweepRow.from_records(None, records, lexicon)

####################################################################################################

def evaluate_k(dataset, reranker, k, lexicon=None):

    """Return the :class:`SweepRow` of the re-ranker on the dataset truncated to *k* candidates."""

    records = [EvalRecord.from_ranking(h, ranked, lexicon)
               for h, ranked in reranker.rerank_all(dataset, k)]
    return SweepRow.from_records(k, records, lexicon)

####################################################################################################

def k_sweep(dataset, scorer, cfg, k_max=10, lm=None, lexicon=None):

    """Evaluate the re-ranking of *dataset* for k = 1 ... *k_max* and return an :class:`EvalReport`.
    """

    k_max = int(k_max)
    if k_max < 1:
        raise ValueError("k_max must be >= 1, got {}".format(k_max))
    dataset = list(dataset)
    if not dataset:
        raise ValueError("Empty dataset")

    reranker = Reranker(scorer, lm, cfg)
    rows = []
    for k in range(1, k_max + 1):
        row = evaluate_k(dataset, reranker, k, lexicon)
        _module_logger.info("k={} full {} dict {} list {} MRR {:.4f}".format(k, row.full, row.dict, row.list, row.mrr))
        rows.append(row)
    settings = dict(fusion=cfg.to_dict(), k_max=k_max, records=len(dataset), lexicon=lexicon is not None)
    return EvalReport(baseline_row(dataset, lexicon), rows, settings)
