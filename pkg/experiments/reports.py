"""
CSV outputs of evaluation and benchmarking.

* ``confusion.csv``: ``n × n`` integer counts, header ``0..n-1`` (predicted
  class), one row per true class in order.
* ``per_class.csv``: ``class,name,count,correct,accuracy``.
* ``summary.csv``: ``samples,correct,accuracy,n_classes,checkpoint``.
* ``pairs.csv``: ``rank,top_class,top_accuracy,confused_pair,true_class,predicted_class,true_accuracy``.
* ``bench.csv``: ``mode,clips,repetitions,warmup,mean_s,p50_s,p95_s,hardware``.
"""
import itertools
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from .benchmark import LatencyReport
from .classes import class_label
from .metrics import EvaluationResult, confused_pairs, top_recognized

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ['mode', 'clips', 'repetitions', 'warmup', 'mean_s', 'p50_s', 'p95_s', 'hardware']


def write_evaluation(result: EvaluationResult, out_dir, names: Optional[Sequence[str]] = None,
                     checkpoint: Optional[str] = None, k: int = 10) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    confusion = result.confusion
    n = confusion.n_classes

    pd.DataFrame(confusion.counts, columns=[str(c) for c in range(n)]).to_csv(out_dir / 'confusion.csv', index=False)

    pd.DataFrame({
        'class': np.arange(n),
        'name': [class_label(c, names) for c in range(n)],
        'count': confusion.row_sums,
        'correct': np.diag(confusion.counts),
        'accuracy': result.per_class,
    }).to_csv(out_dir / 'per_class.csv', index=False)

    pd.DataFrame([{
        'samples': confusion.total,
        'correct': int(np.trace(confusion.counts)),
        'accuracy': result.accuracy,
        'n_classes': n,
        'checkpoint': checkpoint or '',
    }]).to_csv(out_dir / 'summary.csv', index=False)

    top = top_recognized(confusion, k, names)
    pairs = confused_pairs(confusion, k, names)
    rows = []
    for rank, (best, pair) in enumerate(itertools.zip_longest(top, pairs), start=1):
        rows.append({
            'rank': rank,
            'top_class': best[1] if best else '',
            'top_accuracy': best[2] if best else np.nan,
            'confused_pair': pair.label if pair else '',
            'true_class': pair.true_class if pair else np.nan,
            'predicted_class': pair.predicted_class if pair else np.nan,
            'true_accuracy': pair.accuracy if pair else np.nan,
        })
    pd.DataFrame(rows, columns=['rank', 'top_class', 'top_accuracy', 'confused_pair', 'true_class',
                                'predicted_class', 'true_accuracy']).to_csv(out_dir / 'pairs.csv', index=False)

    if top:
        logger.info(f"Mean accuracy of the top {len(top)} classes: {np.mean([t[2] for t in top]):.4f}")
    if pairs:
        logger.info(f"Mean accuracy of the {len(pairs)} most confused classes: {np.mean([p.accuracy for p in pairs]):.4f}")
    return out_dir


def write_bench(reports: Iterable[LatencyReport], out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / 'bench.csv'
    pd.DataFrame([report.as_row() for report in reports], columns=BENCH_COLUMNS).to_csv(path, index=False)
    return path
