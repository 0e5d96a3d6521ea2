"""Per-clip inference latency."""
import logging
import os
import platform
import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import BenchmarkError

logger = logging.getLogger(__name__)

LATENCY_MODES = ('forward', 'pipeline')


@dataclass
class LatencyReport:
    mode: str
    clips: int
    repetitions: int
    warmup: int
    mean_s: float
    p50_s: float
    p95_s: float
    hardware: str

    def as_row(self) -> dict:
        return asdict(self)


def hardware_string() -> str:
    processor = platform.processor() or platform.machine()
    return (
        f"{processor}; {os.cpu_count()} logical CPUs; {platform.system()} {platform.release()}; "
        f"Python {platform.python_version()}; numpy {np.__version__}"
    )


def benchmark_latency(model, clips: Sequence, repetitions: int = 3, warmup: int = 3,
                      load: Optional[Callable] = None, clock: Callable[[], float] = time.perf_counter) -> LatencyReport:
    """Wall-clock seconds per 30-frame clip for batch-size-1 infer-mode passes.

    ``clips`` holds ready ``64×64×30×1`` tensors, or, when ``load`` is given,
    whatever ``load`` turns into one; the load is then timed as well
    (pipeline mode). The first ``warmup`` passes are not recorded.
    """
    if repetitions < 1:
        raise BenchmarkError(f"repetitions must be >= 1, got {repetitions}")
    if len(clips) == 0:
        raise BenchmarkError("no clips to benchmark")

    def run(item):
        clip = load(item) if load is not None else item
        model.predict(np.asarray(clip)[None])

    for i in range(warmup):
        run(clips[i % len(clips)])

    timings = []
    for _ in range(repetitions):
        for item in clips:
            started = clock()
            run(item)
            timings.append(clock() - started)

    timings = np.asarray(timings)
    report = LatencyReport(
        mode='pipeline' if load is not None else 'forward',
        clips=len(clips),
        repetitions=repetitions,
        warmup=warmup,
        mean_s=float(timings.mean()),
        p50_s=float(np.percentile(timings, 50)),
        p95_s=float(np.percentile(timings, 95)),
        hardware=hardware_string(),
    )
    logger.info(f"{report.mode} latency over {timings.size} passes: mean {report.mean_s:.4f}s, p95 {report.p95_s:.4f}s")
    return report
