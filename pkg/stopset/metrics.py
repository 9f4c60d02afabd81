import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Union

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile

logger = logging.getLogger("stopset.metrics")

ENUMERATIONS_TOTAL = Counter(
    "stopset_enumerations_total", "Completed enumerator computations", ["method"]
)
ENUMERATION_SECONDS = Histogram(
    "stopset_enumeration_seconds", "Wall time of enumerator computations", ["method"]
)
DECODES_TOTAL = Counter("stopset_decodes_total", "Peeling decoder outcomes", ["status"])
MC_TRIALS_TOTAL = Counter("stopset_mc_trials_total", "Monte Carlo erasure trials run")


@contextmanager
def timed_enumeration(method: str):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    ENUMERATION_SECONDS.labels(method).observe(elapsed)
    ENUMERATIONS_TOTAL.labels(method).inc()
    logger.info("%s enumeration finished in %.3fs", method, elapsed)


def record_decodes(recovered: int, stuck: int):
    if recovered:
        DECODES_TOTAL.labels("recovered").inc(recovered)
    if stuck:
        DECODES_TOTAL.labels("stuck").inc(stuck)


def write_metrics(path: Union[str, Path]):
    write_to_textfile(str(path), REGISTRY)
    logger.info("Wrote metrics to %s", path)
