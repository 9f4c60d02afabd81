"""
Stopping-set and weight enumerators of arbitrary parity-check matrices.

Two independent routes are provided: brute force over every column subset
(vectorised popcount over mask ranges, optionally spread over worker
processes) and inclusion-exclusion over row subsets, which needs only the
zero-column counts z_T and the cover counts Y(T, p) of each row subset T.
"""
import logging
import math
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bitops import is_single_bit, popcount64
from .errors import DomainError, ResourceLimitError, exact_div
from .gf2 import BitMatrix
from .metrics import timed_enumeration

logger = logging.getLogger("stopset.enumerators")

MAX_BRUTE_N = 31
MAX_INCLUSION_EXCLUSION_ROWS = 20
CHUNK_BITS = 20
BRUTE_WARN_N = 24
INCLUSION_EXCLUSION_WARN_ROWS = 14

STOPPING = "stopping"
WEIGHT = "weight"


@dataclass(frozen=True)
class Enumerator:
    """
    Polynomial sum_l coeffs[l] x^l with exact integer coefficients.

    ``n`` is the code length; it can exceed ``len(coeffs) - 1`` when only a
    prefix of the coefficients was computed.
    """
    coeffs: Tuple[int, ...]
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.n is None:
            object.__setattr__(self, "n", len(self.coeffs) - 1)
        if len(self.coeffs) > self.n + 1:
            raise DomainError(f"{len(self.coeffs)} coefficients exceed degree bound n={self.n}")

    def __getitem__(self, l: int) -> int:
        return self.coeffs[l]

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def minimum_size(self) -> Optional[int]:
        """Smallest l >= 1 with a nonzero coefficient (s or d), None if there is none."""
        return next((l for l, c in enumerate(self.coeffs) if l >= 1 and c), None)

    def total(self) -> int:
        return sum(self.coeffs)

    def evaluate(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def dominates(self, other: "Enumerator") -> bool:
        return all(a >= b for a, b in zip(self.coeffs, other.coeffs))

    def truncated(self, upto: int) -> "Enumerator":
        return Enumerator(self.coeffs[: upto + 1], self.n)

    def to_json(self) -> Dict[str, object]:
        return {"n": self.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> "Enumerator":
        return cls(tuple(int(c) for c in data["coeffs"]), int(data["n"]))

    def csv_rows(self) -> List[Tuple[int, str]]:
        return [(l, str(c)) for l, c in enumerate(self.coeffs)]

    def polynomial(self) -> str:
        terms = []
        for l, c in enumerate(self.coeffs):
            if not c:
                continue
            if l == 0:
                terms.append(str(c))
            else:
                power = "x" if l == 1 else f"x^{l}"
                terms.append(power if c == 1 else f"{c} {power}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class CoverStats:
    T: Tuple[int, ...]
    z: int
    Y: Tuple[int, ...] = field(default_factory=tuple)


def _env_int(name: str, default: int, ceiling: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring invalid %s=%r", name, raw)
        return default
    return max(0, min(value, ceiling))


def brute_force_cap() -> int:
    return _env_int("STOPSET_MAX_BRUTE_N", MAX_BRUTE_N, MAX_BRUTE_N)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = _env_int("STOPSET_WORKERS", os.cpu_count() or 1, 1 << 10)
    return max(1, workers)


def is_stopping_set(matrix: BitMatrix, mask: int) -> bool:
    """No row meets the column set ``mask`` in exactly one position."""
    return not any(is_single_bit(row & mask) for row in matrix.row_masks)


def is_codeword_support(matrix: BitMatrix, mask: int) -> bool:
    return all((row & mask).bit_count() % 2 == 0 for row in matrix.row_masks)


def _keep(masks: np.ndarray, row_masks: Sequence[int], kind: str) -> np.ndarray:
    keep = np.ones(masks.shape, dtype=bool)
    for row in row_masks:
        weights = popcount64(masks & np.uint64(row))
        if kind == STOPPING:
            keep &= weights != 1
        else:
            keep &= (weights & np.uint64(1)) == 0
    return keep


def _count_range(task) -> np.ndarray:
    row_masks, n, start, stop, kind = task
    counts = np.zeros(n + 1, dtype=np.int64)
    step = 1 << CHUNK_BITS
    for lo in range(start, stop, step):
        masks = np.arange(lo, min(lo + step, stop), dtype=np.uint64)
        sizes = popcount64(masks[_keep(masks, row_masks, kind)]).astype(np.intp)
        counts += np.bincount(sizes, minlength=n + 1)
    logger.debug("counted masks [%d, %d)", start, stop)
    return counts


def _split(total: int, parts: int) -> List[Tuple[int, int]]:
    # contiguous ranges aligned to whole chunks
    chunk = 1 << CHUNK_BITS
    chunks = max(1, -(-total // chunk))
    parts = max(1, min(parts, chunks))
    per, extra = divmod(chunks, parts)
    ranges, lo = [], 0
    for k in range(parts):
        hi = min(total, lo + (per + (1 if k < extra else 0)) * chunk)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def _brute_force(matrix: BitMatrix, kind: str, workers: Optional[int]) -> Enumerator:
    n = matrix.cols
    cap = brute_force_cap()
    if n > cap:
        raise ResourceLimitError(
            f"brute force is limited to n <= {cap} columns (got n={n}); "
            "use inclusion-exclusion over row subsets or the Hamming closed forms"
        )
    workers = resolve_workers(workers)
    if n > BRUTE_WARN_N:
        logger.warning("Brute force over 2^%d subsets with %d workers; this may take minutes", n, workers)
    ranges = _split(1 << n, workers * 4)
    tasks = [(tuple(matrix.row_masks), n, lo, hi, kind) for lo, hi in ranges]
    logger.info("Brute-force %s enumeration: n=%d, %d ranges, %d workers", kind, n, len(tasks), workers)
    with timed_enumeration(f"brute-{kind}"):
        if workers == 1 or len(tasks) == 1:
            partials = [_count_range(task) for task in tasks]
        else:
            with Pool(processes=min(workers, len(tasks))) as pool:
                partials = pool.map(_count_range, tasks)
    coeffs = [0] * (n + 1)
    for part in partials:
        for l, c in enumerate(part.tolist()):
            coeffs[l] += c
    return Enumerator(tuple(coeffs), n)


def brute_force_stopping(matrix: BitMatrix, workers: Optional[int] = None) -> Enumerator:
    return _brute_force(matrix, STOPPING, workers)


def brute_force_weight(matrix: BitMatrix, workers: Optional[int] = None) -> Enumerator:
    return _brute_force(matrix, WEIGHT, workers)


def stopping_mask_table(matrix: BitMatrix) -> np.ndarray:
    """Boolean array indexed by column mask: True where the mask is a stopping set."""
    n = matrix.cols
    if n > CHUNK_BITS:
        raise ResourceLimitError(f"stopping table needs n <= {CHUNK_BITS}, got {n}")
    masks = np.arange(1 << n, dtype=np.uint64)
    return _keep(masks, matrix.row_masks, STOPPING)


def _validate_rows(matrix: BitMatrix, row_set: Iterable[int]) -> Tuple[int, ...]:
    rows = tuple(sorted(set(row_set)))
    for i in rows:
        if not 1 <= i <= matrix.rows:
            raise DomainError(f"row index {i} outside 1..{matrix.rows}")
    return rows


def cover_stats(matrix: BitMatrix, row_set: Iterable[int], p_max: int) -> CoverStats:
    """
    z_T and Y(T, p) for p = 0..p_max.

    Y counts p-subsets of columns whose restrictions to T are nonzero,
    pairwise disjoint and together cover T. Columns are grouped by restricted
    pattern; a DP over the covered part of T counts ordered selections, and
    each unordered selection is counted p! times since its patterns are
    pairwise distinct.
    """
    rows = _validate_rows(matrix, row_set)
    if not 0 <= p_max <= matrix.cols:
        raise DomainError(f"p_max must be in 0..{matrix.cols}, got {p_max}")
    patterns = matrix.column_patterns(rows)
    z = sum(1 for pat in patterns if pat == 0)
    multiplicity = Counter(pat for pat in patterns if pat)
    t = len(rows)
    full = (1 << t) - 1
    Y = [0] * (p_max + 1)
    if t == 0:
        Y[0] = 1
        return CoverStats(rows, z, tuple(Y))
    layer = {0: 1}
    for k in range(1, min(p_max, t) + 1):
        nxt = defaultdict(int)
        for used, ways in layer.items():
            if used == full:
                continue
            for pat, mult in multiplicity.items():
                if not pat & used:
                    nxt[used | pat] += ways * mult
        layer = nxt
        Y[k] = exact_div(layer.get(full, 0), math.factorial(k), f"Y(T,{k})")
    return CoverStats(rows, z, tuple(Y))


def theorem1_stopping(matrix: BitMatrix) -> Enumerator:
    """
    S_l = sum_T (-1)^|T| sum_p Y(T, p) C(z_T, l - p), over all row subsets T.
    """
    r, n = matrix.rows, matrix.cols
    if r > MAX_INCLUSION_EXCLUSION_ROWS:
        raise ResourceLimitError(
            f"inclusion-exclusion visits 2^r row subsets and is limited to "
            f"r <= {MAX_INCLUSION_EXCLUSION_ROWS} (got r={r})"
        )
    if r > INCLUSION_EXCLUSION_WARN_ROWS:
        logger.warning("Inclusion-exclusion over 2^%d row subsets may be slow", r)
    logger.info("Inclusion-exclusion enumeration: r=%d, n=%d", r, n)
    coeffs = [0] * (n + 1)
    with timed_enumeration("inclusion-exclusion"):
        for subset in range(1 << r):
            rows = [i + 1 for i in range(r) if (subset >> i) & 1]
            stats = cover_stats(matrix, rows, min(len(rows), n))
            zeros = [math.comb(stats.z, j) for j in range(n + 1)]
            sign = -1 if len(rows) % 2 else 1
            for l in range(n + 1):
                acc = 0
                for p, y in enumerate(stats.Y):
                    if p > l:
                        break
                    if y:
                        acc += y * zeros[l - p]
                coeffs[l] += sign * acc
    return Enumerator(tuple(coeffs), n)
