"""
Peeling decoder for the binary erasure channel.

A check row whose restriction to the erased set has weight one determines its
single erased position; the decoder resolves such positions until none is
left. It fails exactly when the erased set contains a nonempty stopping set,
and what remains is the largest stopping set inside the erasures.

Monte Carlo runs draw erasures from numpy's PCG64 generator. The seed feeds a
``SeedSequence`` that is split into one child stream per block of
``MC_BLOCK_TRIALS`` trials, so an estimate depends on (seed, trials, epsilon)
and never on how blocks are spread over workers.
"""
import logging
import math
import os
from dataclasses import dataclass
from enum import Enum
from multiprocessing import Pool
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .bitops import iter_indexes, make_mask, pack_rows, popcount64
from .enumerators import resolve_workers, stopping_mask_table
from .errors import DomainError, ResourceLimitError
from .gf2 import BitMatrix
from .metrics import MC_TRIALS_TOTAL, record_decodes

logger = logging.getLogger("stopset.peeling")

MAX_PROFILE_N = 20
MC_BLOCK_TRIALS = 8192
MAX_SEED = (1 << 64) - 1


class DecodeStatus(str, Enum):
    RECOVERED = "recovered"
    STUCK = "stuck"


@dataclass(frozen=True)
class ErasurePattern:
    erased: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "erased", frozenset(self.erased))
        bad = [j for j in self.erased if j < 1]
        if bad:
            raise DomainError(f"erasure indices must be >= 1, got {sorted(bad)}")

    @property
    def mask(self) -> int:
        return make_mask(self.erased)

    @classmethod
    def from_mask(cls, mask: int) -> "ErasurePattern":
        return cls(frozenset(iter_indexes(mask)))

    @classmethod
    def parse(cls, text: str) -> "ErasurePattern":
        """Comma-separated 1-based indices, e.g. ``"2,3,5"``; empty text erases nothing."""
        items = [item.strip() for item in text.split(",") if item.strip()]
        try:
            indices = [int(item) for item in items]
        except ValueError:
            raise DomainError(f"erasure set must be comma-separated integers, got {text!r}")
        return cls(frozenset(indices))


@dataclass(frozen=True)
class DecodeOutcome:
    status: DecodeStatus
    residual: FrozenSet[int]
    steps: int

    @property
    def recovered(self) -> bool:
        return self.status is DecodeStatus.RECOVERED

    def to_json(self):
        return {"status": self.status.value, "residual": sorted(self.residual), "steps": self.steps}


@dataclass(frozen=True)
class FailureProfile:
    """U[l]: number of size-l erasure patterns on which peeling fails."""
    U: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.U) - 1

    def to_json(self):
        return {"n": self.n, "coeffs": [str(u) for u in self.U]}

    def csv_rows(self):
        return [(l, str(u)) for l, u in enumerate(self.U)]


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    stderr: float
    trials: int
    failures: int
    seed: int


def _peel_mask(row_masks: Sequence[int], erased: int, rng: Optional[np.random.Generator] = None) -> Tuple[int, int]:
    steps = 0
    order = range(len(row_masks))
    while erased:
        if rng is not None:
            order = rng.permutation(len(row_masks)).tolist()
        for i in order:
            hit = row_masks[i] & erased
            if hit and not hit & (hit - 1):
                erased ^= hit
                steps += 1
                break
        else:
            break
    return erased, steps


def peel(
    matrix: BitMatrix,
    erasures: Union[ErasurePattern, Iterable[int]],
    rng: Optional[np.random.Generator] = None,
) -> DecodeOutcome:
    """
    Resolve erased positions one covering row at a time, lowest row first and
    rescanning from row 1 after each step. With ``rng`` the rows are scanned
    in a fresh random order instead.
    """
    if not isinstance(erasures, ErasurePattern):
        erasures = ErasurePattern(frozenset(erasures))
    out_of_range = [j for j in erasures.erased if j > matrix.cols]
    if out_of_range:
        raise DomainError(f"erasure indices {sorted(out_of_range)} exceed n={matrix.cols}")
    residual, steps = _peel_mask(matrix.row_masks, erasures.mask, rng)
    status = DecodeStatus.STUCK if residual else DecodeStatus.RECOVERED
    return DecodeOutcome(status, frozenset(iter_indexes(residual)), steps)


def _profile_cap() -> int:
    raw = os.getenv("STOPSET_MAX_PROFILE_N")
    try:
        cap = int(raw) if raw else MAX_PROFILE_N
    except ValueError:
        logger.warning("Ignoring invalid STOPSET_MAX_PROFILE_N=%r", raw)
        cap = MAX_PROFILE_N
    return max(0, min(cap, MAX_PROFILE_N))


def _check_profile_size(matrix: BitMatrix):
    cap = _profile_cap()
    if matrix.cols > cap:
        raise ResourceLimitError(
            f"exhaustive failure profile visits 2^n patterns and is limited to n <= {cap} (got n={matrix.cols}); "
            "use monte_carlo_failure instead"
        )


def exhaustive_failure_profile(matrix: BitMatrix) -> FailureProfile:
    _check_profile_size(matrix)
    n = matrix.cols
    logger.info("Exhaustive peeling over 2^%d erasure patterns", n)
    counts = [0] * (n + 1)
    rows = matrix.row_masks
    for mask in range(1 << n):
        residual, _ = _peel_mask(rows, mask)
        if residual:
            counts[mask.bit_count()] += 1
    stuck = sum(counts)
    record_decodes((1 << n) - stuck, stuck)
    return FailureProfile(tuple(counts))


def stopping_closure_mask(matrix: BitMatrix) -> np.ndarray:
    """
    Boolean array over column masks: True where the mask contains a nonempty
    stopping set. Built from the stopping predicate alone, by closing the
    stopping family upward one bit at a time.
    """
    _check_profile_size(matrix)
    n = matrix.cols
    contains = stopping_mask_table(matrix).copy()
    contains[0] = False
    for i in range(n):
        view = contains.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return contains


def stopping_closure_profile(matrix: BitMatrix) -> FailureProfile:
    contains = stopping_closure_mask(matrix)
    n = matrix.cols
    sizes = popcount64(np.arange(1 << n, dtype=np.uint64)).astype(np.intp)
    counts = np.bincount(sizes[contains], minlength=n + 1)
    return FailureProfile(tuple(int(c) for c in counts))


def _check_epsilon(epsilon: float):
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"erasure probability must be in [0, 1], got {epsilon}")


def exact_failure_probability(profile: FailureProfile, epsilon: float) -> float:
    """sum_l U_l eps^l (1 - eps)^(n - l); counting is exact, only this sum is floating point."""
    _check_epsilon(epsilon)
    n = profile.n
    return math.fsum(float(u) * epsilon ** l * (1.0 - epsilon) ** (n - l) for l, u in enumerate(profile.U) if u)


def _mc_block(task) -> int:
    row_masks, n, epsilon, size, seed_seq = task
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    draws = rng.random((size, n)) < epsilon
    failures = 0
    for mask in pack_rows(draws):
        if mask and _peel_mask(row_masks, mask)[0]:
            failures += 1
    return failures


def monte_carlo_failure(
    matrix: BitMatrix, epsilon: float, trials: int, seed: int, workers: Optional[int] = None
) -> MonteCarloResult:
    _check_epsilon(epsilon)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed <= MAX_SEED:
        raise DomainError(f"seed must be an unsigned 64-bit value, got {seed}")
    workers = resolve_workers(workers)
    blocks = -(-trials // MC_BLOCK_TRIALS)
    children = np.random.SeedSequence(seed).spawn(blocks)
    tasks = []
    for k, child in enumerate(children):
        size = min(MC_BLOCK_TRIALS, trials - k * MC_BLOCK_TRIALS)
        tasks.append((tuple(matrix.row_masks), matrix.cols, epsilon, size, child))
    logger.info("Monte Carlo: %d trials in %d blocks, eps=%g, seed=%d, workers=%d",
                trials, blocks, epsilon, seed, workers)
    if workers == 1 or blocks == 1:
        per_block = [_mc_block(task) for task in tasks]
    else:
        with Pool(processes=min(workers, blocks)) as pool:
            per_block = pool.map(_mc_block, tasks)
    failures = sum(per_block)
    MC_TRIALS_TOTAL.inc(trials)
    record_decodes(trials - failures, failures)
    estimate = failures / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return MonteCarloResult(estimate, stderr, trials, failures, seed)
