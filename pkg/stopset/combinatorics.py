"""
Exact integer combinatorics: binomials, Stirling numbers of both kinds and
the b(q, v) coefficients of the Hamming stopping-set closed form.

Everything here is exact. Rationals use ``fractions.Fraction``; nothing is
ever rounded.
"""
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from .errors import DomainError, InexactDivisionError, ResourceLimitError, exact_div

logger = logging.getLogger("stopset.combinatorics")

DEFAULT_STIRLING_CAPACITY = 128


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, zero outside 0 <= k <= n."""
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(x: int, n: int) -> int:
    """x (x-1) ... (x-n+1), i.e. n! C(x, n) for any integer x."""
    out = 1
    for i in range(n):
        out *= x - i
    return out


class StirlingTables:
    """
    Signed Stirling numbers of the first kind ``s(n, k)`` and Stirling numbers
    of the second kind ``S(n, k)`` for 0 <= n, k <= max_n, built bottom-up:

        s(n+1, k) = s(n, k-1) - n s(n, k)
        S(n+1, k) = k S(n, k) + S(n, k-1)

    Read-only after construction.
    """

    def __init__(self, max_n: int):
        if max_n < 0:
            raise DomainError("max_n must be non-negative")
        self.max_n = max_n
        width = max_n + 1
        s: List[List[int]] = [[0] * width for _ in range(width)]
        big_s: List[List[int]] = [[0] * width for _ in range(width)]
        s[0][0] = 1
        big_s[0][0] = 1
        for n in range(max_n):
            for k in range(1, n + 2):
                s[n + 1][k] = s[n][k - 1] - n * s[n][k]
                big_s[n + 1][k] = k * big_s[n][k] + big_s[n][k - 1]
        self._s = tuple(tuple(row) for row in s)
        self._big_s = tuple(tuple(row) for row in big_s)

    def first(self, n: int, k: int) -> int:
        self._check(n)
        if k < 0 or k > n:
            return 0
        return self._s[n][k]

    def second(self, n: int, k: int) -> int:
        self._check(n)
        if k < 0 or k > n:
            return 0
        return self._big_s[n][k]

    def _check(self, n: int):
        if n < 0:
            raise DomainError(f"Stirling index must be non-negative, got {n}")
        if n > self.max_n:
            raise ResourceLimitError(
                f"Stirling table capacity {self.max_n} exceeded by n={n}; "
                "raise STOPSET_STIRLING_CAPACITY or pass larger tables"
            )


def _configured_capacity() -> int:
    raw = os.getenv("STOPSET_STIRLING_CAPACITY", str(DEFAULT_STIRLING_CAPACITY))
    try:
        return max(0, int(raw))
    except ValueError:
        logger.warning("Ignoring invalid STOPSET_STIRLING_CAPACITY=%r", raw)
        return DEFAULT_STIRLING_CAPACITY


@lru_cache(maxsize=8)
def stirling_tables(max_n: int) -> StirlingTables:
    logger.debug("Building Stirling tables up to n=%d", max_n)
    return StirlingTables(max_n)


def default_tables() -> StirlingTables:
    return stirling_tables(_configured_capacity())


def stirling_first(n: int, k: int, tables: StirlingTables = None) -> int:
    tables = tables or default_tables()
    return tables.first(n, k)


def stirling_second(n: int, k: int) -> int:
    """S(n, k) from the explicit alternating sum (1/k!) sum_i (-1)^i C(k, i) (k-i)^n."""
    if n < 0 or k < 0:
        raise DomainError("Stirling indices must be non-negative")
    if k > n:
        return 0
    if n == 0:
        return 1
    total = 0
    for i in range(k + 1):
        term = binomial(k, i) * (k - i) ** n
        total += -term if i % 2 else term
    return exact_div(total, math.factorial(k), f"S({n},{k})")


def b_definition(q: int, v: int, tables: StirlingTables = None) -> int:
    """b(q, v) = sum_{p=0}^{v} (-1)^p C(v, p) s(p+1, p-q+1)."""
    if q < 0 or v < 0:
        raise DomainError("b(q, v) needs non-negative arguments")
    tables = tables or default_tables()
    if v + 1 > tables.max_n:
        tables = stirling_tables(v + 1)
    total = 0
    for p in range(v + 1):
        term = binomial(v, p) * tables.first(p + 1, p - q + 1)
        total += -term if p % 2 else term
    return total


@lru_cache(maxsize=None)
def b_recursive(q: int, v: int) -> int:
    """
    b(q, v) from the boundary values b = 0 for q > v or q = 0 < v, b(q, q) = q!,
    and b(q, v) = v b(q-1, v-1) - (v-1) b(q-1, v-2) for q >= 1, v >= 2.
    """
    if q < 0 or v < 0:
        raise DomainError("b(q, v) needs non-negative arguments")
    if q > v or (q == 0 and v > 0):
        return 0
    if q == v:
        return math.factorial(q)
    # here 1 <= q < v, hence v >= 2
    return v * b_recursive(q - 1, v - 1) - (v - 1) * b_recursive(q - 1, v - 2)


@lru_cache(maxsize=None)
def _gap_two_sum(start: int, count: int, ceiling: int) -> Fraction:
    # sum of prod 1/k_i over start <_2 k_1 <_2 ... <_2 k_count <= ceiling
    if count == 0:
        return Fraction(1)
    total = Fraction(0)
    for k in range(start + 2, ceiling - 2 * (count - 1) + 1):
        total += _gap_two_sum(k, count - 1, ceiling) / k
    return total


def b_explicit(q: int, v: int) -> int:
    """
    b(q, v) = (-1)^(v-q) v! sum prod_{i=1}^{v-q} 1/k_i over the chains
    0 = k_0 <_2 k_1 <_2 ... <_2 k_{v-q+1} = v + 2, where a <_2 b means b - a >= 2.
    """
    if q < 0 or v < 0:
        raise DomainError("b(q, v) needs non-negative arguments")
    if q > v:
        return 0
    # the last gap k_{v-q+1} - k_{v-q} >= 2 means k_{v-q} <= v
    value = _gap_two_sum(0, v - q, v) * math.factorial(v)
    if value.denominator != 1:
        raise InexactDivisionError(f"b_explicit({q},{v}) produced non-integer {value}")
    out = int(value)
    return -out if (v - q) % 2 else out


@dataclass(frozen=True)
class BTable:
    """b(q, v) for 0 <= q <= qmax, 0 <= v <= vmax."""
    qmax: int
    vmax: int
    values: Tuple[Tuple[int, ...], ...]

    def __call__(self, q: int, v: int) -> int:
        if 0 <= q <= self.qmax and 0 <= v <= self.vmax:
            return self.values[q][v]
        raise ResourceLimitError(f"b({q},{v}) outside table {self.qmax}x{self.vmax}")


B_METHODS = {
    "recursion": b_recursive,
    "definition": b_definition,
    "explicit": b_explicit,
}


def build_btable(qmax: int, vmax: int = None, method: str = "recursion") -> BTable:
    vmax = qmax if vmax is None else vmax
    if qmax < 0 or vmax < 0:
        raise DomainError("table bounds must be non-negative")
    try:
        fn = B_METHODS[method]
    except KeyError:
        raise DomainError(f"unknown b method {method!r}; expected one of {sorted(B_METHODS)}")
    values = tuple(tuple(fn(q, v) for v in range(vmax + 1)) for q in range(qmax + 1))
    return BTable(qmax, vmax, values)


@lru_cache(maxsize=16)
def btable(capacity: int) -> BTable:
    """Square recursion-built table shared by the closed-form evaluators."""
    return build_btable(capacity, capacity)
