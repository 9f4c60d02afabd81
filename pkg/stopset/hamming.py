"""
Closed forms for the full-rank m x (2^m - 1) Hamming parity-check matrix.

All quantities depend on m and l only, so nothing here touches a matrix
except the ``inclusion-exclusion`` and ``brute`` methods of
``hamming_stopping_enumerator``, which build one to cross-check.
"""
import logging
import math
from collections import namedtuple
from fractions import Fraction
from typing import Dict, Optional

from .combinatorics import BTable, binomial, btable, stirling_second
from .enumerators import Enumerator, brute_force_stopping, theorem1_stopping
from .errors import DomainError, ResourceLimitError, exact_div
from .gf2 import hamming_parity_matrix
from .metrics import timed_enumeration

logger = logging.getLogger("stopset.hamming")

METHODS = ("theorem2", "doublesum", "inclusion-exclusion", "brute")
MAX_BRUTE_M = 5

Sandwich = namedtuple("Sandwich", ["lower", "middle", "upper"])


def _code_length(m: int) -> int:
    if m < 2:
        raise DomainError(f"Hamming parameter m must be >= 2, got {m}")
    return (1 << m) - 1


def _check_size(m: int, l: int) -> int:
    n = _code_length(m)
    if not 0 <= l <= n:
        raise DomainError(f"l must be in 0..{n} for m={m}, got {l}")
    return n


def hamming_Sl_doublesum(m: int, l: int) -> int:
    """
    S_l = sum_t (-1)^t C(m,t) sum_p S(t,p) 2^((m-t)p) C(2^(m-t) - 1, l - p),
    grouping row subsets by size since z_T and Y(T, p) only depend on |T|.
    """
    _check_size(m, l)
    total = 0
    for t in range(m + 1):
        inner = 0
        zeros = (1 << (m - t)) - 1
        for p in range(min(l, t) + 1):
            inner += stirling_second(t, p) * (1 << ((m - t) * p)) * binomial(zeros, l - p)
        term = binomial(m, t) * inner
        total += -term if t % 2 else term
    return total


def _theorem2_numerator(m: int, l: int, table: BTable, full_v_range: bool) -> int:
    total = 0
    for q in range(l + 1):
        v_lo, v_hi = (0, l) if full_v_range else (q, min(2 * q, l))
        for v in range(v_lo, v_hi + 1):
            b = table(q, v)
            if not b:
                continue
            term = binomial(l, v) * b * ((1 << (l - q)) - (l - v)) ** m
            total += -term if v % 2 else term
    return total


def hamming_Sl_theorem2(m: int, l: int, table: Optional[BTable] = None, full_v_range: bool = False) -> int:
    """
    S_l = (1/l!) sum_q sum_{v=q}^{min(2q,l)} (-1)^v C(l,v) b(q,v) (2^(l-q) - (l-v))^m.

    ``full_v_range`` sums v over 0..l instead; the extra terms vanish.
    """
    _check_size(m, l)
    table = table or btable(l)
    if table.qmax < l or table.vmax < l:
        raise ResourceLimitError(f"b table {table.qmax}x{table.vmax} too small for l={l}")
    numerator = _theorem2_numerator(m, l, table, full_v_range)
    return exact_div(numerator, math.factorial(l), f"l! S_l at m={m}, l={l}")


def exponential_form(l: int) -> Dict[int, int]:
    """
    Coefficients c_a with l! S_l = sum_a c_a a^m for every m, keyed by base a
    in descending order. Zero coefficients are dropped.
    """
    if l < 0:
        raise DomainError(f"l must be non-negative, got {l}")
    table = btable(l)
    coeffs: Dict[int, int] = {}
    for q in range(l + 1):
        for v in range(q, min(2 * q, l) + 1):
            b = table(q, v)
            if not b:
                continue
            base = (1 << (l - q)) - (l - v)
            term = binomial(l, v) * b
            coeffs[base] = coeffs.get(base, 0) + (-term if v % 2 else term)
    return {base: c for base, c in sorted(coeffs.items(), reverse=True) if c}


def evaluate_exponential_form(form: Dict[int, int], l: int, m: int) -> int:
    total = sum(c * base ** m for base, c in form.items())
    return exact_div(total, math.factorial(l), f"exponential form at m={m}, l={l}")


def format_exponential_form(form: Dict[int, int], l: int) -> str:
    parts = []
    for base, c in form.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = f"{base}^m" if mag == 1 else f"{mag} * {base}^m"
        parts.append((sign, body))
    if not parts:
        return f"S_{l} = 0"
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return f"S_{l} = ({text}) / {math.factorial(l)}"


def mceliece_S3(m: int) -> int:
    """Number of size-3 stopping sets, (5^m - 3^(m+1) + 2^(m+1)) / 6."""
    _code_length(m)
    return exact_div(5 ** m - 3 ** (m + 1) + 2 ** (m + 1), 6, f"S_3 at m={m}")


def hamming_Al(m: int, l: int) -> int:
    """
    Codewords of weight l:
    A_l = (C(n,l) + (-1)^ceil(l/2) n C((n-1)/2, floor(l/2))) / (n+1).
    """
    n = _check_size(m, l)
    sign = -1 if ((l + 1) // 2) % 2 else 1
    return exact_div(binomial(n, l) + sign * n * binomial((n - 1) // 2, l // 2), n + 1, f"A_{l} at m={m}")


def _stopping_or_zero(m: int, l: int) -> int:
    # no l-subsets exist beyond the code length
    return hamming_Sl_theorem2(m, l) if l <= _code_length(m) else 0


def _weight_or_zero(m: int, l: int) -> int:
    return hamming_Al(m, l) if l <= _code_length(m) else 0


def sandwich_check_S(m: int, l: int) -> Sandwich:
    """
    Union-bound bracket around l! S_l:
    (2^l - l)^m - (l + C(l,2)) 2^((l-1)m) <= l! S_l <= (2^l - l)^m.
    """
    if l < 2 or m < 2:
        raise DomainError("stopping sandwich needs l >= 2 and m >= 2")
    upper = ((1 << l) - l) ** m
    lower = upper - (l + binomial(l, 2)) * (1 << ((l - 1) * m))
    return Sandwich(lower, math.factorial(l) * _stopping_or_zero(m, l), upper)


def sandwich_check_A(m: int, l: int) -> Sandwich:
    """2^((l-1)m) - (l + C(l,2)) 2^((l-2)m) <= l! A_l <= 2^((l-1)m)."""
    if l < 3 or m < 2:
        raise DomainError("weight sandwich needs l >= 3 and m >= 2")
    upper = 1 << ((l - 1) * m)
    lower = upper - (l + binomial(l, 2)) * (1 << ((l - 2) * m))
    return Sandwich(lower, math.factorial(l) * _weight_or_zero(m, l), upper)


def asymptotic_ratio(m: int, l: int) -> Fraction:
    """l! S_l / (2^l - l)^m, which tends to 1 as m grows."""
    if l < 3 or m < 3:
        raise DomainError("asymptotic ratio needs l >= 3 and m >= 3")
    return Fraction(math.factorial(l) * _stopping_or_zero(m, l), ((1 << l) - l) ** m)


def weight_asymptotic_ratio(m: int, l: int) -> Fraction:
    """l! A_l / 2^((l-1)m), which tends to 1 as m grows."""
    if l < 3 or m < 3:
        raise DomainError("asymptotic ratio needs l >= 3 and m >= 3")
    return Fraction(math.factorial(l) * _weight_or_zero(m, l), 1 << ((l - 1) * m))


def hamming_stopping_enumerator(
    m: int, method: str = "theorem2", upto: Optional[int] = None, workers: Optional[int] = None
) -> Enumerator:
    n = _code_length(m)
    upto = n if upto is None else upto
    if not 0 <= upto <= n:
        raise DomainError(f"upto must be in 0..{n}, got {upto}")
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    logger.info("Hamming stopping enumerator m=%d via %s up to l=%d", m, method, upto)
    if method == "theorem2":
        table = btable(upto)
        with timed_enumeration("theorem2"):
            coeffs = tuple(hamming_Sl_theorem2(m, l, table) for l in range(upto + 1))
        return Enumerator(coeffs, n)
    if method == "doublesum":
        with timed_enumeration("doublesum"):
            coeffs = tuple(hamming_Sl_doublesum(m, l) for l in range(upto + 1))
        return Enumerator(coeffs, n)
    if method == "brute" and m > MAX_BRUTE_M:
        raise ResourceLimitError(f"brute force is limited to m <= {MAX_BRUTE_M}; use theorem2")
    matrix = hamming_parity_matrix(m)
    if method == "brute":
        return brute_force_stopping(matrix, workers=workers).truncated(upto)
    return theorem1_stopping(matrix).truncated(upto)


def hamming_weight_enumerator(m: int) -> Enumerator:
    n = _code_length(m)
    return Enumerator(tuple(hamming_Al(m, l) for l in range(n + 1)), n)
