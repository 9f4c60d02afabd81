import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Tuple, Union

from .bitops import iter_indexes
from .errors import DomainError, MatrixFormatError

logger = logging.getLogger("stopset.gf2")

MAX_PARSE_COLS = 1 << 20
MIN_HAMMING_M = 2
MAX_HAMMING_M = 31


@dataclass(frozen=True)
class BitMatrix:
    """
    Binary r x n matrix with bit-packed rows.

    Bit ``j - 1`` of ``row_masks[i - 1]`` is the entry h_{i,j}; public indices
    are 1-based. Instances are immutable and can be shared across workers.
    """
    rows: int
    cols: int
    row_masks: Tuple[int, ...]

    def __post_init__(self):
        if self.rows != len(self.row_masks):
            raise DomainError(f"expected {self.rows} row masks, got {len(self.row_masks)}")
        if self.rows < 0 or self.cols < 0:
            raise DomainError("matrix dimensions must be non-negative")
        limit = 1 << self.cols
        for i, mask in enumerate(self.row_masks, start=1):
            if mask < 0 or mask >= limit:
                raise DomainError(f"row {i} has bits beyond column {self.cols}")

    def entry(self, i: int, j: int) -> int:
        self._check_row(i)
        self._check_col(j)
        return (self.row_masks[i - 1] >> (j - 1)) & 1

    def column_patterns(self, row_set: Union[Sequence[int], None] = None) -> Tuple[int, ...]:
        """
        Column j restricted to ``row_set`` (ascending, default all rows) as an
        int whose bit k is the entry in the k-th selected row.
        """
        rows = sorted(row_set) if row_set is not None else range(1, self.rows + 1)
        for i in rows:
            self._check_row(i)
        patterns = [0] * self.cols
        for k, i in enumerate(rows):
            for j in iter_indexes(self.row_masks[i - 1]):
                patterns[j - 1] |= 1 << k
        return tuple(patterns)

    def row_weights(self) -> Tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self.row_masks)

    def permute_columns(self, perm: Sequence[int]) -> "BitMatrix":
        """New matrix whose column ``k`` is column ``perm[k - 1]`` of this one."""
        if sorted(perm) != list(range(1, self.cols + 1)):
            raise DomainError("perm must be a permutation of 1..n")
        masks = []
        for mask in self.row_masks:
            out = 0
            for k, j in enumerate(perm):
                if (mask >> (j - 1)) & 1:
                    out |= 1 << k
            masks.append(out)
        return BitMatrix(self.rows, self.cols, tuple(masks))

    def serialize(self) -> str:
        lines = []
        for mask in self.row_masks:
            lines.append("".join("1" if (mask >> j) & 1 else "0" for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    def _check_row(self, i: int):
        if not 1 <= i <= self.rows:
            raise DomainError(f"row index {i} outside 1..{self.rows}")

    def _check_col(self, j: int):
        if not 1 <= j <= self.cols:
            raise DomainError(f"column index {j} outside 1..{self.cols}")


def parse_matrix(text: str) -> BitMatrix:
    """
    Read one row per line of '0'/'1' characters. Blank lines are skipped and
    whitespace inside a line is ignored. Errors name the 1-based line.
    """
    masks = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = "".join(raw.split())
        if not line:
            continue
        bad = next((ch for ch in line if ch not in "01"), None)
        if bad is not None:
            raise MatrixFormatError(f"unexpected character {bad!r}", line=lineno)
        if width is None:
            width = len(line)
            if width > MAX_PARSE_COLS:
                raise MatrixFormatError(f"{width} columns exceeds the limit of {MAX_PARSE_COLS}", line=lineno)
        elif len(line) != width:
            raise MatrixFormatError(f"ragged row: {len(line)} columns, expected {width}", line=lineno)
        # character j is column j + 1, i.e. bit j
        masks.append(int(line[::-1], 2))
    if width is None:
        raise MatrixFormatError("no matrix rows found")
    return BitMatrix(len(masks), width, tuple(masks))


def load_matrix(path: Union[str, Path]) -> BitMatrix:
    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        lineno = data.count(b"\n", 0, e.start) + 1
        raise MatrixFormatError(f"{path}: not valid UTF-8", line=lineno) from e
    matrix = parse_matrix(text)
    logger.info("Loaded %dx%d matrix from %s", matrix.rows, matrix.cols, path)
    return matrix


def hamming_parity_matrix(m: int) -> BitMatrix:
    """
    Full-rank m x (2^m - 1) Hamming parity-check matrix. Column j encodes the
    integer j, row i carrying the bit of weight 2^(i-1).
    """
    if not MIN_HAMMING_M <= m <= MAX_HAMMING_M:
        raise DomainError(f"m must be in {MIN_HAMMING_M}..{MAX_HAMMING_M}, got {m}")
    length = 1 << m
    masks = []
    for i in range(m):
        half = 1 << i
        # one period over column values c: c has bit i set for c mod 2^(i+1) >= 2^i
        block = ((1 << half) - 1) << half
        span = half << 1
        while span < length:
            block |= block << span
            span <<= 1
        # drop the value c = 0, so bit c - 1 is column c
        masks.append(block >> 1)
    return BitMatrix(m, length - 1, tuple(masks))


def rank_gf2(matrix: BitMatrix) -> int:
    basis = {}
    for row in matrix.row_masks:
        x = row
        while x:
            pivot = x.bit_length() - 1
            if pivot in basis:
                x ^= basis[pivot]
            else:
                basis[pivot] = x
                break
    return len(basis)


def submatrix(matrix: BitMatrix, col_set: Iterable[int], row_set: Iterable[int]) -> BitMatrix:
    cols = sorted(set(col_set))
    rows = sorted(set(row_set))
    for j in cols:
        matrix._check_col(j)
    for i in rows:
        matrix._check_row(i)
    masks = []
    for i in rows:
        src = matrix.row_masks[i - 1]
        out = 0
        for k, j in enumerate(cols):
            if (src >> (j - 1)) & 1:
                out |= 1 << k
        masks.append(out)
    return BitMatrix(len(rows), len(cols), tuple(masks))
