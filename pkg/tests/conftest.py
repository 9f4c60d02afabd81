# tests/conftest.py
import numpy as np
import pytest

from stopset.bitops import pack_rows
from stopset.gf2 import BitMatrix, hamming_parity_matrix, parse_matrix

EXAMPLE1 = "1010101\n1100110\n1111000\n"

GOLDEN_STOPPING = {
    3: [1, 0, 0, 10, 23, 21, 7, 1],
    4: [1, 0, 0, 69, 526, 1979, 4333, 6211, 6403, 5005, 3003, 1365, 455, 105, 15, 1],
    5: [1, 0, 0, 410, 8215, 83590, 519481, 2243175, 7378485, 19645915, 43951765,
        84432075, 141011325, 206216675, 265174125, 300538995, 300540115, 265182525,
        206253075, 141120525, 84672315, 44352165, 20160075, 7888725, 2629575, 736281,
        169911, 31465, 4495, 465, 31, 1],
}


def matrix_from_array(bits) -> BitMatrix:
    bits = np.asarray(bits, dtype=bool)
    return BitMatrix(bits.shape[0], bits.shape[1], tuple(pack_rows(bits)))


@pytest.fixture
def example1():
    return parse_matrix(EXAMPLE1)


@pytest.fixture
def example1_file(tmp_path):
    path = tmp_path / "hamming7.txt"
    path.write_text(EXAMPLE1)
    return path


@pytest.fixture(scope="session")
def golden():
    return GOLDEN_STOPPING


@pytest.fixture(scope="session")
def hamming():
    cache = {}

    def build(m):
        if m not in cache:
            cache[m] = hamming_parity_matrix(m)
        return cache[m]
    return build


@pytest.fixture
def rng():
    return np.random.default_rng(20050607)


def random_matrices(rng, count, max_rows, max_cols):
    out = []
    for _ in range(count):
        r = int(rng.integers(1, max_rows + 1))
        n = int(rng.integers(1, max_cols + 1))
        out.append(matrix_from_array(rng.integers(0, 2, size=(r, n))))
    return out


def structured_matrices():
    return [
        parse_matrix("111"),                 # single all-ones row
        parse_matrix("1010\n0110\n1100"),     # column 4 is all zero
        parse_matrix("1100\n1100\n0111"),     # duplicate rows
        parse_matrix("11011\n11101\n00111"),  # columns 1 and 2 equal
        parse_matrix("0000\n0000"),           # zero matrix
        parse_matrix("1"),
        parse_matrix(EXAMPLE1),
    ]


@pytest.fixture
def run_cli(capsys):
    from stopset import cli

    def run(*argv):
        code = cli.main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return run
