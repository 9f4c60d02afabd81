import pytest

from stopset.errors import DomainError, MatrixFormatError
from stopset.gf2 import (
    BitMatrix,
    hamming_parity_matrix,
    load_matrix,
    parse_matrix,
    rank_gf2,
    submatrix,
)


def rows_of(matrix):
    return [[matrix.entry(i, j) for j in range(1, matrix.cols + 1)] for i in range(1, matrix.rows + 1)]


def test_parse_small_matrix():
    m = parse_matrix("101\n110")
    assert (m.rows, m.cols) == (2, 3)
    assert rows_of(m) == [[1, 0, 1], [1, 1, 0]]


def test_parse_example1(example1):
    assert (example1.rows, example1.cols) == (3, 7)
    assert rows_of(example1)[2] == [1, 1, 1, 1, 0, 0, 0]


def test_parse_ragged_names_line():
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrix("10\n110")
    assert exc.value.line == 2
    assert "line 2" in str(exc.value)


def test_parse_bad_character():
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrix("101\n1x1\n")
    assert exc.value.line == 2


def test_parse_empty_input():
    with pytest.raises(MatrixFormatError):
        parse_matrix("\n  \n")


def test_parse_tolerates_whitespace():
    m = parse_matrix("  1 0 1\r\n\n110  \n")
    assert rows_of(m) == [[1, 0, 1], [1, 1, 0]]


def test_serialize_round_trip():
    text = "1010101\n1100110\n1111000\n"
    assert parse_matrix(text).serialize() == text
    assert parse_matrix(" 101 \n110").serialize() == "101\n110\n"


def test_load_matrix(example1_file, example1):
    assert load_matrix(example1_file) == example1


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_matrix(tmp_path / "nope.txt")


def test_load_invalid_utf8_names_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"101\n1\xff0\n")
    with pytest.raises(MatrixFormatError) as exc:
        load_matrix(path)
    assert exc.value.line == 2
    assert "UTF-8" in str(exc.value)


def test_load_crlf_file(tmp_path, example1):
    path = tmp_path / "crlf.txt"
    path.write_bytes(example1.serialize().replace("\n", "\r\n").encode())
    assert load_matrix(path) == example1


def test_hamming_m2_columns():
    m = hamming_parity_matrix(2)
    assert rows_of(m) == [[1, 0, 1], [0, 1, 1]]


def test_hamming_m3_is_column_permutation_of_example1(example1):
    h = hamming_parity_matrix(3)
    assert sorted(h.column_patterns()) == sorted(example1.column_patterns())


def test_hamming_column_j_encodes_j():
    h = hamming_parity_matrix(5)
    assert h.column_patterns() == tuple(range(1, 32))


@pytest.mark.parametrize("m", [1, 0, 32])
def test_hamming_out_of_range(m):
    with pytest.raises(DomainError):
        hamming_parity_matrix(m)


@pytest.mark.parametrize("m", range(2, 9))
def test_hamming_structure(m):
    h = hamming_parity_matrix(m)
    cols = h.column_patterns()
    assert h.cols == 2 ** m - 1
    assert all(cols)
    assert len(set(cols)) == len(cols)
    assert h.row_weights() == (2 ** (m - 1),) * m


@pytest.mark.parametrize("m", range(2, 13))
def test_hamming_full_rank(m):
    assert rank_gf2(hamming_parity_matrix(m)) == m


def test_rank_small_cases():
    assert rank_gf2(parse_matrix("100\n010\n001")) == 3
    assert rank_gf2(parse_matrix("00000\n00000")) == 0
    assert rank_gf2(parse_matrix("110\n011\n101")) == 2


def test_submatrix_example1(example1):
    sub = submatrix(example1, {3, 5}, {2, 3})
    assert rows_of(sub) == [[0, 1], [1, 0]]


def test_submatrix_identity(example1):
    assert submatrix(example1, range(1, 8), range(1, 4)) == example1


def test_submatrix_empty_selections(example1):
    assert submatrix(example1, [], [1, 2]).cols == 0
    assert submatrix(example1, [1], []).rows == 0


def test_submatrix_out_of_range(example1):
    with pytest.raises(DomainError):
        submatrix(example1, {8}, {1})
    with pytest.raises(DomainError):
        submatrix(example1, {1}, {4})


def test_bits_beyond_width_rejected():
    with pytest.raises(DomainError):
        BitMatrix(1, 2, (0b100,))


def test_permute_columns(example1):
    perm = [7, 6, 5, 4, 3, 2, 1]
    rev = example1.permute_columns(perm)
    assert rows_of(rev)[0] == [1, 0, 1, 0, 1, 0, 1]
    assert rows_of(rev)[2] == [0, 0, 0, 1, 1, 1, 1]
    with pytest.raises(DomainError):
        example1.permute_columns([1, 1, 2, 3, 4, 5, 6])
