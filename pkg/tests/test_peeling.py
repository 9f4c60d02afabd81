import numpy as np
import pytest

from stopset import peeling
from stopset.bitops import iter_indexes, make_mask
from stopset.combinatorics import binomial
from stopset.enumerators import brute_force_stopping, is_stopping_set
from stopset.errors import DomainError, ResourceLimitError
from stopset.gf2 import parse_matrix
from stopset.peeling import (
    DecodeStatus,
    ErasurePattern,
    exact_failure_probability,
    exhaustive_failure_profile,
    monte_carlo_failure,
    peel,
    stopping_closure_mask,
    stopping_closure_profile,
)

from conftest import random_matrices, structured_matrices


def test_example1_stuck_on_stopping_set(example1):
    outcome = peel(example1, ErasurePattern.parse("2,3,5"))
    assert outcome.status is DecodeStatus.STUCK
    assert outcome.residual == frozenset({2, 3, 5})
    assert outcome.steps == 0
    assert outcome.to_json() == {"status": "stuck", "residual": [2, 3, 5], "steps": 0}


def test_example1_single_erasure_recovered(example1):
    outcome = peel(example1, {4})
    assert outcome.recovered
    assert outcome.residual == frozenset()
    assert outcome.steps == 1


def test_empty_erasure(example1):
    outcome = peel(example1, ErasurePattern.parse(""))
    assert outcome.recovered
    assert outcome.steps == 0


def test_partial_recovery():
    outcome = peel(parse_matrix("110\n001"), {1, 2, 3})
    assert outcome.status is DecodeStatus.STUCK
    assert outcome.residual == frozenset({1, 2})
    assert outcome.steps == 1


def test_erasure_pattern_parse_and_mask():
    pattern = ErasurePattern.parse(" 1, 3 ,5 ")
    assert pattern.erased == frozenset({1, 3, 5})
    assert pattern.mask == 0b10101
    assert ErasurePattern.from_mask(0b10101) == pattern


@pytest.mark.parametrize("text", ["1,a", "0", "-2,3"])
def test_erasure_pattern_rejects(text):
    with pytest.raises(DomainError):
        ErasurePattern.parse(text)


def test_erasure_beyond_n(example1):
    with pytest.raises(DomainError):
        peel(example1, {8})


def test_steps_and_residual_invariants(rng):
    for matrix in random_matrices(rng, 100, 6, 12):
        erased = {j for j in range(1, matrix.cols + 1) if rng.random() < 0.5}
        outcome = peel(matrix, erased)
        assert outcome.residual <= erased
        assert outcome.steps == len(erased) - len(outcome.residual)
        assert outcome.recovered == (not outcome.residual)


def test_residual_is_stopping_set(rng):
    for matrix in random_matrices(rng, 200, 6, 12) + structured_matrices():
        mask = int(rng.integers(0, 1 << matrix.cols))
        outcome = peel(matrix, ErasurePattern.from_mask(mask))
        if not outcome.recovered:
            assert is_stopping_set(matrix, make_mask(outcome.residual))


def test_order_independence(rng):
    for matrix in random_matrices(rng, 1000, 6, 12):
        mask = int(rng.integers(0, 1 << matrix.cols))
        fixed = peel(matrix, ErasurePattern.from_mask(mask))
        shuffled = peel(matrix, ErasurePattern.from_mask(mask), rng=rng)
        assert shuffled.status == fixed.status
        assert shuffled.residual == fixed.residual


@pytest.mark.parametrize("m", [3, 4])
def test_fails_exactly_on_sets_containing_a_stopping_set(hamming, m):
    h = hamming(m)
    n = h.cols
    contains = stopping_closure_mask(h)
    for mask in range(1 << n):
        stuck = not peel(h, ErasurePattern.from_mask(mask)).recovered
        assert stuck == bool(contains[mask]), sorted(iter_indexes(mask))


def test_closure_profile_matches_exhaustive(rng):
    for matrix in random_matrices(rng, 30, 5, 10) + structured_matrices():
        assert stopping_closure_profile(matrix) == exhaustive_failure_profile(matrix)


def test_profile_hamming3(hamming):
    profile = exhaustive_failure_profile(hamming(3))
    assert profile.n == 7
    assert profile.U[0] == 0
    assert profile.U[3] == 10
    for l in range(5, 8):
        assert profile.U[l] == binomial(7, l)


@pytest.mark.parametrize("m", [3, 4])
def test_profile_tail_and_bounds(hamming, m):
    h = hamming(m)
    n = h.cols
    profile = exhaustive_failure_profile(h)
    stopping = brute_force_stopping(h, workers=1)
    for l in range(1, n + 1):
        assert stopping[l] <= profile.U[l] <= binomial(n, l)
    for l in range(2 ** (m - 1) + 1, n + 1):
        assert profile.U[l] == binomial(n, l)


def test_profile_single_row():
    assert exhaustive_failure_profile(parse_matrix("111")).U == (0, 0, 3, 1)


def test_profile_size_limit(monkeypatch, example1):
    monkeypatch.setenv("STOPSET_MAX_PROFILE_N", "5")
    with pytest.raises(ResourceLimitError):
        exhaustive_failure_profile(example1)
    with pytest.raises(ResourceLimitError):
        stopping_closure_mask(example1)


def test_profile_serialization(hamming):
    profile = exhaustive_failure_profile(hamming(3))
    assert profile.to_json()["coeffs"][3] == "10"
    assert profile.csv_rows()[3] == (3, "10")


def test_exact_probability_endpoints(hamming):
    profile = exhaustive_failure_profile(hamming(3))
    assert exact_failure_probability(profile, 0.0) == 0.0
    assert exact_failure_probability(profile, 1.0) == pytest.approx(1.0)


def test_exact_probability_nondecreasing(hamming):
    profile = exhaustive_failure_profile(hamming(4))
    values = [exact_failure_probability(profile, eps) for eps in np.linspace(0.0, 1.0, 51)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_exact_probability_domain(hamming):
    profile = exhaustive_failure_profile(hamming(3))
    with pytest.raises(DomainError):
        exact_failure_probability(profile, 1.5)


@pytest.mark.parametrize("epsilon", [0.1, 0.3, 0.5])
def test_monte_carlo_close_to_exact(hamming, epsilon):
    h = hamming(3)
    exact = exact_failure_probability(exhaustive_failure_profile(h), epsilon)
    result = monte_carlo_failure(h, epsilon, 100_000, seed=7, workers=1)
    assert result.trials == 100_000
    assert abs(result.estimate - exact) <= 4 * result.stderr


def test_monte_carlo_reproducible(hamming):
    a = monte_carlo_failure(hamming(3), 0.3, 20_000, seed=11, workers=1)
    b = monte_carlo_failure(hamming(3), 0.3, 20_000, seed=11, workers=1)
    assert a == b


def test_monte_carlo_worker_count_independent(hamming):
    serial = monte_carlo_failure(hamming(3), 0.4, 30_000, seed=3, workers=1)
    parallel = monte_carlo_failure(hamming(3), 0.4, 30_000, seed=3, workers=3)
    assert serial == parallel


def test_monte_carlo_zero_epsilon(hamming):
    for seed in (0, 1, 2 ** 64 - 1):
        result = monte_carlo_failure(hamming(3), 0.0, 1000, seed=seed, workers=1)
        assert result.estimate == 0.0
        assert result.stderr == 0.0


def test_monte_carlo_errors(hamming):
    with pytest.raises(DomainError):
        monte_carlo_failure(hamming(3), 0.3, 0, seed=1)
    with pytest.raises(DomainError):
        monte_carlo_failure(hamming(3), -0.1, 10, seed=1)
    with pytest.raises(DomainError):
        monte_carlo_failure(hamming(3), 0.3, 10, seed=-1)


def test_monte_carlo_block_sizes(monkeypatch, hamming):
    seen = []
    original = peeling._mc_block

    def spy(task):
        seen.append(task[3])
        return original(task)

    monkeypatch.setattr(peeling, "_mc_block", spy)
    monte_carlo_failure(hamming(3), 0.2, 2 * peeling.MC_BLOCK_TRIALS + 5, seed=5, workers=1)
    assert seen == [peeling.MC_BLOCK_TRIALS, peeling.MC_BLOCK_TRIALS, 5]
