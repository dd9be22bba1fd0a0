import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partgauss.dist import PerturbedGaussianParams, cf_nu
from partgauss.errors import CapabilityError, InvalidInputError
from partgauss.exact import (
    MarginalQuery,
    block_list,
    cf_block_convolution,
    cf_marginal,
    exact_mixed_moment,
    gaussian_cf,
    nongaussianity_gap,
)

from conftest import brute_force_moment

P2, P3, P4 = (PerturbedGaussianParams(k) for k in (2, 3, 4))

ks = st.integers(2, 5)
freq = st.floats(-2.5, 2.5)


def test_marginal_examples():
    assert cf_marginal(P3, [0], [0.7]) == pytest.approx(math.exp(-1.5 * 0.49), abs=1e-15)
    assert cf_marginal(P3, [0, 1], [1, 1]) == pytest.approx(math.exp(-3.0), abs=1e-15)
    z = cf_marginal(P3, [1, 2, 3], [1, 1, 1])
    expected = math.exp(-4.5) + (1j / (2 * math.sqrt(2))) ** 3 * math.exp(-0.75) * math.exp(-3.0)
    assert abs(z - expected) < 1e-15
    assert z == pytest.approx(0.0111089965 - 0.0010393473j, abs=1e-10)


def test_single_vector_window_is_law_times_gaussians():
    # a consecutive k-window contains exactly one full vector
    rng = np.random.default_rng(0)
    for params in (P2, P3, P4):
        k = params.k
        t = rng.normal(size=k)
        rest = math.exp(-0.5 * sum(t[:j] @ t[:j] + t[j:] @ t[j:] for j in range(1, k)))
        assert abs(cf_marginal(params, range(k), t) - cf_nu(params, t) * rest) < 1e-14


def test_block_list_structure():
    for k in (2, 3, 5):
        for m in (k, k + 1, k + 4):
            blocks = block_list(k, m)
            assert sum(b.kind == "nu" for b in blocks) == m - k + 1
            assert all(b.width == k for b in blocks if b.kind == "nu")
            cover = np.zeros(m + 1, int)
            for b in blocks:
                cover[b.start: b.stop + 1] += 1
            np.testing.assert_array_equal(cover[1:], k)
    with pytest.raises(CapabilityError):
        block_list(3, 2)


def test_block_evaluator_example():
    z = cf_block_convolution(P3, 3, [1, 1, 1])
    assert abs(z - cf_marginal(P3, [1, 2, 3], [1, 1, 1])) < 1e-15
    with pytest.raises(InvalidInputError):
        cf_block_convolution(P3, 4, [1, 1, 1])


@settings(max_examples=150)
@given(ks, st.integers(0, 5), st.integers(-10**6, 10**6), st.data())
def test_evaluators_agree(k, extra, start, data):
    params = PerturbedGaussianParams(k)
    m = k + extra
    t = np.array(data.draw(st.lists(freq, min_size=m, max_size=m)))
    a = cf_block_convolution(params, m, t)
    b = cf_marginal(params, range(start, start + m), t)
    assert abs(a - b) < 1e-12


@settings(max_examples=150)
@given(ks, st.sets(st.integers(-30, 30), min_size=1, max_size=7), st.integers(-10**12, 10**12), st.data())
def test_shift_invariance_is_bit_exact(k, idx, shift, data):
    idx = sorted(idx)
    t = data.draw(st.lists(freq, min_size=len(idx), max_size=len(idx)))
    params = PerturbedGaussianParams(k)
    assert cf_marginal(params, [i + shift for i in idx], t) == cf_marginal(params, idx, t)


@settings(max_examples=150)
@given(ks, st.sets(st.integers(0, 12), min_size=1, max_size=4), st.sets(st.integers(0, 12), min_size=1, max_size=4),
       st.integers(0, 5), st.data())
def test_factorization_across_gap_of_k(k, left, right, extra, data):
    left = sorted(left)
    right = sorted(r - min(right) + max(left) + k + extra for r in right)
    tl = data.draw(st.lists(freq, min_size=len(left), max_size=len(left)))
    tr = data.draw(st.lists(freq, min_size=len(right), max_size=len(right)))
    params = PerturbedGaussianParams(k)
    joint = cf_marginal(params, left + right, tl + tr)
    assert abs(joint - cf_marginal(params, left, tl) * cf_marginal(params, right, tr)) < 1e-12


def test_dependence_within_gap_below_k():
    # k = 2, lag 1: (Y_0, Y_1) share vector 1 and do not factorize
    t = [1.0, 1.0]
    assert abs(cf_marginal(P2, [0, 1], t) - gaussian_cf(P2, t)) > 1e-3


@settings(max_examples=200)
@given(st.integers(3, 6), st.integers(1, 20), st.data())
def test_pairwise_independence_for_k_at_least_3(k, g, data):
    params = PerturbedGaussianParams(k)
    t = data.draw(st.lists(freq, min_size=2, max_size=2))
    assert abs(cf_marginal(params, [0, g], t) - gaussian_cf(params, t)) < 1e-12


@settings(max_examples=200)
@given(ks, st.data())
def test_sets_smaller_than_k_are_iid_gaussian(k, data):
    # no vector can see a nonzero frequency in every slot
    idx = sorted(data.draw(st.sets(st.integers(-40, 40), min_size=1, max_size=k - 1)))
    t = data.draw(st.lists(freq, min_size=len(idx), max_size=len(idx)))
    params = PerturbedGaussianParams(k)
    assert abs(cf_marginal(params, idx, t) - gaussian_cf(params, t)) < 1e-12


def test_marginal_query_validation():
    with pytest.raises(InvalidInputError):
        MarginalQuery([2, 1], [0, 0])
    with pytest.raises(InvalidInputError):
        MarginalQuery([1, 1], [0, 0])
    with pytest.raises(InvalidInputError):
        MarginalQuery([1, 2], [0])
    with pytest.raises(InvalidInputError):
        MarginalQuery([], [])
    with pytest.raises(InvalidInputError):
        cf_marginal(P3, [0], [float("nan")])


def test_gap_examples():
    assert nongaussianity_gap(P3, 3, [1, 1, 0]) == 0.0
    assert nongaussianity_gap(P3, 2, [1.3, -0.4]) < 1e-15
    assert nongaussianity_gap(P3, 3, [1, 1, 1]) == pytest.approx(math.exp(-3.75) / (16 * math.sqrt(2)), rel=1e-12)
    assert nongaussianity_gap(P2, 2, [1, 1]) > 0
    with pytest.raises(InvalidInputError):
        nongaussianity_gap(P3, 0, [])


def test_mixed_moment_basics(params):
    k = params.k
    assert exact_mixed_moment(params, [0], [0]) == 1.0
    assert exact_mixed_moment(params, [5], [1]) == 0.0
    assert exact_mixed_moment(params, [5], [2]) == pytest.approx(k, abs=1e-12)
    assert exact_mixed_moment(params, [0], [4]) == pytest.approx(3 * k * k, abs=1e-10)
    assert exact_mixed_moment(params, range(1, k + 1), [1] * k) == pytest.approx(2.0 ** (-1.5 * k), abs=1e-14)


def test_lag_one_covariance_for_k2():
    assert exact_mixed_moment(P2, [0, 1], [1, 1]) == pytest.approx(0.125, abs=1e-15)
    assert exact_mixed_moment(P3, [0, 1], [1, 1]) == pytest.approx(0.0, abs=1e-15)


CASES = [
    (2, [0, 1], [2, 1]),
    (2, [0, 1], [2, 2]),
    (2, [0, 1], [3, 1]),
    (2, [0, 1, 2], [1, 2, 1]),
    (3, [0, 1, 2], [1, 1, 1]),
    (3, [0, 1, 2], [2, 1, 1]),
    (3, [0, 1, 2], [1, 2, 2]),
    (3, [0, 1, 2, 3], [1, 1, 2, 1]),
    (3, [0, 2], [2, 2]),
    (3, [0, 1], [3, 1]),
    (4, [0, 1, 2, 3], [1, 1, 1, 1]),
    (4, [0, 1, 2, 3], [2, 1, 1, 1]),
    (4, [0, 1, 2, 3, 4], [1, 1, 1, 1, 1]),
]


@pytest.mark.parametrize("k,indices,orders", CASES)
def test_mixed_moment_matches_brute_force(k, indices, orders):
    expected = brute_force_moment(k, indices, orders)
    assert exact_mixed_moment(PerturbedGaussianParams(k), indices, orders) == pytest.approx(expected, abs=1e-10)


def test_mixed_moment_errors():
    with pytest.raises(CapabilityError):
        exact_mixed_moment(P3, [0, 1], [3, 3])
    with pytest.raises(InvalidInputError):
        exact_mixed_moment(P3, [1, 0], [1, 1])
    with pytest.raises(InvalidInputError):
        exact_mixed_moment(P3, [0, 1], [1])
    with pytest.raises(InvalidInputError):
        exact_mixed_moment(P3, [0], [-1])
