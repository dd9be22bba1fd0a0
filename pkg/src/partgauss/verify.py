"""Exact identity checks and the full verification suite."""
from __future__ import annotations

import numpy as np

from .dist import QUADRATURE_MAX_K, PerturbedGaussianParams, StreamState, moment_quadrature, nu_moment, sample_nu_batch
from .exact import cf_block_convolution, cf_marginal, exact_mixed_moment, gaussian_cf
from .process import VectorStream
from .stats import (
    GRID_SIZE,
    GRID_VALUES,
    Check,
    TestReport,
    frequency_grid,
    probe_exchangeability,
    test_ergodic_average,
    test_gaussian_marginals,
    test_nongaussian_window,
    test_nu_samples,
    test_stationarity,
    test_step_independence,
)

EXACT_TOL = 1e-12


def _random_index_set(rng, p, spread=30):
    return np.sort(rng.choice(spread, size=p, replace=False)) - spread // 2


def exact_marginal_gaussianity(params: PerturbedGaussianParams, cases: int = 500, seed: int = 0) -> TestReport:
    """Index sets of size <= k-1: CF equals exp(-k|t|^2/2)."""
    rng = np.random.default_rng([seed, params.k, 1])
    worst = 0.0
    for _ in range(cases):
        p = int(rng.integers(1, params.k))
        idx = _random_index_set(rng, p)
        t = rng.uniform(-2.5, 2.5, size=p)
        worst = max(worst, abs(cf_marginal(params, idx, t) - gaussian_cf(params, t)))
    return TestReport("exact_marginal_gaussianity", cases, {"k": params.k, "seed": seed},
                      [Check("max_abs_deviation", worst, EXACT_TOL)])


def exact_evaluator_agreement(params: PerturbedGaussianParams, cases: int = 1000, max_m: int = 8,
                              seed: int = 0) -> TestReport:
    """Block-convolution CF against the routed-product CF on consecutive windows."""
    rng = np.random.default_rng([seed, params.k, 2])
    worst = 0.0
    for _ in range(cases):
        m = int(rng.integers(params.k, max(params.k, max_m) + 1))
        t = rng.uniform(-2.0, 2.0, size=m)
        start = int(rng.integers(-50, 50))
        diff = abs(cf_block_convolution(params, m, t) - cf_marginal(params, range(start, start + m), t))
        worst = max(worst, diff)
    return TestReport("exact_evaluator_agreement", cases, {"k": params.k, "max_m": max_m, "seed": seed},
                      [Check("max_abs_difference", worst, EXACT_TOL)])


def exact_shift_and_factorization(params: PerturbedGaussianParams, cases: int = 100, seed: int = 0) -> TestReport:
    """Bit-exact shift invariance, and factorization across gaps of at least k."""
    k = params.k
    rng = np.random.default_rng([seed, k, 3])
    mismatches = 0
    worst = 0.0
    for _ in range(cases):
        p = int(rng.integers(1, k + 3))
        idx = _random_index_set(rng, p)
        t = rng.normal(size=p)
        shift = int(rng.integers(-10**9, 10**9))
        if cf_marginal(params, idx + shift, t) != cf_marginal(params, idx, t):
            mismatches += 1
        left = _random_index_set(rng, int(rng.integers(1, k + 2)), 12)
        right = _random_index_set(rng, int(rng.integers(1, k + 2)), 12)
        right = right - right.min() + left.max() + k + int(rng.integers(0, 4))
        tl = rng.normal(size=left.size)
        tr = rng.normal(size=right.size)
        joint = cf_marginal(params, np.concatenate([left, right]), np.concatenate([tl, tr]))
        worst = max(worst, abs(joint - cf_marginal(params, left, tl) * cf_marginal(params, right, tr)))
    checks = [Check("shift_mismatches", float(mismatches), 0.0), Check("factorization_deviation", worst, EXACT_TOL)]
    return TestReport("exact_shift_factorization", cases, {"k": k, "seed": seed}, checks)


def exact_pairwise_independence(params: PerturbedGaussianParams, cases: int = 200, seed: int = 0) -> TestReport:
    """k >= 3: every pair (Y_0, Y_g) has CF exp(-k(t1^2 + t2^2)/2)."""
    rng = np.random.default_rng([seed, params.k, 4])
    worst = 0.0
    for _ in range(cases):
        g = int(rng.integers(1, 3 * params.k))
        t = rng.uniform(-2.5, 2.5, size=2)
        worst = max(worst, abs(cf_marginal(params, [0, g], t) - gaussian_cf(params, t)))
    return TestReport("exact_pairwise_independence", cases, {"k": params.k, "seed": seed},
                      [Check("max_abs_deviation", worst, EXACT_TOL)])


def exact_moments(params: PerturbedGaussianParams) -> TestReport:
    """Var(Y) = k, E[Y_1...Y_k] = E[X_1...X_k] = 2^{-3k/2} by two routes."""
    k = params.k
    closed = params.product_moment
    oracle = moment_quadrature(params, [1] * k) if k <= QUADRATURE_MAX_K else nu_moment(params, [1] * k)
    process = exact_mixed_moment(params, range(1, k + 1), [1] * k)
    var = exact_mixed_moment(params, [0], [2])
    mean = exact_mixed_moment(params, [0], [1])
    checks = [
        Check("quadrature_vs_closed_form", abs(oracle - closed), 1e-10),
        Check("window_product_vs_quadrature", abs(process - oracle), 1e-10),
        Check("variance_equals_k", abs(var - k), EXACT_TOL),
        Check("mean_zero", abs(mean), EXACT_TOL),
    ]
    details = {"quadrature": oracle, "window_product": process, "closed_form": closed, "variance": var}
    return TestReport("exact_moments", 1, {"k": k}, checks, details)


def exact_reports(params: PerturbedGaussianParams, seed: int = 0) -> list[TestReport]:
    out = [
        exact_marginal_gaussianity(params, seed=seed),
        exact_evaluator_agreement(params, seed=seed),
        exact_shift_and_factorization(params, seed=seed),
    ]
    if params.k >= 3:
        out.append(exact_pairwise_independence(params, seed=seed))
    out.append(exact_moments(params))
    return out


def sampler_report(stream: VectorStream, n: int, grid_values=GRID_VALUES, tol_scale: float = 1.0,
                   acceptance_tol: float | None = None) -> TestReport:
    state = StreamState(stream.root_seed, position=0, perturbation_sign=stream.perturbation_sign)
    x = sample_nu_batch(stream.params, state, n)
    grid = frequency_grid(stream.k, GRID_SIZE, grid_values)
    return test_nu_samples(stream.params, x, state.proposals, grid, acceptance_tol, tol_scale)


def statistical_reports(stream: VectorStream, n: int, length: int, grid_values=GRID_VALUES,
                        tol_scale: float = 1.0, include_sampler: bool = True) -> list[TestReport]:
    """Every Monte Carlo check, sized by ``n`` realizations and a ``length``-step path."""
    k = stream.k

    def grid(p):
        return frequency_grid(p, GRID_SIZE, grid_values)

    reports = []
    if include_sampler:
        reports.append(sampler_report(stream, n, grid_values, tol_scale))
    marginal_sets = [list(range(k - 1))]
    if k >= 3:
        marginal_sets.append([0] + [7 * j + j * j for j in range(1, k - 1)])
    else:
        marginal_sets.append([5])
    for idx in marginal_sets:
        reports.append(test_gaussian_marginals(stream, idx, n, grid(len(idx)), tol_scale))
    for g in range(1, k + 1):
        reports.append(test_step_independence(stream, g, n, grid(2), tol_scale))
    reports.append(test_stationarity(stream, k, 0, 37, n, grid(k), tol_scale))
    for obs in ("y", "y2", "kprod"):
        reports.append(test_ergodic_average(stream, obs, length, tol_scale))
    reports.append(test_nongaussian_window(stream, length, grid(k), tol_scale))
    q = k - 1
    far = [0] + [5 + 4 * j for j in range(q - 1)]
    spread = [1] + [7 + 93 * j for j in range(1, q)]
    reports.append(probe_exchangeability(stream, far, spread, n, grid(q), tol_scale))
    reports.append(probe_exchangeability(stream, list(range(1, k + 1)), [100 * j for j in range(k)], n,
                                         grid(k), tol_scale))
    return reports


def run_suite(stream: VectorStream, n: int = 100_000, length: int = 1_000_000, grid_values=GRID_VALUES,
              tol_scale: float = 1.0, include_exact: bool = True) -> list[TestReport]:
    reports = exact_reports(stream.params, seed=stream.root_seed % (2**32)) if include_exact else []
    return reports + statistical_reports(stream, n, length, grid_values, tol_scale)


def suite_failed(reports) -> list[TestReport]:
    return [r for r in reports if r.failed]


def calibration_names() -> tuple[str, ...]:
    """Checks that a pure N(0, k I) path must pass (k >= 3)."""
    return ("gaussian_marginals", "step_independence", "stationarity", "exchangeability_probe",
            "ergodic_y", "ergodic_y2")

