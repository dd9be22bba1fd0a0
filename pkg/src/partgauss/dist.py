"""The k-variate perturbed Gaussian law.

Density::

    psi(x) = (2 pi)^(-k/2) * (1 + x_1 ... x_k * exp(-|x|^2 / 2)) * exp(-|x|^2 / 2)

Every k-1 coordinates of a draw are i.i.d. N(0, 1), yet the law itself is not
Gaussian. The characteristic function has the closed form::

    Phi(t) = exp(-|t|^2 / 2) + (i / (2 sqrt 2))^k * t_1 ... t_k * exp(-|t|^2 / 4)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import CapabilityError, InvalidInputError, SamplerError

__all__ = [
    "PerturbedGaussianParams",
    "StreamState",
    "cf_nu",
    "cf_quadrature",
    "density",
    "log_density",
    "moment_quadrature",
    "nu_moment",
    "sample_nu",
    "sample_nu_batch",
    "seed_key",
]

QUADRATURE_MAX_K = 4
QUADRATURE_MAX_EXPONENT = 8


@dataclass(frozen=True)
class PerturbedGaussianParams:
    """Dimension of the law plus its derived constants."""

    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise InvalidInputError(f"k must be an integer >= 2, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def reject_bound(self) -> float:
        """Envelope constant 1 + e^{-k/2} for N(0, I_k) proposals."""
        return 1.0 + math.exp(-0.5 * self.k)

    @property
    def acceptance_probability(self) -> float:
        return 1.0 / self.reject_bound

    @property
    def product_moment(self) -> float:
        """E[X_1 ... X_k] = 2^{-3k/2}."""
        return 2.0 ** (-1.5 * self.k)

    @property
    def cf_coefficient(self) -> complex:
        """(i / (2 sqrt 2))^k, kept exact in the phase."""
        phase = (1.0, 1j, -1.0, -1j)[self.k % 4]
        return phase * 2.0 ** (-1.5 * self.k)


def _as_points(params, x, what="x"):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != params.k:
        raise InvalidInputError(f"{what} must have trailing dimension k={params.k}, got shape {arr.shape}")
    return arr


def log_density(params: PerturbedGaussianParams, x) -> np.ndarray | float:
    """Stable log psi(x); accepts a single point or an array of shape (..., k)."""
    x = _as_points(params, x)
    sq = np.sum(x * x, axis=-1)
    log_gauss = -0.5 * params.k * math.log(2.0 * math.pi) - 0.5 * sq
    with np.errstate(divide="ignore"):
        log_abs = np.sum(np.log(np.abs(x)), axis=-1)
    sgn = np.prod(np.sign(x), axis=-1)
    # perturbation = sgn * exp(log|prod| - |x|^2/2), bounded by e^{-k/2} in modulus
    pert = np.where(sgn == 0.0, 0.0, sgn * np.exp(np.where(sgn == 0.0, 0.0, log_abs) - 0.5 * sq))
    out = log_gauss + np.log1p(pert)
    return float(out) if np.ndim(out) == 0 else out


def density(params: PerturbedGaussianParams, x) -> np.ndarray | float:
    return np.exp(log_density(params, x))


def cf_nu(params: PerturbedGaussianParams, t) -> np.ndarray | complex:
    """Exact characteristic function of the law at t (shape (k,) or (..., k))."""
    t = _as_points(params, t, "t")
    sq = np.sum(t * t, axis=-1)
    out = np.exp(-0.5 * sq) + params.cf_coefficient * np.prod(t, axis=-1) * np.exp(-0.25 * sq)
    return complex(out) if np.ndim(out) == 0 else out


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def nu_moment(params: PerturbedGaussianParams, exponents) -> float:
    """Closed-form E[X_1^{a_1} ... X_k^{a_k}].

    Gaussian part is a product of (a-1)!! over even exponents; the perturbation
    part survives only when every exponent is odd and contributes
    prod a!! / 2^{(a+2)/2} (each factor is the 1-D integral of x^{a+1} e^{-x^2}
    over sqrt(2 pi)).
    """
    a = [int(e) for e in exponents]
    if len(a) != params.k or min(a) < 0:
        raise InvalidInputError(f"need {params.k} non-negative exponents, got {exponents!r}")
    gauss = 0.0 if any(e % 2 for e in a) else float(math.prod(_double_factorial(e - 1) for e in a))
    pert = 0.0
    if all(e % 2 for e in a):
        pert = math.prod(_double_factorial(e) * 2.0 ** (-(e + 2) / 2) for e in a)
    return gauss + pert


@lru_cache(maxsize=16)
def _nodes(n: int):
    x_e, w_e = np.polynomial.hermite_e.hermegauss(n)  # weight exp(-x^2/2)
    x_h, w_h = np.polynomial.hermite.hermgauss(n)  # weight exp(-x^2)
    return x_e, w_e / math.sqrt(2.0 * math.pi), x_h, w_h / math.sqrt(2.0 * math.pi)


def moment_quadrature(params: PerturbedGaussianParams, exponents, nodes: int = 40) -> float:
    """Moment of the law by Gauss-Hermite quadrature.

    psi splits into the standard normal density plus the perturbation
    (2 pi)^{-k/2} x_1...x_k exp(-|x|^2); both factorise over coordinates, so
    the k-dimensional tensor rule reduces to products of 1-D rules.
    """
    k = params.k
    a = [int(e) for e in exponents]
    if k > QUADRATURE_MAX_K:
        raise CapabilityError(f"quadrature oracle supports k <= {QUADRATURE_MAX_K}")
    if len(a) != k:
        raise InvalidInputError(f"need {k} exponents, got {len(a)}")
    if min(a) < 0 or max(a) > QUADRATURE_MAX_EXPONENT:
        raise CapabilityError(f"exponents must lie in [0, {QUADRATURE_MAX_EXPONENT}]")
    if nodes < 40:
        raise InvalidInputError("use at least 40 nodes per axis")
    x_e, w_e, x_h, w_h = _nodes(nodes)
    gauss = math.prod(float(np.dot(w_e, x_e ** e)) for e in a)
    pert = math.prod(float(np.dot(w_h, x_h ** (e + 1))) for e in a)
    return gauss + pert


def cf_quadrature(params: PerturbedGaussianParams, t, nodes: int = 60) -> complex:
    """Characteristic function by the same factorised Gauss-Hermite rule."""
    t = _as_points(params, t, "t")
    if t.ndim != 1:
        raise InvalidInputError("cf_quadrature takes a single frequency point")
    x_e, w_e, x_h, w_h = _nodes(nodes)
    gauss = np.prod([np.dot(w_e, np.exp(1j * tj * x_e)) for tj in t])
    pert = np.prod([np.dot(w_h, x_h * np.exp(1j * tj * x_h)) for tj in t])
    return complex(gauss + pert)


def seed_key(root_seed: int) -> tuple[np.uint64, np.uint64]:
    """Split a 64-bit seed into the two 32-bit Philox key words."""
    if isinstance(root_seed, bool) or not isinstance(root_seed, (int, np.integer)):
        raise InvalidInputError(f"seed must be an integer, got {root_seed!r}")
    s = int(root_seed)
    if not 0 <= s < 2**64:
        raise InvalidInputError("seed must fit in an unsigned 64-bit integer")
    return np.uint64(s & 0xFFFFFFFF), np.uint64(s >> 32)


@dataclass
class StreamState:
    """Deterministic sampler position.

    Draw number ``position`` is the vector at that counter index, so the state
    is fully described by (seed, position). ``perturbation_sign`` is 1 for the
    true law; 0 gives plain N(0, I_k) draws and -1 the mirrored law, both used
    to exercise the statistical detectors.
    """

    seed: int
    position: int = 0
    perturbation_sign: float = 1.0
    draws: int = field(default=0, init=False)
    proposals: int = field(default=0, init=False)

    def __post_init__(self):
        seed_key(self.seed)
        if self.perturbation_sign not in (-1.0, 0.0, 1.0):
            raise InvalidInputError("perturbation_sign must be -1, 0 or 1")

    @property
    def acceptance_rate(self) -> float:
        return self.draws / self.proposals if self.proposals else float("nan")


def sample_nu_batch(params: PerturbedGaussianParams, state: StreamState, n: int) -> np.ndarray:
    """Next ``n`` exact draws as an (n, k) array; advances ``state``."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    k0, k1 = seed_key(state.seed)
    idx = np.arange(state.position, state.position + n, dtype=np.int64)
    out, used = kernels.draw_vectors(k0, k1, params.k, float(state.perturbation_sign), idx)
    if used < 0:
        raise SamplerError("rejection cap exceeded; random source is broken")
    state.position += n
    state.draws += n
    state.proposals += int(used)
    return out


def sample_nu(params: PerturbedGaussianParams, state: StreamState) -> np.ndarray:
    return sample_nu_batch(params, state, 1)[0]
