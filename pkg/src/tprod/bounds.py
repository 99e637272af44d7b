"""Tail-bound evaluators: the Psi/Phi integrals and Bernstein-type bounds.

Psi bounds the expected largest eigenvalue of the exponential of one random
tensor; Phi bounds the expected largest singular value.  Both are improper
integrals driven by the cubic-exponent tail of the largest eigenvalue of a
Gaussian Hermitian matrix, with tail constants (c1, c2) and (d1, d2) left as
calibratable inputs.  The Bernstein bounds combine them with a Laplace
transform argument; the transform parameter is eliminated by a 1-D infimum
search (coarse log grid, then golden-section refinement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import quadrature
from .errors import NumericError, ParameterError
from .rand_t import Envelope
from .spectral import FnSpec


# -- Psi ------------------------------------------------------------------------


def _psi_exponent_peak(gamma: float, c: float) -> tuple[float, float]:
    """Location and value of the maximum of gamma*u - c*u**1.5 on [0, inf)."""
    if gamma <= 0:
        return 0.0, 0.0
    u_star = (2.0 * gamma / (3.0 * c)) ** 2
    return u_star, gamma * u_star - c * u_star**1.5


def log_psi(m: int, gamma: float, c1: float = 1.0, c2: float = 1.0) -> float:
    """Logarithm of :func:`psi`, safe for large gamma."""
    if m < 1 or c1 <= 0 or c2 <= 0:
        raise ParameterError("psi requires m >= 1 and positive c1, c2")
    c = c2 * m
    u_star, peak = _psi_exponent_peak(gamma, c)

    def integrand(u):
        return math.sqrt(u) * math.exp(gamma * u - c * u**1.5 - peak)

    split = max(u_star, 1.0)
    head, err1 = quadrature.integrate_checked(integrand, 0.0, split)
    tail, err2 = quadrature.integrate_checked(integrand, split, np.inf)
    total = head + tail
    if total <= 0:
        raise NumericError("psi integral evaluated to a nonpositive value")
    return math.log(1.5 * m * c1 * c2) + 2.0 * gamma + peak + math.log(total)


def psi(m: int, gamma: float, c1: float = 1.0, c2: float = 1.0) -> float:
    """Expected-largest-eigenvalue integral.

    ``(3 m c1 c2 / 2) * int_2^inf (y-2)^(1/2) exp(gamma y - c2 m (y-2)^(3/2)) dy``

    Finite for every gamma (the 3/2-power decay dominates the linear term),
    nondecreasing in gamma, and equal to ``c1`` at ``gamma = 0``.
    """
    value = log_psi(m, gamma, c1, c2)
    return math.exp(value) if value < 700 else math.inf


# -- Phi ------------------------------------------------------------------------


def phi(m: int, d1: float = 1.0, d2: float = 1.0) -> float:
    """Expected-largest-singular-value integral.

    ``2 + int_0^inf min(1, d1 * exp(-d2 m u^(3/2))) du``: below 2 the survival
    probability is only bounded by 1, beyond 2 by the cubic-exponent tail,
    clamped at 1.  Decreasing in d2 and m, always at least 2.
    """
    if m < 1 or d1 < 0 or d2 <= 0:
        raise ParameterError("phi requires m >= 1, d1 >= 0 and d2 > 0")
    if d1 == 0.0:
        return 2.0
    c = d2 * m

    def integrand(u):
        return min(1.0, d1 * math.exp(-c * u**1.5))

    if d1 <= 1.0:
        kink = 0.0
    else:
        kink = (math.log(d1) / c) ** (2.0 / 3.0)
    head = kink  # integrand is exactly 1 up to the kink
    mid, _ = quadrature.integrate_checked(integrand, kink, kink + 1.0)
    tail, _ = quadrature.integrate_checked(integrand, kink + 1.0, np.inf)
    return 2.0 + head + mid + tail


# -- infimum search ---------------------------------------------------------------


class InfimumResult(NamedTuple):
    t_star: float
    value: float
    boundary: bool


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def infimum_over_t(f: Callable[[float], float], lo: float, hi: float,
                   coarse: int = 256, rel_tol: float = 1e-9) -> InfimumResult:
    """Locate the infimum of a 1-D objective on (lo, hi).

    A log-spaced coarse grid brackets the minimum, golden-section refines it.
    The returned value never exceeds any evaluated objective value; a minimum
    sitting on a grid boundary is reported as such.
    """
    if not 0 < lo < hi:
        raise ParameterError("domain must satisfy 0 < lo < hi")
    ts = np.geomspace(lo, hi, coarse)
    vals = np.array([f(t) for t in ts], dtype=np.float64)
    finite = np.isfinite(vals)
    if not finite.any():
        raise NumericError("objective is non-finite on the whole grid")
    vals[~finite] = np.inf
    i = int(np.argmin(vals))
    best_t, best_v = float(ts[i]), float(vals[i])
    boundary = i == 0 or i == coarse - 1

    a = math.log(ts[max(i - 1, 0)])
    b = math.log(ts[min(i + 1, coarse - 1)])
    # golden-section on the log axis; track the global best evaluation
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(math.exp(x1)), f(math.exp(x2))
    while (b - a) > rel_tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(math.exp(x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(math.exp(x2))
        t_mid = math.exp((a + b) / 2.0)
        v_mid = min(f1, f2)
        if v_mid < best_v:
            best_t, best_v = t_mid, v_mid
            boundary = False
    return InfimumResult(t_star=best_t, value=best_v, boundary=boundary)


# -- parameter bundle -------------------------------------------------------------


@dataclass(frozen=True)
class TailBoundParams:
    """Inputs shared by the bound evaluators.

    ``m``/``p`` are the tensor dimensions, ``n_sum`` the number of independent
    summands (kept separate from ``m``), ``k`` the Ky Fan order, ``g`` the
    polynomial applied to the sum, ``env`` the moment envelope and
    ``c1..d2`` the tail constants of the underlying eigenvalue bounds.
    """

    m: int
    p: int
    n_sum: int
    k: int
    g: FnSpec = field(default_factory=lambda: FnSpec.polynomial((0.0, 1.0)))
    env: Envelope = field(default_factory=lambda: Envelope(a=1.0))
    c1: float = 1.0
    c2: float = 1.0
    d1: float = 1.0
    d2: float = 1.0

    def __post_init__(self):
        if min(self.m, self.p, self.n_sum, self.k) < 1:
            raise ParameterError("m, p, n_sum, k must be positive")
        if self.k > self.m * self.p:
            raise ParameterError(f"k={self.k} exceeds m*p={self.m * self.p}")
        if self.g.kind != "polynomial":
            raise ParameterError("g must be a polynomial spec")
        if any(a < 0 for a in self.g.coeffs):
            raise ParameterError("polynomial coefficients must be nonnegative")
        if self.g.s < 1:
            raise ParameterError("outer power s must be >= 1")
        if min(self.c1, self.c2, self.d2) <= 0 or self.d1 < 0:
            raise ParameterError("tail constants must be positive")


# -- Bernstein-type bounds ---------------------------------------------------------

EIGEN_T_DOMAIN = (1e-6, 50.0)


def eigen_bernstein_bound(params: TailBoundParams, theta: float,
                          side: str = "max") -> tuple[float, float]:
    """Tail bound for the extreme eigenvalue of a sum of random tensors.

    ``max`` side needs theta > 0 and returns
    ``inf_t exp(-theta t) Psi(m, n_sum t, c1, c2)``; the ``min`` side mirrors
    it with theta < 0.  Returns (bound, minimizing t).
    """
    if side not in ("max", "min"):
        raise ParameterError("side must be 'max' or 'min'")
    if side == "max" and theta <= 0:
        raise ParameterError("max side requires theta > 0")
    if side == "min" and theta >= 0:
        raise ParameterError("min side requires theta < 0")
    sign = 1.0 if side == "max" else -1.0

    def objective_log(t):
        return -abs(theta) * t + log_psi(params.m, sign * params.n_sum * t,
                                         params.c1, params.c2)

    res = infimum_over_t(objective_log, *EIGEN_T_DOMAIN)
    return math.exp(res.value), res.t_star


def kyfan_expectation_bound(theta_scale: float, env: Envelope, m: int,
                            d1: float, d2: float, k: int) -> float:
    """Bound on the expected Ky Fan k-norm of ``exp(theta X)``.

    ``k [1 + theta Phi(m, d1, d2) + theta^2 a^2 / (2 (1 - theta))]`` for a
    sub-exponential random tensor with envelope scale ``a``.
    """
    if not 0.0 < theta_scale < 1.0:
        raise ParameterError("theta_scale must lie in (0, 1)")
    return k * (1.0 + theta_scale * phi(m, d1, d2)
                + theta_scale**2 * env.a**2 / (2.0 * (1.0 - theta_scale)))


def kyfan_bernstein_bound(params: TailBoundParams,
                          theta: float) -> tuple[float, float]:
    """Tail bound for the Ky Fan k-norm of a polynomial of a random tensor sum.

    The transform parameter ranges over ``(0, 1/(n_sum * n * s))`` so every
    geometric-series denominator stays positive.  Returns (bound, minimizing t).
    """
    if theta <= 0:
        raise ParameterError("theta must be positive")
    coeffs = params.g.coeffs
    n = params.g.degree
    s = params.g.s
    nsum, k = params.n_sum, params.k
    sigma_a2 = params.env.a**2
    phi_val = phi(params.m, params.d1, params.d2)
    prefactor = (n + 1) ** (s - 1)

    def objective(t):
        total = coeffs[0] ** s if coeffs else 0.0
        for l in range(1, n + 1):
            if coeffs[l] == 0.0:
                continue
            x = nsum * l * s * t
            if x >= 1.0:
                return math.inf
            total += coeffs[l] ** (l * s) * (
                1.0 + x * phi_val + x * x * sigma_a2 / (2.0 * (1.0 - x))
            )
        return prefactor * math.exp(-theta * t) * k * total

    if n >= 1:
        t_edge = 1.0 / (nsum * n * s)
        lo, hi = t_edge * 1e-9, t_edge * (1.0 - 1e-9)
    else:
        lo, hi = EIGEN_T_DOMAIN
    if not lo < hi:
        raise ParameterError("empty feasible t-domain")
    res = infimum_over_t(objective, lo, hi)
    return res.value, res.t_star


# -- tail-constant calibration -------------------------------------------------------


def fit_tail_constants(sigmas, m: int, grid: int = 16,
                       min_count: int = 5) -> tuple[float, float]:
    """Least-squares fit of (d1, d2) to the empirical tail of sigma_1.

    Fits ``log Pr(sigma_1 > y) ~ log d1 - d2 m (y - 2)^(3/2)`` on a grid of
    levels above 2 where the empirical survival is still resolved.  Falls back
    to (1, 1) when the sample carries no usable tail.
    """
    sigmas = np.asarray(sigmas, dtype=np.float64)
    n = sigmas.size
    if n == 0:
        raise ParameterError("no samples to fit")
    y_max = float(np.max(sigmas))
    if y_max <= 2.0:
        return 1.0, 1.0
    ys = np.linspace(2.0, y_max, grid + 2)[1:-1]
    zs, logs = [], []
    for y in ys:
        count = int(np.sum(sigmas > y))
        if count < min_count:
            continue
        zs.append(m * (y - 2.0) ** 1.5)
        logs.append(math.log(count / n))
    if len(zs) < 2:
        return 1.0, 1.0
    A = np.stack([np.ones(len(zs)), -np.asarray(zs)], axis=1)
    sol, *_ = np.linalg.lstsq(A, np.asarray(logs), rcond=None)
    d1 = float(np.exp(sol[0]))
    d2 = float(sol[1])
    return max(d1, 1e-6), max(d2, 1e-6)
