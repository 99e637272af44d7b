"""Interpolation weight densities and a checked adaptive quadrature wrapper."""

from __future__ import annotations

import numpy as np
from scipy import integrate

from .errors import NumericError

# Truncation half-width for the beta-weighted line integrals: the beta_0 tail
# mass beyond |t| = 9 is below 1e-12 (it decays like exp(-pi t)).
BETA_TRUNCATION = 9.0


def beta0(t):
    """Weight density pi / (2 (cosh(pi t) + 1)) = (pi/4) sech^2(pi t / 2)."""
    t = np.asarray(t, dtype=np.float64)
    return np.pi / (2.0 * (np.cosh(np.pi * t) + 1.0))


def beta_theta(t, theta: float):
    """Weight density sin(pi theta) / (2 theta (cosh(pi t) + cos(pi theta)))."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    t = np.asarray(t, dtype=np.float64)
    return np.sin(np.pi * theta) / (
        2.0 * theta * (np.cosh(np.pi * t) + np.cos(np.pi * theta))
    )


def beta0_tail_mass(T: float) -> float:
    """Exact mass of beta0 beyond |t| > T (two-sided)."""
    return float(1.0 - np.tanh(np.pi * T / 2.0))


def integrate_checked(fn, lo, hi, epsabs: float = 1e-12, epsrel: float = 1e-9,
                      limit: int = 200) -> tuple[float, float]:
    """scipy.integrate.quad with non-convergence turned into a hard error.

    Roundoff-limited refinement is tolerated as long as the reported error
    estimate stays small; callers fold that estimate into their tolerance
    budgets.  Returns (value, error estimate).
    """
    value, abserr, info, *trouble = integrate.quad(
        fn, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
    )
    if trouble:  # quad appends an explanation message on trouble
        acceptable = 1e-6 * (abs(value) + 1.0)
        if not np.isfinite(value) or abserr > acceptable:
            raise NumericError(f"quadrature failed on [{lo}, {hi}]: {trouble[0]}")
    return float(value), float(abserr)
