"""Unitarily invariant tensor norms via symmetric gauge functions.

A gauge function evaluates a permutation-invariant, absolutely homogeneous
functional on the descending T-singular values.  Ky Fan k sums the top ``k``,
Schatten q takes the l_q mean of all of them; the spectral and trace norms are
the two extremes.  Norms are always computed from the frequency-domain SVD;
the block-circulant SVD is reserved for test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import spectral, tcore
from .errors import ParameterError, PreconditionError
from .report import CheckReport
from .tcore import TTensor


@dataclass(frozen=True)
class GaugeSpec:
    kind: str
    k: int = 0
    q: float = 1.0
    fn: Optional[Callable[[np.ndarray], float]] = None
    label: str = ""

    @classmethod
    def ky_fan(cls, k: int) -> "GaugeSpec":
        if k < 1:
            raise ParameterError(f"ky_fan order must be >= 1, got {k}")
        return cls(kind="ky_fan", k=int(k), label=f"kyfan:{k}")

    @classmethod
    def schatten(cls, q: float) -> "GaugeSpec":
        if q < 1:
            raise ParameterError(f"schatten exponent must be >= 1, got {q}")
        return cls(kind="schatten", q=float(q), label=f"schatten:{q:g}")

    @classmethod
    def spectral(cls) -> "GaugeSpec":
        return cls(kind="spectral", label="spectral")

    @classmethod
    def trace_norm(cls) -> "GaugeSpec":
        return cls(kind="trace", label="trace")

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], float], probe_dim: int = 6,
               seed: int = 0) -> "GaugeSpec":
        """Register a user gauge after spot-checking the gauge axioms.

        A handful of random nonnegative vectors must evaluate permutation
        invariant and absolutely homogeneous, otherwise registration fails.
        """
        rng = np.random.default_rng(seed)
        for _ in range(8):
            v = rng.random(probe_dim)
            base = fn(np.sort(v)[::-1])
            if not np.isclose(fn(rng.permutation(v)), base, rtol=1e-9, atol=1e-12):
                raise ParameterError("custom gauge is not permutation-invariant")
            c = float(rng.random() * 3 + 0.1)
            if not np.isclose(fn(c * v), c * base, rtol=1e-9, atol=1e-12):
                raise ParameterError("custom gauge is not absolutely homogeneous")
        return cls(kind="custom", fn=fn, label="custom")

    @classmethod
    def parse(cls, text: str) -> "GaugeSpec":
        """Parse "kyfan:k", "schatten:q", "spectral" or "trace"."""
        text = text.strip().lower()
        if text == "spectral":
            return cls.spectral()
        if text == "trace":
            return cls.trace_norm()
        if text.startswith("kyfan:"):
            return cls.ky_fan(int(text.split(":", 1)[1]))
        if text.startswith("schatten:"):
            return cls.schatten(float(text.split(":", 1)[1]))
        raise ParameterError(f"cannot parse gauge {text!r}")

    def value(self, sigma) -> float:
        """Evaluate the gauge on a vector of nonnegative values (any order)."""
        sigma = np.sort(np.asarray(sigma, dtype=np.float64).reshape(-1))[::-1]
        if self.kind == "ky_fan":
            if self.k > sigma.size:
                raise ParameterError(
                    f"ky_fan order {self.k} out of range for {sigma.size} values"
                )
            return float(np.sum(sigma[: self.k]))
        if self.kind == "spectral":
            return float(sigma[0])
        if self.kind == "trace":
            return float(np.sum(sigma))
        if self.kind == "schatten":
            return float(np.sum(sigma ** self.q) ** (1.0 / self.q))
        if self.kind == "custom":
            return float(self.fn(sigma))
        raise ParameterError(f"unknown gauge kind {self.kind!r}")


def gauge_norm(x, g: GaugeSpec) -> float:
    """Gauge norm of a square tensor or block spectrum: g on its T-singular values."""
    return g.value(spectral.t_singular_values(x).values)


def spectral_norm(x) -> float:
    return gauge_norm(x, GaugeSpec.spectral())


def trace_norm(x) -> float:
    return gauge_norm(x, GaugeSpec.trace_norm())


def unitary_invariance_check(t: TTensor, u: TTensor, g: GaugeSpec,
                             tol_abs: float = 1e-9, tol_rel: float = 1e-9,
                             ortho_tol: float = 1e-9) -> CheckReport:
    """Verify that multiplying by an orthogonal tensor leaves the norm alone."""
    utu = tcore.tprod(tcore.transpose(u), u)
    eye = tcore.identity(u.m, u.p)
    if float(np.max(np.abs(utu.data - eye.data))) > ortho_tol:
        raise PreconditionError("u is not orthogonal within tolerance")
    base = gauge_norm(t, g)
    left = gauge_norm(tcore.tprod(u, t), g)
    right = gauge_norm(tcore.tprod(t, u), g)
    tol = tol_abs + tol_rel * abs(base)
    worst = -max(abs(left - base), abs(right - base))
    return CheckReport(
        name=f"unitary_invariance[{g.label}]",
        trials=1,
        passes=1 if worst >= -tol else 0,
        worst_margin=worst,
        tol=tol,
        witness={"norm": base, "left": left, "right": right},
    )


def holder_gauge_check(vectors, weights, g: GaugeSpec, tol_abs: float = 1e-9,
                       tol_rel: float = 1e-9) -> CheckReport:
    """Check the Hoelder inequality for a gauge function.

    For nonnegative vectors b_i and positive weights a_i summing to one, the
    gauge of the entrywise product of b_i**a_i must not exceed the product of
    the gauges raised to a_i.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ParameterError("weights must be positive and sum to 1")
    vecs = [np.asarray(v, dtype=np.float64).reshape(-1) for v in vectors]
    if len(vecs) != len(weights):
        raise ParameterError("one weight per vector required")
    if any(v.shape != vecs[0].shape for v in vecs):
        raise ParameterError("vectors must share a common dimension")
    if any(np.min(v) < 0 for v in vecs):
        raise ParameterError("vectors must be nonnegative")

    prod = np.ones_like(vecs[0])
    for v, a in zip(vecs, weights):
        prod = prod * np.power(v, a)
    lhs = g.value(prod)
    rhs = float(np.prod([g.value(v) ** a for v, a in zip(vecs, weights)]))
    tol = tol_abs + tol_rel * max(abs(lhs), abs(rhs))
    margin = rhs - lhs
    return CheckReport(
        name=f"holder_gauge[{g.label}]",
        trials=1,
        passes=1 if margin >= -tol else 0,
        worst_margin=margin,
        tol=tol,
        witness={"lhs": lhs, "rhs": rhs, "n": len(vecs)},
    )
