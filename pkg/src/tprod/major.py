"""Majorization predicates on real spectra.

All four variants compare prefix sums of descending vectors: plain sums for
the arithmetic modes, sums of logarithms (prefix products) for the log modes,
with the convention ``log 0 = -inf`` so a zero on the left-hand side passes.
The strong variants additionally require the totals to agree.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ShapeError
from .report import CheckReport

MODES = ("weak", "strong", "weak_log", "log")


class SpectrumVec:
    """A real vector stored sorted descending."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ShapeError("empty spectrum")
        arr = np.sort(arr)[::-1].copy()
        arr.setflags(write=False)
        self.values = arr

    def __len__(self):
        return len(self.values)


def descending(values) -> np.ndarray:
    return SpectrumVec(values).values


def majorizes(x, y, mode: str = "weak", tol_abs: float = 1e-9,
              tol_rel: float = 1e-9) -> CheckReport:
    """Check whether ``x`` is majorized by ``y`` in the given mode.

    Prefix sums are compared with a mixed absolute/relative tolerance (prefix
    sums grow with the prefix length, so a purely absolute tolerance would be
    too strict for long vectors).  The report's witness records the worst
    prefix index.
    """
    if mode not in MODES:
        raise ParameterError(f"unknown mode {mode!r}")
    xv = descending(x)
    yv = descending(y)
    if len(xv) != len(yv):
        raise ShapeError(f"length mismatch: {len(xv)} vs {len(yv)}")

    if mode in ("weak_log", "log"):
        if np.min(xv) < 0 or np.min(yv) < 0:
            raise ParameterError("log modes require nonnegative entries")
        with np.errstate(divide="ignore"):
            xv = np.log(xv)
            yv = np.log(yv)

    cx = np.cumsum(xv)
    cy = np.cumsum(yv)
    r = len(cx)

    margins = np.empty(r)
    for k in range(r):
        lhs, rhs = cx[k], cy[k]
        if lhs == -np.inf:
            margins[k] = np.inf  # -inf on the left always passes
        elif rhs == -np.inf:
            margins[k] = -np.inf
        else:
            margins[k] = rhs - lhs

    def allowance(k):
        lhs, rhs = cx[k], cy[k]
        mag = max(abs(lhs), abs(rhs)) if np.isfinite(lhs) and np.isfinite(rhs) else 1.0
        return tol_abs + tol_rel * mag

    strong = mode in ("strong", "log")
    if strong:
        # replace the last prefix by the two-sided total comparison
        if cx[-1] == -np.inf and cy[-1] == -np.inf:
            margins[-1] = np.inf
        elif np.isfinite(cx[-1]) and np.isfinite(cy[-1]):
            margins[-1] = -abs(cy[-1] - cx[-1])
        else:
            margins[-1] = -np.inf

    # the binding prefix is the one with the least slack over its allowance
    deficits = np.array([margins[k] + allowance(k) for k in range(r)])
    worst_k = int(np.argmin(deficits))
    ok = bool(np.min(deficits) >= 0.0)
    worst_margin = margins[worst_k]
    if worst_margin == np.inf:
        worst_margin = 0.0  # every prefix vacuously passed (log-zero case)
    return CheckReport(
        name=f"majorizes[{mode}]",
        trials=1,
        passes=1 if ok else 0,
        worst_margin=float(worst_margin),
        tol=float(allowance(worst_k)),
        witness={"worst_prefix": worst_k + 1, "length": r},
    )
