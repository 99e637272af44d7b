"""Numerical verification of the spectral and norm inequalities.

Every check builds or receives concrete instances, evaluates both sides of an
inequality, and returns a :class:`CheckReport` with the worst signed margin
(RHS - LHS).  Randomized checks derive all randomness from an explicit seed so
reports are reproducible.  Suite runners at the bottom generate batches of
random instances for the CLI ``verify`` command.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import major, norms, quadrature, spectral, tcore
from .errors import NumericError, ParameterError, PreconditionError, ShapeError
from .norms import GaugeSpec
from .report import CheckReport, combine
from .spectral import BlockSpectrum, FnSpec, hermitian_blocks
from .tcore import TTensor


def _mixed_tol(tol_abs, tol_rel, *values) -> float:
    scale = max((abs(v) for v in values), default=0.0)
    return tol_abs + tol_rel * scale


def _expm_herm(block: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(block)
    return (v * np.exp(w)) @ v.conj().T


def _logm_herm(block: np.ndarray, guard: float = 1e-12) -> np.ndarray:
    w, v = np.linalg.eigh(block)
    if w.min() <= guard:
        raise PreconditionError(f"matrix log needs eigenvalues > {guard:.1e}")
    return (v * np.log(w)) @ v.conj().T


# -- instance generators ------------------------------------------------------


def random_symmetric(rng: np.random.Generator, m: int, p: int,
                     scale: float = 1.0) -> TTensor:
    """Random real symmetric tensor with standard normal entries."""
    t = TTensor(rng.standard_normal((m, m, p)) * scale)
    return (t + tcore.transpose(t)) * 0.5


def random_tpd(rng: np.random.Generator, m: int, p: int,
               shift: float = 0.1) -> TTensor:
    """Random real TPD tensor: every frequency block is G^H G + shift * I."""
    blocks = np.empty((p, m, m), dtype=np.complex128)
    for i in range((p // 2) + 1):
        j = (p - i) % p
        if i == j:
            g = rng.standard_normal((m, m))
        else:
            g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        b = g.conj().T @ g + shift * np.eye(m)
        blocks[i] = b
        if j != i:
            blocks[j] = b.conj()
    return spectral.from_spectrum(BlockSpectrum(blocks, copy=False))


def random_orthogonal(rng: np.random.Generator, m: int, p: int) -> TTensor:
    u, _ = spectral.sym_factorize(random_symmetric(rng, m, p))
    return u


# -- Courant-Fischer and extreme eigenvalue sums ------------------------------


def _block_eigs(c) -> tuple[np.ndarray, np.ndarray]:
    blocks = hermitian_blocks(c)
    w, v = np.linalg.eigh(blocks)
    return w[:, ::-1], v[:, :, ::-1]  # descending


def _validate_ks(ks, m: int, p: int) -> np.ndarray:
    ks = np.asarray(ks, dtype=int)
    if ks.shape != (p,):
        raise ParameterError(f"need {p} per-block orders, got {ks.shape}")
    if np.any(ks < 1) or np.any(ks > m):
        raise ParameterError(f"per-block orders must lie in [1, {m}]")
    return ks


def _rayleigh_quotient(c: TTensor, x: TTensor) -> float:
    num = tcore.inner(x, tcore.tprod(c, x))
    den = tcore.inner(x, x)
    return complex(num).real / complex(den).real


def check_courant_fischer(c, ks, trials: int = 8, seed: int = 0,
                          tol_abs: float = 1e-9, tol_rel: float = 1e-9) -> CheckReport:
    """Max-min characterization of the global eigenvalue picked by per-block orders.

    The candidate value is the smallest of the k_i-th largest block
    eigenvalues.  It must (a) be achieved as the minimum Rayleigh quotient on
    the span of the top-k_i eigenvectors, and (b) upper-bound the min-quotient
    of every random subspace with the same per-block dimensions.
    """
    w, v = _block_eigs(c)
    p, m = w.shape
    ks = _validate_ks(ks, m, p)
    lam = float(min(w[i, ks[i] - 1] for i in range(p)))
    margins = []

    # (a) achieved on the eigenvector subspace, blockwise
    blocks = hermitian_blocks(c)
    achieved = np.inf
    for i in range(p):
        q = v[i][:, : ks[i]]
        comp = q.conj().T @ blocks[i] @ q
        achieved = min(achieved, float(np.linalg.eigvalsh(comp).min()))
    tol_a = _mixed_tol(tol_abs, tol_rel, lam)
    margins.append(tol_a - abs(achieved - lam))

    # spatial Rayleigh quotient at the minimizing eigenvector
    if isinstance(c, TTensor):
        i_min = int(np.argmin([w[i, ks[i] - 1] for i in range(p)]))
        freq = np.zeros((m, 1, p), dtype=np.complex128)
        freq[:, 0, i_min] = v[i_min][:, ks[i_min] - 1]
        x = TTensor(np.fft.ifft(freq, axis=2), copy=False)
        quot = _rayleigh_quotient(c, x)
        margins.append(tol_a - abs(quot - lam))

    # (b) random subspaces never beat it
    rng = np.random.default_rng(seed)
    passes = sum(1 for mg in margins if mg >= 0)
    worst = min(margins)
    witness = {"lam": lam, "ks": ks.tolist()}
    for trial in range(trials):
        minq = np.inf
        for i in range(p):
            g = rng.standard_normal((m, ks[i])) + 1j * rng.standard_normal((m, ks[i]))
            q, _ = np.linalg.qr(g)
            comp = q.conj().T @ blocks[i] @ q
            minq = min(minq, float(np.linalg.eigvalsh(comp).min()))
        margin = (lam + tol_a) - minq
        if margin >= 0:
            passes += 1
        if margin < worst:
            worst = margin
            witness["trial"] = trial
    return CheckReport(
        name="courant_fischer",
        trials=len(margins) + trials,
        passes=passes,
        worst_margin=worst,
        tol=0.0,  # tolerance already folded into the margins
        witness=witness,
    )


def check_extreme_sum_rep(c, ks, trials: int = 8, seed: int = 0,
                          tol_abs: float = 1e-9, tol_rel: float = 1e-9) -> CheckReport:
    """Partial-isometry trace sums are bracketed by extreme eigenvalue sums."""
    w, v = _block_eigs(c)
    p, m = w.shape
    ks = _validate_ks(ks, m, p)
    blocks = hermitian_blocks(c)
    ub = float(sum(w[i, : ks[i]].sum() for i in range(p)))
    lb = float(sum(w[i, m - ks[i]:].sum() for i in range(p)))
    tol = _mixed_tol(tol_abs, tol_rel, ub, lb)

    margins = []
    # equality at eigenvector rows (top and bottom)
    top = sum(
        float(np.real(np.trace(v[i][:, : ks[i]].conj().T @ blocks[i] @ v[i][:, : ks[i]])))
        for i in range(p)
    )
    bot = sum(
        float(np.real(np.trace(v[i][:, m - ks[i]:].conj().T @ blocks[i] @ v[i][:, m - ks[i]:])))
        for i in range(p)
    )
    margins.append(tol - abs(top - ub))
    margins.append(tol - abs(bot - lb))

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        val = 0.0
        for i in range(p):
            g = rng.standard_normal((m, ks[i])) + 1j * rng.standard_normal((m, ks[i]))
            q, _ = np.linalg.qr(g)
            val += float(np.real(np.trace(q.conj().T @ blocks[i] @ q)))
        margins.append((ub + tol) - val)   # val <= ub
        margins.append(val - (lb - tol))   # val >= lb
    worst = float(min(margins))
    return CheckReport(
        name="extreme_sum_rep",
        trials=len(margins),
        passes=sum(1 for mg in margins if mg >= 0),
        worst_margin=worst,
        tol=0.0,
        witness={"ub": ub, "lb": lb, "ks": ks.tolist()},
    )


# -- norm inequalities ---------------------------------------------------------


def check_sv_majorization(a, b, tol_abs: float = 1e-9,
                          tol_rel: float = 1e-9) -> CheckReport:
    """Singular values of a sum are weakly majorized by the sum of singular values."""
    sa = spectral.t_singular_values(a).values
    sb = spectral.t_singular_values(b).values
    sab = spectral.t_singular_values(a + b).values
    rep = major.majorizes(sab, sa + sb, mode="weak", tol_abs=tol_abs, tol_rel=tol_rel)
    rep.name = "sv_majorization"
    return rep


def check_kyfan_product(tensors: Sequence, exponents: Sequence[float], s: float,
                        k: int, tol_abs: float = 1e-9,
                        tol_rel: float = 1e-9) -> CheckReport:
    """Two-step Ky Fan bound for a product: geometric then arithmetic splitting."""
    exponents = np.asarray(exponents, dtype=np.float64)
    if np.any(exponents <= 0) or abs(np.sum(1.0 / exponents) - 1.0) > 1e-12:
        raise ParameterError("exponents must be positive with reciprocals summing to 1")
    if s < 1:
        raise ParameterError("outer power s must be >= 1")
    prod = tensors[0]
    for t in tensors[1:]:
        prod = tcore.tprod(prod, t)
    sp = spectral.t_singular_values(prod).values
    if not 1 <= k <= sp.size:
        raise ParameterError(f"k={k} out of range")
    lhs = float(np.sum(sp[:k] ** s))
    factors = []
    for t, pi in zip(tensors, exponents):
        sv = spectral.t_singular_values(t).values
        factors.append(float(np.sum(sv[:k] ** (s * pi))))
    mid = float(np.prod([f ** (1.0 / pi) for f, pi in zip(factors, exponents)]))
    rhs = float(sum(f / pi for f, pi in zip(factors, exponents)))
    tol = _mixed_tol(tol_abs, tol_rel, lhs, mid, rhs)
    worst = min(mid - lhs, rhs - mid)
    return CheckReport(
        name="kyfan_product",
        trials=2,
        passes=int(mid - lhs >= -tol) + int(rhs - mid >= -tol),
        worst_margin=float(worst),
        tol=tol,
        witness={"lhs": lhs, "mid": mid, "rhs": rhs, "s": s, "k": k},
    )


def check_kyfan_sum(tensors: Sequence, s: float, k: int, tol_abs: float = 1e-9,
                    tol_rel: float = 1e-9) -> CheckReport:
    """Power-mean Ky Fan bound for a sum of symmetric tensors."""
    if s < 1:
        raise ParameterError("outer power s must be >= 1")
    n = len(tensors)
    total = tensors[0]
    for t in tensors[1:]:
        total = total + t
    st = spectral.t_singular_values(total).values
    if not 1 <= k <= st.size:
        raise ParameterError(f"k={k} out of range")
    lhs = float(np.sum(st[:k] ** s))
    rhs = float(n ** (s - 1) * sum(
        np.sum(spectral.t_singular_values(t).values[:k] ** s) for t in tensors
    ))
    tol = _mixed_tol(tol_abs, tol_rel, lhs, rhs)
    return CheckReport(
        name="kyfan_sum",
        trials=1,
        passes=int(rhs - lhs >= -tol),
        worst_margin=rhs - lhs,
        tol=tol,
        witness={"lhs": lhs, "rhs": rhs, "n": n, "s": s, "k": k},
    )


# -- Lie-Trotter ---------------------------------------------------------------


def check_lie_trotter(tensors: Sequence, steps: Sequence[int] = (8, 16, 32, 64),
                      ratio_window: tuple[float, float] = (1.6, 2.4),
                      final_rel: float = 1e-4,
                      exact_rel: float = 1e-12) -> CheckReport:
    """First-order convergence of the split exponential product.

    The deviation of ``(prod_i exp(L_i/q))^q`` from ``exp(sum L_i)`` must halve
    (within the window) whenever ``q`` doubles, and be small at the largest
    ``q``.  Commuting inputs must match to roundoff at every ``q``.
    """
    steps = sorted(int(q) for q in steps)
    blocks = [hermitian_blocks(t) for t in tensors]
    total = _sum_blocks(blocks)
    target = np.stack([_expm_herm(b) for b in total])
    ref = max(float(np.linalg.norm(b, 2)) for b in target)

    errs = {}
    for q in steps:
        exps = [np.stack([_expm_herm(b / q) for b in blk]) for blk in blocks]
        prod = exps[0]
        for e in exps[1:]:
            prod = prod @ e
        powed = np.stack([np.linalg.matrix_power(b, q) for b in prod])
        errs[q] = max(
            float(np.linalg.norm(d, 2)) for d in (powed - target)
        )

    witness = {"errors": {str(q): errs[q] for q in steps}, "ref": ref}
    if errs[steps[-1]] <= exact_rel * ref:
        margin = exact_rel * ref - errs[steps[-1]]
        return CheckReport("lie_trotter", trials=1, passes=1,
                           worst_margin=margin, tol=0.0,
                           witness={**witness, "commuting": True})

    lo, hi = ratio_window
    margins = []
    for qa, qb in zip(steps, steps[1:]):
        if qb != 2 * qa:
            continue
        ratio = errs[qa] / errs[qb]
        margins.append(min(ratio - lo, hi - ratio))
        witness[f"ratio_{qa}_{qb}"] = ratio
    margins.append(final_rel * ref - errs[steps[-1]])
    worst = float(min(margins))
    return CheckReport(
        name="lie_trotter",
        trials=len(margins),
        passes=sum(1 for mg in margins if mg >= 0),
        worst_margin=worst,
        tol=0.0,
        witness=witness,
    )


def _sum_blocks(blocks: list[np.ndarray]) -> np.ndarray:
    total = blocks[0].copy()
    for b in blocks[1:]:
        total = total + b
    return total


# -- multivariate norm inequality ----------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    truncation: float = quadrature.BETA_TRUNCATION
    epsrel: float = 1e-9
    epsabs: float = 1e-12


def _gauge_of_fn(gauge: GaugeSpec, f: FnSpec, values: np.ndarray) -> float:
    """Norm of f applied to a tensor with the given (nonnegative) spectrum."""
    return gauge.value(np.abs(f.apply_scalar(values)))


def check_multivariate_norm_ineq(tensors: Sequence, f: FnSpec, g: FnSpec,
                                 gauge: GaugeSpec,
                                 quad: QuadratureSpec | None = None,
                                 tol_abs: float = 1e-9,
                                 tol_rel: float = 1e-9) -> CheckReport:
    """Interpolation bound on norms of functions of a log-sum of TPD tensors.

    Both forms are checked: the exponential of the weighted log-integral for
    ``f`` (log-convex-in-exponent family) and the plain weighted integral for
    ``g`` (convex-in-exponent family).  The quadrature truncation and error
    estimates are added to the tolerance so the verdict never hinges on
    integration noise.
    """
    quad = quad or QuadratureSpec()
    eigsys = []
    for t in tensors:
        blocks = hermitian_blocks(t)
        w, v = np.linalg.eigh(blocks)
        if w.min() <= 1e-8:
            raise PreconditionError("all factors must be TPD (min eigenvalue > 1e-8)")
        eigsys.append((w, v))
    p, m = eigsys[0][0].shape

    # left-hand sides: f, g of exp(sum log C_i)
    log_sum = np.zeros((p, m, m), dtype=np.complex128)
    for (w, v) in eigsys:
        log_sum += np.einsum("pij,pj,pkj->pik", v, np.log(w), v.conj())
    center = np.stack([_expm_herm(b) for b in log_sum])
    lam_center = np.linalg.eigvalsh(center).reshape(-1)
    lhs_f = _gauge_of_fn(gauge, f, lam_center)
    lhs_g = _gauge_of_fn(gauge, g, lam_center)

    def sigma_at(t: float) -> np.ndarray:
        prod = None
        for (w, v) in eigsys:
            powed = np.einsum(
                "pij,pj,pkj->pik", v, np.exp((1.0 + 1j * t) * np.log(w)), v.conj()
            )
            prod = powed if prod is None else prod @ powed
        return np.linalg.svd(prod, compute_uv=False).reshape(-1)

    T = quad.truncation
    val_f, err_f = quadrature.integrate_checked(
        lambda t: np.log(_gauge_of_fn(gauge, f, sigma_at(t))) * quadrature.beta0(t),
        -T, T, epsabs=quad.epsabs, epsrel=quad.epsrel,
    )
    val_g, err_g = quadrature.integrate_checked(
        lambda t: _gauge_of_fn(gauge, g, sigma_at(t)) * quadrature.beta0(t),
        -T, T, epsabs=quad.epsabs, epsrel=quad.epsrel,
    )

    # tail budget: singular values of the product are bracketed by the
    # products of extreme block eigenvalues, uniformly in t
    lo = float(np.prod([w.min() for (w, _) in eigsys]))
    hi = float(np.prod([w.max() for (w, _) in eigsys]))
    count = m * p
    bound_f = max(
        abs(np.log(_gauge_of_fn(gauge, f, np.full(count, lo)))),
        abs(np.log(_gauge_of_fn(gauge, f, np.full(count, hi)))),
    )
    bound_g = max(
        _gauge_of_fn(gauge, g, np.full(count, lo)),
        _gauge_of_fn(gauge, g, np.full(count, hi)),
    )
    tail = quadrature.beta0_tail_mass(T)
    budget_f = tail * bound_f + err_f
    budget_g = tail * bound_g + err_g
    if not (np.isfinite(budget_f) and np.isfinite(budget_g)):
        raise NumericError(
            "factor spectra span too wide a range for a trustworthy "
            "quadrature budget; rescale the inputs"
        )

    rhs_f = float(np.exp(val_f))
    rhs_g = float(val_g)
    tol_f = _mixed_tol(tol_abs, tol_rel, lhs_f, rhs_f) + rhs_f * np.expm1(budget_f)
    tol_g = _mixed_tol(tol_abs, tol_rel, lhs_g, rhs_g) + budget_g

    margin_f = rhs_f - lhs_f
    margin_g = rhs_g - lhs_g
    # normalize the two margins against their own tolerances to pick the worst
    worse_is_f = margin_f + tol_f <= margin_g + tol_g
    return CheckReport(
        name=f"multivariate_norm[{gauge.label}]",
        trials=2,
        passes=int(margin_f >= -tol_f) + int(margin_g >= -tol_g),
        worst_margin=float(margin_f if worse_is_f else margin_g),
        tol=float(tol_f if worse_is_f else tol_g),
        witness={
            "lhs_f": lhs_f, "rhs_f": rhs_f, "lhs_g": lhs_g, "rhs_g": rhs_g,
            "budget_f": budget_f, "budget_g": budget_g, "n": len(tensors),
        },
    )


# -- majorization transfer through a discrete measure ---------------------------


@dataclass
class DiscreteMeasure:
    """Finitely supported probability measure on symmetric tensors."""

    weights: np.ndarray
    atoms: list

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ParameterError("weights must be positive and sum to 1")
        if len(self.atoms) != self.weights.size:
            raise ParameterError("one weight per atom required")
        shapes = {a.shape if isinstance(a, TTensor) else (a.m, a.m, a.p) for a in self.atoms}
        if len(shapes) != 1:
            raise ShapeError("atoms must share dimensions")


def _per_block_spectra(mu: DiscreteMeasure) -> np.ndarray:
    """Descending eigenvalue rows per (atom, block)."""
    spectra = []
    for atom in mu.atoms:
        w = np.linalg.eigvalsh(hermitian_blocks(atom))
        spectra.append(w[:, ::-1])
    return np.stack(spectra)  # (n_atoms, p, m)


def average_tensor(mu: DiscreteMeasure, mode: str = "arith") -> TTensor:
    """F-diagonal tensor whose block spectra average the atoms' block spectra.

    Arithmetic mode averages the descending per-block eigenvalues, log mode
    averages their logarithms (geometric mean).  Averaging per block keeps the
    conjugate-frequency pairing of the atoms, so the result is a real
    symmetric tensor; its global spectrum is then majorized by the average of
    the atoms' global spectra (sums of sorted vectors dominate sorted sums),
    which is exactly the transfer premise.
    """
    spectra = _per_block_spectra(mu)
    w = mu.weights[:, None, None]
    if mode == "arith":
        avg = np.sum(w * spectra, axis=0)
    elif mode == "log":
        if spectra.min() < -1e-12:
            raise ParameterError("log mode requires TPSD atoms")
        with np.errstate(divide="ignore"):
            avg = np.exp(np.sum(w * np.log(np.maximum(spectra, 0.0)), axis=0))
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    p, m = avg.shape
    blocks = np.zeros((p, m, m), dtype=np.complex128)
    blocks[:, np.arange(m), np.arange(m)] = avg
    return spectral.from_spectrum(BlockSpectrum(blocks, copy=False))


def check_integral_majorization_transfer(c: TTensor, mu: DiscreteMeasure,
                                         mode: str, fns: Sequence[FnSpec],
                                         gauge: GaugeSpec,
                                         tol_abs: float = 1e-9,
                                         tol_rel: float = 1e-9) -> CheckReport:
    """Transfer of a spectral-average premise to a norm inequality.

    ``c`` must be built so its spectrum is (weakly) majorized by the weighted
    arithmetic (resp. geometric) average of the atoms' spectra; see
    :func:`average_tensor`.  The conclusion checked is per function f:
    arithmetic mode  |f(c)| <= sum w_t |f(D_t)|, log mode
    |f(c)| <= exp(sum w_t log |f(D_t)|).
    """
    if mode not in ("arith", "log"):
        raise ParameterError(f"unknown mode {mode!r}")
    lam_c = spectral.t_eigenvalues(c).values
    atom_lams = [spectral.t_eigenvalues(a).values for a in mu.atoms]
    margins = []
    details = {}
    for f in fns:
        lhs = _gauge_of_fn(gauge, f, lam_c)
        atom_norms = np.array([_gauge_of_fn(gauge, f, lam) for lam in atom_lams])
        if mode == "arith":
            rhs = float(np.dot(mu.weights, atom_norms))
        else:
            if np.any(atom_norms <= 0):
                rhs = 0.0
            else:
                rhs = float(np.exp(np.dot(mu.weights, np.log(atom_norms))))
        tol = _mixed_tol(tol_abs, tol_rel, lhs, rhs)
        margins.append((rhs - lhs, tol))
        details[f.kind] = {"lhs": lhs, "rhs": rhs}
    worst_margin, worst_tol = min(margins, key=lambda mt: mt[0] + mt[1])
    return CheckReport(
        name=f"integral_majorization[{mode}]",
        trials=len(margins),
        passes=sum(1 for mg, tl in margins if mg >= -tl),
        worst_margin=float(worst_margin),
        tol=float(worst_tol),
        witness=details,
    )


# -- product of leading singular values -----------------------------------------


def check_antisym_product_identity(e: TTensor, k: int,
                                   tol_rel: float = 1e-7) -> CheckReport:
    """Product of the top-k T-singular values matches the block-circulant SVD."""
    sv = spectral.t_singular_values(e).values
    if not 1 <= k <= sv.size:
        raise ParameterError(f"k={k} out of range")
    lhs = float(np.prod(sv[:k]))
    sv_bc = np.linalg.svd(tcore.bcirc(e), compute_uv=False)
    rhs = float(np.prod(sv_bc[:k]))
    tol = tol_rel * max(abs(lhs), abs(rhs), 1e-300)
    margin = -abs(lhs - rhs)
    return CheckReport(
        name="antisym_product_identity",
        trials=1,
        passes=int(margin >= -tol),
        worst_margin=margin,
        tol=tol,
        witness={"tensor_side": lhs, "bcirc_side": rhs, "k": k},
    )


# -- randomized suites -----------------------------------------------------------


@dataclass
class SuiteSpec:
    name: str
    runner: Callable
    default_trials: int = 200


def _dims(rng, max_m=4, max_p=4):
    return int(rng.integers(2, max_m + 1)), int(rng.integers(1, max_p + 1))


def _suite_courant_fischer(rng, trials, tol):
    reports = []
    for i in range(trials):
        m, p = _dims(rng)
        c = random_symmetric(rng, m, p)
        ks = rng.integers(1, m + 1, size=p)
        reports.append(check_courant_fischer(
            c, ks, trials=6, seed=int(rng.integers(2**32)),
            tol_abs=tol, tol_rel=tol))
    return reports


def _suite_extreme_sum(rng, trials, tol):
    reports = []
    for i in range(trials):
        m, p = _dims(rng)
        c = random_symmetric(rng, m, p)
        ks = rng.integers(1, m + 1, size=p)
        reports.append(check_extreme_sum_rep(
            c, ks, trials=6, seed=int(rng.integers(2**32)),
            tol_abs=tol, tol_rel=tol))
    return reports


def _suite_sv_major(rng, trials, tol):
    reports = []
    for _ in range(trials):
        m, p = _dims(rng)
        a = random_symmetric(rng, m, p)
        b = random_symmetric(rng, m, p)
        reports.append(check_sv_majorization(a, b, tol_abs=tol, tol_rel=tol))
    return reports


def _holder_exponents(rng, n):
    u = rng.dirichlet(np.ones(n))
    u = np.maximum(u, 1e-3)
    u = u / u.sum()
    return 1.0 / u


def _suite_kyfan_prod(rng, trials, tol):
    reports = []
    for _ in range(trials):
        m, p = _dims(rng)
        n = int(rng.integers(2, 4))
        tensors = [random_symmetric(rng, m, p) for _ in range(n)]
        exps = _holder_exponents(rng, n)
        s = float(rng.integers(1, 4))
        k = int(rng.integers(1, m * p + 1))
        reports.append(check_kyfan_product(tensors, exps, s, k,
                                           tol_abs=tol, tol_rel=tol))
    return reports


def _suite_kyfan_sum(rng, trials, tol):
    reports = []
    for _ in range(trials):
        m, p = _dims(rng)
        n = int(rng.integers(1, 5))
        tensors = [random_symmetric(rng, m, p) for _ in range(n)]
        s = float(rng.integers(1, 4))
        k = int(rng.integers(1, m * p + 1))
        reports.append(check_kyfan_sum(tensors, s, k, tol_abs=tol, tol_rel=tol))
    return reports


def random_lie_trotter_pair(rng, m=2, p=2, scale=0.05,
                            min_commutator: float = 0.05):
    """Two small symmetric tensors with a non-degenerate commutator.

    The first-order Trotter error is driven by the commutator; instances where
    it nearly vanishes sit between the exact-commuting regime and the 1/q
    regime, where the doubling ratio is not informative, so they are resampled.
    """
    while True:
        a = random_symmetric(rng, m, p)
        b = random_symmetric(rng, m, p)
        a = a * (scale / max(norms.spectral_norm(a), 1e-12))
        b = b * (scale / max(norms.spectral_norm(b), 1e-12))
        commutator = tcore.tprod(a, b) - tcore.tprod(b, a)
        if norms.spectral_norm(commutator) >= min_commutator * scale * scale:
            return a, b


def _suite_lie_trotter(rng, trials, tol):
    reports = []
    for _ in range(trials):
        a, b = random_lie_trotter_pair(rng)
        reports.append(check_lie_trotter([a, b]))
    return reports


def _random_gauge(rng, m, p) -> GaugeSpec:
    pick = rng.integers(0, 4)
    if pick == 0:
        return GaugeSpec.ky_fan(int(rng.integers(1, m * p + 1)))
    if pick == 1:
        return GaugeSpec.schatten(2.0)
    if pick == 2:
        return GaugeSpec.spectral()
    return GaugeSpec.trace_norm()


def random_tpd_normalized(rng, m, p, top: float = 1.5) -> TTensor:
    """TPD instance rescaled to a unit-order spectrum (keeps exp gauges finite)."""
    c = random_tpd(rng, m, p)
    return c * (top / spectral.lambda_max(c))


def _suite_multivariate(rng, trials, tol):
    reports = []
    for _ in range(trials):
        m, p = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        n = int(rng.integers(2, 4))
        tensors = [random_tpd_normalized(rng, m, p) for _ in range(n)]
        f = FnSpec.power(float(rng.integers(1, 3)))
        g = FnSpec.exp(rate=float(rng.uniform(0.2, 0.8)))
        gauge = _random_gauge(rng, m, p)
        reports.append(check_multivariate_norm_ineq(
            tensors, f, g, gauge, tol_abs=tol, tol_rel=tol))
    return reports


def transfer_fn_family(mode: str) -> tuple[FnSpec, ...]:
    if mode == "arith":
        return (FnSpec.exp(rate=0.5), FnSpec.shifted_relu(1.0), FnSpec.power(2))
    return (FnSpec.exp(rate=0.5), FnSpec.shifted_relu(0.5), FnSpec.power(2))


def random_transfer_instance(rng, mode: str, m: int, p: int, n_atoms: int):
    if mode == "arith":
        atoms = [random_symmetric(rng, m, p) for _ in range(n_atoms)]
    else:
        atoms = [random_tpd(rng, m, p) for _ in range(n_atoms)]
    weights = rng.dirichlet(np.ones(n_atoms))
    weights = np.maximum(weights, 1e-3)
    weights = weights / weights.sum()
    mu = DiscreteMeasure(weights, atoms)
    return average_tensor(mu, mode), mu


def _suite_integral_major(rng, trials, tol):
    reports = []
    for i in range(trials):
        mode = "arith" if i % 2 == 0 else "log"
        m, p = _dims(rng)
        c, mu = random_transfer_instance(rng, mode, m, p, int(rng.integers(2, 5)))
        gauge = _random_gauge(rng, m, p)
        reports.append(check_integral_majorization_transfer(
            c, mu, mode, transfer_fn_family(mode), gauge,
            tol_abs=tol, tol_rel=tol))
    return reports


def _suite_antisym(rng, trials, tol):
    reports = []
    for _ in range(trials):
        m, p = _dims(rng)
        e = TTensor(rng.standard_normal((m, m, p)))
        k = int(rng.integers(1, m * p + 1))
        reports.append(check_antisym_product_identity(e, k))
    return reports


def _suite_holder(rng, trials, tol):
    reports = []
    for _ in range(trials):
        r = int(rng.integers(2, 9))
        n = int(rng.integers(2, 5))
        vectors = [rng.random(r) * 3 for _ in range(n)]
        weights = rng.dirichlet(np.ones(n))
        weights = np.maximum(weights, 1e-3)
        weights = weights / weights.sum()
        pick = rng.integers(0, 2)
        gauge = GaugeSpec.ky_fan(int(rng.integers(1, r + 1))) if pick == 0 \
            else GaugeSpec.schatten(2.0)
        reports.append(norms.holder_gauge_check(vectors, weights, gauge,
                                                tol_abs=tol, tol_rel=tol))
    return reports


SUITES: dict[str, Callable] = {
    "courant-fischer": _suite_courant_fischer,
    "extreme-sum": _suite_extreme_sum,
    "sv-major": _suite_sv_major,
    "kyfan-prod": _suite_kyfan_prod,
    "kyfan-sum": _suite_kyfan_sum,
    "lie-trotter": _suite_lie_trotter,
    "multivariate": _suite_multivariate,
    "integral-major": _suite_integral_major,
    "antisym": _suite_antisym,
    "holder": _suite_holder,
}


def run_suite(name: str, seed: int = 0, trials: int = 200,
              tol: float = 1e-8) -> CheckReport:
    """Run a named randomized suite and aggregate its reports."""
    if name not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    rng = np.random.default_rng(seed)
    reports = SUITES[name](rng, trials, tol)
    agg = combine(name, reports)
    agg.witness.setdefault("seed", seed)
    return agg
