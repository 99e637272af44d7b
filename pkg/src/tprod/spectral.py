"""Fourier-domain block diagonalization and Hermitian spectral calculus.

The block-circulant matrix of an ``m x n x p`` tensor is block-diagonalized by
the unitary DFT along tubes: the ``p`` diagonal blocks are the FFT of the
frontal slices.  Everything spectral lives on those blocks: T-eigenvalues and
T-singular values are block eigen/singular values, tensor functions are
blockwise Hermitian functional calculus, trace/determinant and the Loewner
order reduce to block quantities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import tcore
from .errors import DomainError, NumericError, PreconditionError, ShapeError
from .tcore import TTensor

# Relative block asymmetry below which a spectrum is silently hermitized;
# anything larger is treated as a violated symmetry precondition.
HERMITIAN_RTOL = 1e-8


class BlockSpectrum:
    """Frequency-domain representation: ``p`` complex ``m x m`` blocks.

    Block ``i`` is the ``i``-th diagonal block of ``(F_p (x) I_m) bcirc(T)
    (F_p (x) I_m)^H`` with the unitary DFT matrix ``F_p``, i.e. the FFT of the
    frontal slices along the tube axis.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks, copy: bool = True):
        arr = np.array(blocks, dtype=np.complex128, copy=copy)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ShapeError(f"expected (p, m, m) blocks, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("spectrum blocks must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "blocks", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BlockSpectrum is immutable")

    @property
    def p(self) -> int:
        return self.blocks.shape[0]

    @property
    def m(self) -> int:
        return self.blocks.shape[1]

    def __add__(self, other: "BlockSpectrum") -> "BlockSpectrum":
        if self.blocks.shape != other.blocks.shape:
            raise ShapeError("spectrum shape mismatch")
        return BlockSpectrum(self.blocks + other.blocks, copy=False)

    def __mul__(self, scalar) -> "BlockSpectrum":
        return BlockSpectrum(self.blocks * scalar, copy=False)

    __rmul__ = __mul__

    def __repr__(self):
        return f"BlockSpectrum(m={self.m}, p={self.p})"

    def to_ttj_dict(self) -> dict:
        obj = tcore.to_ttj_dict(TTensor(np.moveaxis(self.blocks, 0, 2), copy=False))
        obj["domain"] = "frequency"
        return obj

    @classmethod
    def from_ttj_dict(cls, obj: dict) -> "BlockSpectrum":
        if obj.get("domain") != "frequency":
            raise ValueError("ttj object does not carry a frequency-domain stack")
        t = tcore.from_ttj_dict({k: v for k, v in obj.items() if k != "domain"})
        if t.m != t.n:
            raise ShapeError("frequency blocks must be square")
        data = t.data if np.iscomplexobj(t.data) else t.data.astype(np.complex128)
        return cls(np.moveaxis(data, 2, 0), copy=False)


def to_spectrum(t: TTensor) -> BlockSpectrum:
    """FFT of the frontal slices along tubes; requires square slices."""
    if t.m != t.n:
        raise ShapeError(f"square slices required, got {t.m}x{t.n}")
    freq = np.fft.fft(t.data, axis=2)
    return BlockSpectrum(np.moveaxis(freq, 2, 0), copy=False)


def from_spectrum(s: BlockSpectrum, field: str = "auto") -> TTensor:
    """Inverse FFT back to the spatial domain.

    ``field="auto"`` truncates imaginary residue below 1e-10 of scale (the
    conjugate-symmetric case); ``"complex"`` keeps everything; ``"real"``
    insists and raises :class:`NumericError` on genuine imaginary content.
    """
    freq = np.moveaxis(s.blocks, 0, 2)
    spatial = np.fft.ifft(freq, axis=2)
    if field == "complex":
        return TTensor(spatial, copy=False)
    scale = max(1.0, float(np.max(np.abs(spatial))))
    residue = float(np.max(np.abs(spatial.imag)))
    if residue <= tcore.REAL_TRUNCATION_RTOL * scale:
        return TTensor(np.ascontiguousarray(spatial.real), copy=False)
    if field == "real":
        raise NumericError(f"imaginary residue {residue:.3e} too large for a real tensor")
    return TTensor(spatial, copy=False)


def hermitian_blocks(x, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Blocks of ``x`` (tensor or spectrum), checked and symmetrized.

    Raw asymmetry above ``rtol`` of the block scale is a violated symmetry
    precondition; below it the blocks are replaced by ``(B + B^H)/2`` so that
    eigensolvers see exactly Hermitian input.
    """
    if isinstance(x, TTensor):
        x = to_spectrum(x)
    blocks = x.blocks
    scale = max(1.0, float(np.max(np.abs(blocks))))
    herm = np.conj(np.swapaxes(blocks, 1, 2))
    asym = float(np.max(np.abs(blocks - herm)))
    if asym > rtol * scale:
        raise PreconditionError(
            f"blocks are not Hermitian: asymmetry {asym:.3e} exceeds {rtol:.1e} * scale"
        )
    return (blocks + herm) / 2.0


def _as_blocks(x) -> np.ndarray:
    """Blocks of ``x`` without any symmetry requirement."""
    if isinstance(x, TTensor):
        return to_spectrum(x).blocks
    return x.blocks


@dataclass(frozen=True)
class TEigenSystem:
    """Sorted T-eigenvalues or T-singular values with block provenance.

    ``values`` is descending; ``blocks[i]``/``ranks[i]`` give the frequency
    block and the within-block rank (0-based, descending within the block)
    the ``i``-th value came from.  Ties are broken by (block, rank).
    """

    values: np.ndarray
    blocks: np.ndarray
    ranks: np.ndarray
    kind: str  # "eigen" | "singular"

    def __len__(self):
        return len(self.values)

    @property
    def max_value(self) -> float:
        return float(self.values[0])

    @property
    def min_value(self) -> float:
        return float(self.values[-1])

    def top(self, k: int) -> np.ndarray:
        return self.values[:k]


def _assemble(per_block: np.ndarray, kind: str) -> TEigenSystem:
    """Sort per-block descending value rows into a global eigen system."""
    p, m = per_block.shape
    vals = per_block.reshape(-1)
    blk = np.repeat(np.arange(p), m)
    rnk = np.tile(np.arange(m), p)
    order = np.lexsort((rnk, blk, -vals))
    arr = vals[order]
    arr.setflags(write=False)
    return TEigenSystem(values=arr, blocks=blk[order], ranks=rnk[order], kind=kind)


def t_eigenvalues(x) -> TEigenSystem:
    """T-eigenvalues of a symmetric tensor (block eigenvalues), sorted descending."""
    blocks = hermitian_blocks(x)
    w = np.linalg.eigvalsh(blocks)  # ascending per block
    return _assemble(w[:, ::-1], "eigen")


def t_singular_values(x) -> TEigenSystem:
    """T-singular values of a square tensor (block singular values), sorted descending."""
    blocks = _as_blocks(x)
    s = np.linalg.svd(blocks, compute_uv=False)  # descending per block
    return _assemble(s, "singular")


def lambda_max(x) -> float:
    return t_eigenvalues(x).max_value


def lambda_min(x) -> float:
    return t_eigenvalues(x).min_value


def spectral_radius(x) -> float:
    ev = t_eigenvalues(x)
    return max(abs(ev.max_value), abs(ev.min_value))


# -- tensor functions ---------------------------------------------------------


@dataclass(frozen=True)
class FnSpec:
    """A scalar function lifted to symmetric tensors through the spectrum.

    ``guard`` is the minimum-eigenvalue threshold below which log and negative
    powers refuse to evaluate.
    """

    kind: str
    rate: float = 1.0            # exp(rate * x)
    alpha: float = 1.0           # power exponent
    z: complex = 1.0 + 0.0j      # complex power exponent
    coeffs: tuple = ()           # polynomial a_0..a_n
    s: float = 1.0               # outer power of the polynomial
    c: float = 0.0               # shifted relu offset
    guard: float = 1e-12

    @classmethod
    def exp(cls, rate: float = 1.0) -> "FnSpec":
        return cls(kind="exp", rate=rate)

    @classmethod
    def log(cls, guard: float = 1e-12) -> "FnSpec":
        return cls(kind="log", guard=guard)

    @classmethod
    def power(cls, alpha: float, guard: float = 1e-12) -> "FnSpec":
        return cls(kind="power", alpha=alpha, guard=guard)

    @classmethod
    def complex_power(cls, z: complex) -> "FnSpec":
        return cls(kind="complex_power", z=complex(z))

    @classmethod
    def polynomial(cls, coeffs, s: float = 1.0) -> "FnSpec":
        if s < 1:
            raise ValueError("polynomial outer power must satisfy s >= 1")
        return cls(kind="polynomial", coeffs=tuple(float(a) for a in coeffs), s=float(s))

    @classmethod
    def shifted_relu(cls, c: float) -> "FnSpec":
        return cls(kind="shifted_relu", c=float(c))

    @property
    def degree(self) -> int:
        """Polynomial degree n (trailing zero coefficients ignored)."""
        if self.kind != "polynomial":
            raise ValueError("degree is only defined for polynomials")
        n = len(self.coeffs) - 1
        while n > 0 and self.coeffs[n] == 0.0:
            n -= 1
        return n

    def _check_domain(self, w: np.ndarray):
        needs_positive = self.kind == "log" or (self.kind == "power" and self.alpha < 0)
        if needs_positive and np.min(w) <= self.guard:
            rows = np.atleast_2d(w)
            i = int(np.argmin(np.min(rows, axis=1)))
            raise DomainError(
                f"{self.kind} requires eigenvalues > {self.guard:.1e}; "
                f"block {i} has minimum {np.min(rows[i]):.3e}"
            )

    def apply_scalar(self, w: np.ndarray) -> np.ndarray:
        """Evaluate the scalar function on an array of (real) eigenvalues."""
        w = np.asarray(w, dtype=np.float64)
        if self.kind == "exp":
            return np.exp(self.rate * w)
        if self.kind == "log":
            return np.log(w)
        if self.kind == "power":
            if float(self.alpha).is_integer() or self.alpha < 0:
                return np.power(w, self.alpha)
            # fractional power: clamp roundoff negatives within the guard
            if np.min(w) < -self.guard:
                raise DomainError(
                    f"power({self.alpha}) needs a nonnegative spectrum; min {np.min(w):.3e}"
                )
            return np.power(np.maximum(w, 0.0), self.alpha)
        if self.kind == "complex_power":
            if np.min(w) <= self.guard:
                raise DomainError(
                    f"complex_power requires eigenvalues > {self.guard:.1e}; min {np.min(w):.3e}"
                )
            return np.exp(self.z * np.log(w.astype(np.complex128)))
        if self.kind == "polynomial":
            acc = np.zeros_like(w)
            for a in reversed(self.coeffs):
                acc = acc * w + a
            return np.power(acc, self.s) if self.s != 1.0 else acc
        if self.kind == "shifted_relu":
            return np.maximum(w + self.c, 0.0)
        raise ValueError(f"unknown function kind {self.kind!r}")


def tensor_fn(x, f: FnSpec):
    """Blockwise Hermitian functional calculus ``block -> U f(L) U^H``.

    The spectral mapping property holds: the eigenvalues of the result are
    ``f`` of the eigenvalues of ``x``.  Returns the same carrier type as the
    input, except that ``complex_power`` always returns a
    :class:`BlockSpectrum` (its blocks are no longer Hermitian).
    """
    blocks = hermitian_blocks(x)
    w, v = np.linalg.eigh(blocks)
    f._check_domain(w)
    fw = f.apply_scalar(w)
    out = np.einsum("pij,pj,pkj->pik", v, fw, v.conj())
    if f.kind != "complex_power":
        # exact Hermitian symmetrization kills roundoff skew
        out = (out + np.conj(np.swapaxes(out, 1, 2))) / 2.0
    spec = BlockSpectrum(out, copy=False)
    if f.kind == "complex_power" or not isinstance(x, TTensor):
        return spec
    return from_spectrum(spec)


# -- trace, determinant, Loewner order ---------------------------------------


def trace(x):
    """Sum of all f-diagonal entries (every slice's diagonal).

    Linear and invariant under cyclic T-products; equals the trace of the
    first frequency block.
    """
    if isinstance(x, TTensor):
        if x.m != x.n:
            raise ShapeError("trace requires square slices")
        val = np.trace(x.data, axis1=0, axis2=1).sum()
        return float(val) if x.is_real else complex(val)
    return _real_if_close(np.trace(x.blocks[0]))


def spectral_trace(x):
    """Sum of all T-eigenvalues, i.e. the sum of all block traces.

    Distinct from :func:`trace` on generic inputs: it equals ``p`` times the
    diagonal sum of the first slice.
    """
    if isinstance(x, TTensor):
        if x.m != x.n:
            raise ShapeError("spectral_trace requires square slices")
        val = x.p * np.trace(x.data[:, :, 0])
        return float(val) if x.is_real else complex(val)
    return _real_if_close(np.einsum("pii->", x.blocks))


def _real_if_close(val, tol=1e-10):
    val = complex(val)
    if abs(val.imag) <= tol * max(1.0, abs(val)):
        return val.real
    return val


def det(x) -> float:
    """Product of all T-eigenvalues of a symmetric tensor; equals det(bcirc)."""
    ev = t_eigenvalues(x)
    return float(np.prod(ev.values))


class Loewner(enum.Enum):
    GE = "A>=B"
    LE = "B>=A"
    INCOMPARABLE = "incomparable"


def loewner_cmp(a, b, tol: float = 1e-9) -> Loewner:
    """Compare two symmetric tensors in the Loewner (TPSD) order.

    ``A >= B`` iff the minimum T-eigenvalue of ``A - B`` is at least
    ``-tol * scale``.  Equal inputs report ``GE``.
    """
    da = hermitian_blocks(a)
    db = hermitian_blocks(b)
    if da.shape != db.shape:
        raise ShapeError("loewner_cmp operands must share dimensions")
    w = np.linalg.eigvalsh(da - db)
    lo, hi = float(w.min()), float(w.max())
    scale = max(1.0, abs(lo), abs(hi))
    if lo >= -tol * scale:
        return Loewner.GE
    if hi <= tol * scale:
        return Loewner.LE
    return Loewner.INCOMPARABLE


def is_tpsd(x, tol: float = 1e-9) -> bool:
    w = np.linalg.eigvalsh(hermitian_blocks(x))
    lo = float(w.min())
    return lo >= -tol * max(1.0, float(np.abs(w).max()))


def is_tpd(x, strict_margin: float = 0.0) -> bool:
    return float(np.linalg.eigvalsh(hermitian_blocks(x)).min()) > strict_margin


# -- symmetric factorization --------------------------------------------------


def sym_factorize(t: TTensor) -> tuple[TTensor, TTensor]:
    """Factor a real symmetric tensor as ``t = transpose(U) * D * U``.

    ``U`` is orthogonal (``transpose(U) * U`` is the identity) and ``D`` is
    f-diagonal (every frontal slice diagonal), carrying the T-eigenvalues
    descending within each frequency block.  Eigenvector blocks at conjugate
    frequency pairs are tied together so both factors come out real.
    """
    if not t.is_real:
        raise PreconditionError("sym_factorize expects a real symmetric tensor")
    if not tcore.is_symmetric(t):
        raise PreconditionError("sym_factorize expects a symmetric tensor")
    blocks = hermitian_blocks(t)
    p, m = blocks.shape[0], blocks.shape[1]
    u_blocks = np.empty_like(blocks)
    d_blocks = np.zeros_like(blocks)
    try:
        for i in range(p):
            j = (p - i) % p
            if i > j:
                continue
            w, v = np.linalg.eigh(blocks[i])
            w, v = w[::-1], v[:, ::-1]
            u_blocks[i] = v.conj().T
            d_blocks[i, np.arange(m), np.arange(m)] = w
            if j != i:
                u_blocks[j] = v.T  # conj of V^H
                d_blocks[j, np.arange(m), np.arange(m)] = w
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"block eigendecomposition failed: {exc}") from exc
    u = from_spectrum(BlockSpectrum(u_blocks, copy=False))
    d = from_spectrum(BlockSpectrum(d_blocks, copy=False))
    return u, d
