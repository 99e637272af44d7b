"""Dense third-order tensors and the spatial-domain T-product algebra.

A tensor of shape ``m x n x p`` is a stack of ``p`` frontal slices, each an
``m x n`` matrix.  The T-product of two tensors is the matrix product of the
block-circulant expansion of the left factor with the slice stack of the right
factor, folded back into a tensor.  Products are evaluated in the Fourier
domain (slice-wise matrix products after an FFT along the tube axis), which is
algebraically identical and cheaper by a factor of ``p``; :func:`bcirc` is kept
as the explicit matrix representation for oracles and cross-checks.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from .errors import ResourceError, ShapeError

# Largest bcirc matrix (mp * np entries) materialised without complaint.
BCIRC_ELEMENT_BUDGET = 1 << 23

# Relative imaginary residue below which an inverse FFT result is truncated
# back to the real field.
REAL_TRUNCATION_RTOL = 1e-10


class TTensor:
    """Immutable dense third-order tensor.

    Entries are held as a read-only ``(m, n, p)`` array of ``float64`` or
    ``complex128``; the scalar field tag is carried by the dtype.  All
    operations are pure, so instances can be shared freely across threads.
    """

    __slots__ = ("data",)

    def __init__(self, data, copy: bool = True):
        arr = np.array(data, copy=copy)
        if arr.ndim != 3:
            raise ShapeError(f"expected a 3-d array, got ndim={arr.ndim}")
        if arr.size == 0:
            raise ShapeError("tensor dimensions must be positive")
        if np.iscomplexobj(arr):
            arr = arr.astype(np.complex128, copy=False)
        else:
            arr = arr.astype(np.float64, copy=False)
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TTensor is immutable")

    # -- structure ---------------------------------------------------------

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def p(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @property
    def field(self) -> str:
        return "complex" if np.iscomplexobj(self.data) else "real"

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.data)

    def slice(self, k: int) -> np.ndarray:
        """Frontal slice ``k`` (0-based) as an ``m x n`` array copy."""
        return np.array(self.data[:, :, k])

    def __repr__(self):
        return f"TTensor(shape={self.shape}, field={self.field})"

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "TTensor") -> "TTensor":
        _require_same_shape(self, other)
        return TTensor(self.data + other.data, copy=False)

    def __sub__(self, other: "TTensor") -> "TTensor":
        _require_same_shape(self, other)
        return TTensor(self.data - other.data, copy=False)

    def __neg__(self) -> "TTensor":
        return TTensor(-self.data, copy=False)

    def __mul__(self, scalar) -> "TTensor":
        return TTensor(self.data * scalar, copy=False)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data)))


def _require_same_shape(a: TTensor, b: TTensor):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def zeros(m: int, n: int, p: int, field: str = "real") -> TTensor:
    dtype = np.complex128 if field == "complex" else np.float64
    return TTensor(np.zeros((m, n, p), dtype=dtype), copy=False)


def identity(m: int, p: int) -> TTensor:
    """Identity tensor: first slice is ``I_m``, all other slices are zero."""
    if m < 1 or p < 1:
        raise ShapeError("identity requires m, p >= 1")
    data = np.zeros((m, m, p))
    data[:, :, 0] = np.eye(m)
    return TTensor(data, copy=False)


# -- block-circulant representation ---------------------------------------


def bcirc(t: TTensor, budget: int | None = None) -> np.ndarray:
    """Block-circulant matrix of ``t``.

    Block column 0 stacks the frontal slices in order; each further block
    column is the cyclic downward shift of the previous one, so block
    ``(i, j)`` holds slice ``(i - j) mod p``.

    Returns
    -------
    ndarray of shape ``(m*p, n*p)``, same scalar field as ``t``.
    """
    m, n, p = t.shape
    limit = BCIRC_ELEMENT_BUDGET if budget is None else budget
    if m * p * n * p > limit:
        raise ResourceError(
            f"bcirc of shape ({m * p}, {n * p}) exceeds element budget {limit}"
        )
    out = np.zeros((m * p, n * p), dtype=t.data.dtype)
    for i in range(p):
        for j in range(p):
            out[i * m:(i + 1) * m, j * n:(j + 1) * n] = t.data[:, :, (i - j) % p]
    return out


def bcirc_inverse(mat: np.ndarray, m: int, n: int, p: int) -> TTensor:
    """Read a tensor back from its block-circulant matrix.

    Only the first block column is consulted; the caller is responsible for
    the input actually being block-circulant.
    """
    mat = np.asarray(mat)
    if mat.shape != (m * p, n * p):
        raise ShapeError(f"expected shape {(m * p, n * p)}, got {mat.shape}")
    data = np.empty((m, n, p), dtype=mat.dtype)
    for i in range(p):
        data[:, :, i] = mat[i * m:(i + 1) * m, :n]
    return TTensor(data, copy=False)


def unfold(t: TTensor) -> np.ndarray:
    """Stack the frontal slices into an ``(m*p, n)`` matrix."""
    m, n, p = t.shape
    # data is (m, n, p); moveaxis -> (p, m, n); reshape stacks slices in order
    return np.ascontiguousarray(np.moveaxis(t.data, 2, 0)).reshape(m * p, n)


def fold(mat: np.ndarray, m: int) -> TTensor:
    """Inverse of :func:`unfold`; rejects a row count that is not a multiple of ``m``."""
    mat = np.asarray(mat)
    if mat.ndim != 2:
        raise ShapeError("fold expects a matrix")
    rows, n = mat.shape
    if m < 1 or rows % m != 0:
        raise ShapeError(f"row count {rows} is not a positive multiple of m={m}")
    p = rows // m
    return TTensor(np.moveaxis(mat.reshape(p, m, n), 0, 2), copy=False)


# -- Fourier-domain helpers -------------------------------------------------


def _ifft_with_field(freq: np.ndarray, want_real: bool, op: str) -> TTensor:
    """Inverse FFT along tubes with truncation of roundoff imaginary residue.

    When both operands of an algebraic operation were real, the exact result
    is real; any imaginary content is FFT roundoff and is dropped as long as
    it stays below ``REAL_TRUNCATION_RTOL`` of the result scale.  Larger
    residue promotes the result to the complex field and emits a warning
    rather than silently corrupting real algebra.
    """
    spatial = np.fft.ifft(freq, axis=2)
    if not want_real:
        return TTensor(spatial, copy=False)
    scale = max(1.0, float(np.max(np.abs(spatial))))
    residue = float(np.max(np.abs(spatial.imag)))
    if residue <= REAL_TRUNCATION_RTOL * scale:
        return TTensor(np.ascontiguousarray(spatial.real), copy=False)
    warnings.warn(
        f"{op}: imaginary residue {residue:.3e} above truncation threshold; "
        "promoting result to the complex field",
        RuntimeWarning,
        stacklevel=3,
    )
    return TTensor(spatial, copy=False)


def tprod(c: TTensor, d: TTensor) -> TTensor:
    """T-product ``c * d``.

    Equals ``fold(bcirc(c) @ unfold(d))``; computed as slice-wise matrix
    products in the Fourier domain.  A real pair yields a real tensor.

    Parameters
    ----------
    c : TTensor of shape (m, n, p)
    d : TTensor of shape (n, l, p)

    Returns
    -------
    TTensor of shape (m, l, p)
    """
    if c.n != d.m or c.p != d.p:
        raise ShapeError(f"tprod shape mismatch: {c.shape} * {d.shape}")
    cf = np.fft.fft(c.data, axis=2)
    df = np.fft.fft(d.data, axis=2)
    pf = np.einsum("ikp,kjp->ijp", cf, df)
    return _ifft_with_field(pf, c.is_real and d.is_real, "tprod")


def transpose(t: TTensor) -> TTensor:
    """Tensor transpose: transpose every slice and reverse the order of slices 2..p.

    Satisfies ``bcirc(transpose(t)) == bcirc(t).T`` and is an involution.
    """
    m, n, p = t.shape
    data = np.empty((n, m, p), dtype=t.data.dtype)
    data[:, :, 0] = t.data[:, :, 0].T
    for k in range(1, p):
        data[:, :, k] = t.data[:, :, p - k].T
    return TTensor(data, copy=False)


def htranspose(t: TTensor) -> TTensor:
    """Hermitian transpose: like :func:`transpose` with entrywise conjugation."""
    m, n, p = t.shape
    data = np.empty((n, m, p), dtype=t.data.dtype)
    data[:, :, 0] = t.data[:, :, 0].conj().T
    for k in range(1, p):
        data[:, :, k] = t.data[:, :, p - k].conj().T
    return TTensor(data, copy=False)


def inner(c: TTensor, d: TTensor):
    """Inner product ``sum conj(c_ijk) d_ijk``.

    Returns a float for a real pair and a complex scalar otherwise.  Equals
    ``<bcirc(c), bcirc(d)> / p`` since every entry appears ``p`` times in the
    block-circulant expansion.
    """
    _require_same_shape(c, d)
    val = np.vdot(c.data, d.data)
    return complex(val) if np.iscomplexobj(val) else float(val)


def frobenius_norm(t: TTensor) -> float:
    return float(np.linalg.norm(t.data))


def is_symmetric(t: TTensor, rtol: float = 1e-8) -> bool:
    """True if ``htranspose(t) == t`` up to ``rtol`` of the entry scale."""
    if t.m != t.n:
        return False
    ht = htranspose(t)
    scale = max(1.0, t.max_abs())
    return float(np.max(np.abs(ht.data - t.data))) <= rtol * scale


# -- ttj file format ---------------------------------------------------------
#
# JSON object {"m":int,"n":int,"p":int,"field":"real"|"complex","data":[...]}
# with data flattened in (slice, row, col) order; complex entries are [re, im]
# pairs.  An optional "domain":"frequency" key marks a frequency-domain block
# stack (see tprod.spectral).


def to_ttj_dict(t: TTensor) -> dict:
    m, n, p = t.shape
    entries = np.moveaxis(t.data, 2, 0).reshape(-1)  # (slice, row, col) order
    if t.is_real:
        data = [float(v) for v in entries]
    else:
        data = [[float(v.real), float(v.imag)] for v in entries]
    return {"m": m, "n": n, "p": p, "field": t.field, "data": data}


def from_ttj_dict(obj: dict) -> TTensor:
    try:
        m, n, p = int(obj["m"]), int(obj["n"]), int(obj["p"])
        field = obj["field"]
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ttj object: missing {exc}") from None
    if field not in ("real", "complex"):
        raise ValueError(f"malformed ttj object: bad field tag {field!r}")
    if len(data) != m * n * p:
        raise ValueError(
            f"malformed ttj object: {len(data)} entries for dims {m}x{n}x{p}"
        )
    if field == "real":
        flat = np.array(data, dtype=np.float64)
    else:
        flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    return TTensor(np.moveaxis(flat.reshape(p, m, n), 0, 2), copy=False)


def save_ttj(t: TTensor, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_ttj_dict(t), fh)


def load_ttj(path) -> TTensor:
    with open(path) as fh:
        return from_ttj_dict(json.load(fh))
