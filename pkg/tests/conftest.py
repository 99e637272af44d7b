"""Shared oracle helpers: independent reference implementations.

Everything here is built directly from definitions (index shuffles, dense
numpy factorizations) and never routes through the package's own FFT paths,
so tests compare two genuinely different computations.
"""

import numpy as np
import pytest

from tprod.tcore import TTensor, transpose


def naive_bcirc(t: TTensor) -> np.ndarray:
    """Block-circulant matrix assembled entry by entry from the definition."""
    m, n, p = t.shape
    out = np.zeros((m * p, n * p), dtype=complex if not t.is_real else float)
    for i in range(p):
        for j in range(p):
            out[i * m:(i + 1) * m, j * n:(j + 1) * n] = t.data[:, :, (i - j) % p]
    return out


def naive_unfold(t: TTensor) -> np.ndarray:
    m, n, p = t.shape
    out = np.zeros((m * p, n), dtype=t.data.dtype)
    for k in range(p):
        out[k * m:(k + 1) * m, :] = t.data[:, :, k]
    return out


def naive_fold(mat: np.ndarray, m: int, n: int, p: int) -> np.ndarray:
    data = np.zeros((m, n, p), dtype=mat.dtype)
    for k in range(p):
        data[:, :, k] = mat[k * m:(k + 1) * m, :]
    return data


def naive_tprod(c: TTensor, d: TTensor) -> np.ndarray:
    """fold(bcirc(c) @ unfold(d)) evaluated with dense matrices."""
    prod = naive_bcirc(c) @ naive_unfold(d)
    return naive_fold(prod, c.m, d.n, c.p)


def dft_blocks(t: TTensor) -> np.ndarray:
    """Frequency blocks via explicit similarity with the unitary DFT matrix."""
    m, n, p = t.shape
    f = np.fft.fft(np.eye(p)) / np.sqrt(p)
    big = np.kron(f, np.eye(m)) @ naive_bcirc(t) @ np.kron(f, np.eye(m)).conj().T
    return np.stack([big[i * m:(i + 1) * m, i * n:(i + 1) * n] for i in range(p)])


def random_tensor(rng, m, n, p, complex_entries=False) -> TTensor:
    data = rng.standard_normal((m, n, p))
    if complex_entries:
        data = data + 1j * rng.standard_normal((m, n, p))
    return TTensor(data)


def random_symmetric_tensor(rng, m, p) -> TTensor:
    t = random_tensor(rng, m, m, p)
    return (t + transpose(t)) * 0.5


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
