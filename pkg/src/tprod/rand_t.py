"""Sampling of random symmetric tensors and their moment-envelope checks.

The random model draws the ``p`` frequency blocks as independent Hermitian
Gaussian matrices: real diagonal entries N(0, 1/m), real and imaginary parts
of the off-diagonal entries N(0, 1/(2m)).  ``paper_literal`` mode returns the
frequency-domain blocks as drawn; ``real_tensor`` mode ties conjugate
frequency pairs together (and keeps self-paired blocks real symmetric) so the
inverse FFT is a real symmetric tensor.

Randomness is fully specified so results are reproducible across thread
counts and re-runs: the bit generator is Philox4x64-10 keyed by
``(seed, stream)``; one logical draw consumes normals produced by the
Box-Muller transform (no ziggurat) from consecutive uniforms of that stream.
Bit-exactness across languages is not promised; the moment tests are the
contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import ParameterError
from .report import CheckReport
from .spectral import BlockSpectrum, FnSpec, Loewner

MODES = ("paper_literal", "real_tensor")


@dataclass(frozen=True)
class RandomModel:
    m: int
    p: int
    mode: str = "paper_literal"
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.p < 1:
            raise ParameterError("dimensions must be >= 1")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}")

    def to_dict(self) -> dict:
        return {"m": self.m, "p": self.p, "mode": self.mode, "seed": self.seed}

    @classmethod
    def from_dict(cls, obj: dict) -> "RandomModel":
        return cls(m=int(obj["m"]), p=int(obj["p"]),
                   mode=obj.get("mode", "paper_literal"),
                   seed=int(obj.get("seed", 0)))


def substream(seed: int, stream: int) -> np.random.Generator:
    """Philox generator for one deterministic substream of a master seed."""
    key = np.array([np.uint64(seed & (2**64 - 1)), np.uint64(stream & (2**64 - 1))])
    return np.random.Generator(np.random.Philox(key=key))


def _normals(gen: np.random.Generator, n: int) -> np.ndarray:
    """Box-Muller normals from consecutive uniforms of the stream."""
    pairs = (n + 1) // 2
    u = gen.random(size=(2, pairs))
    r = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1-u in (0,1], log never hits -inf
    ang = 2.0 * np.pi * u[1]
    z = np.concatenate([r * np.cos(ang), r * np.sin(ang)])
    return z[:n]


class RandomTensorSampler:
    """Sequential draws from one substream of the model's seed."""

    def __init__(self, model: RandomModel, stream: int = 0):
        self.model = model
        self._gen = substream(model.seed, stream)

    def draw_blocks(self) -> np.ndarray:
        m, p = self.model.m, self.model.p
        sd_diag = 1.0 / math.sqrt(m)
        sd_off = 1.0 / math.sqrt(2 * m)
        iu = np.triu_indices(m, k=1)
        n_off = iu[0].size
        blocks = np.zeros((p, m, m), dtype=np.complex128)

        def hermitian_block():
            b = np.zeros((m, m), dtype=np.complex128)
            b[np.arange(m), np.arange(m)] = _normals(self._gen, m) * sd_diag
            re = _normals(self._gen, n_off) * sd_off
            im = _normals(self._gen, n_off) * sd_off
            b[iu] = re + 1j * im
            b[(iu[1], iu[0])] = re - 1j * im
            return b

        def real_symmetric_block():
            b = np.zeros((m, m), dtype=np.complex128)
            b[np.arange(m), np.arange(m)] = _normals(self._gen, m) * sd_diag
            re = _normals(self._gen, n_off) * sd_off
            b[iu] = re
            b[(iu[1], iu[0])] = re
            return b

        if self.model.mode == "paper_literal":
            for i in range(p):
                blocks[i] = hermitian_block()
            return blocks
        for i in range(p // 2 + 1):
            j = (p - i) % p
            if i == j:
                blocks[i] = real_symmetric_block()
            else:
                blocks[i] = hermitian_block()
                blocks[j] = blocks[i].conj()
        return blocks

    def draw(self):
        blocks = self.draw_blocks()
        spec = BlockSpectrum(blocks, copy=False)
        if self.model.mode == "real_tensor":
            return spectral.from_spectrum(spec)
        return spec


def sample_tensor(model: RandomModel, stream: int = 0):
    """One-shot draw: the first sample of the given substream.

    Returns a :class:`BlockSpectrum` in ``paper_literal`` mode and a real
    symmetric :class:`TTensor` in ``real_tensor`` mode.
    """
    return RandomTensorSampler(model, stream).draw()


# -- sub-exponential envelope ---------------------------------------------------


@dataclass(frozen=True)
class Envelope:
    """Moment envelope a * identity: X^q <= q! a^2 / 2 for q = 2..p_max."""

    a: float
    p_max: int = 8

    def __post_init__(self):
        if self.a <= 0:
            raise ParameterError("envelope scale must be positive")
        if self.p_max < 2:
            raise ParameterError("p_max must be >= 2")


def required_scale(radius: float, p_max: int = 8) -> float:
    """Smallest a such that r^q <= q! a^2 / 2 holds for q = 2..p_max."""
    return max(math.sqrt(2.0 * radius**q / math.factorial(q)) for q in range(2, p_max + 1))


def check_subexp_domination(x, env: Envelope, tol: float = 1e-12) -> CheckReport:
    """Scalar form of the moment domination: max |eigenvalue|^q <= q! a^2 / 2."""
    r = spectral.spectral_radius(x)
    margins = []
    worst_q = 2
    for q in range(2, env.p_max + 1):
        bound = math.factorial(q) * env.a**2 / 2.0
        margin = bound - r**q
        if not margins or margin < min(margins):
            worst_q = q
        margins.append(margin)
    worst = float(min(margins))
    return CheckReport(
        name="subexp_domination",
        trials=len(margins),
        passes=sum(1 for mg in margins if mg >= -tol),
        worst_margin=worst,
        tol=tol,
        witness={"radius": r, "a": env.a, "worst_q": worst_q},
    )


def calibrate_envelope(samples, p_max: int = 8, floor: float = 1e-12) -> Envelope:
    """Smallest envelope dominating every sample, with a positive floor."""
    if not samples:
        raise ParameterError("calibrate_envelope needs at least one sample")
    radii = [spectral.spectral_radius(x) for x in samples]
    return calibrate_envelope_from_radii(radii, p_max, floor)


def calibrate_envelope_from_radii(radii, p_max: int = 8,
                                  floor: float = 1e-12) -> Envelope:
    if len(radii) == 0:
        raise ParameterError("calibrate_envelope needs at least one radius")
    a = max(required_scale(float(r), p_max) for r in radii)
    return Envelope(a=max(a, floor), p_max=p_max)


# -- polynomial/exponential ordering hypothesis ----------------------------------


def check_g_exp_condition(x_sum, g: FnSpec, t: float,
                          tol: float = 1e-9) -> CheckReport:
    """Loewner comparison g(exp(t X)) >= exp(t g(X)) for a polynomial g."""
    if g.kind != "polynomial":
        raise ParameterError("condition is defined for polynomial g")
    if t <= 0:
        raise ParameterError("t must be positive")
    lhs = spectral.tensor_fn(spectral.tensor_fn(x_sum * t, FnSpec.exp()), g)
    rhs = spectral.tensor_fn(spectral.tensor_fn(x_sum, g) * t, FnSpec.exp())
    diff_min = float(np.linalg.eigvalsh(
        spectral.hermitian_blocks(lhs) - spectral.hermitian_blocks(rhs)
    ).min())
    verdict = spectral.loewner_cmp(lhs, rhs, tol=tol)
    ok = verdict is Loewner.GE
    return CheckReport(
        name="g_exp_condition",
        trials=1,
        passes=1 if ok else 0,
        worst_margin=diff_min,
        tol=tol,
        witness={"t": t, "order": verdict.value},
    )
