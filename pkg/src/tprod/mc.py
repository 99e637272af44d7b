"""Monte Carlo tail estimation for sums of random tensors vs. evaluated bounds.

One experiment draws ``n_trials`` sums of ``n_sum`` independent random
tensors, records a scalar statistic per trial (a Ky Fan norm of a polynomial
of the sum, or an extreme eigenvalue), and compares the empirical tail at each
level theta against the corresponding Bernstein-type bound.  All randomness is
derived from (seed, stream) pairs, so reports are byte-identical across runs
and thread counts.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sp_stats

from . import bounds, rand_t, spectral
from .errors import ParameterError
from .rand_t import Envelope, RandomModel, RandomTensorSampler
from .spectral import FnSpec

# Stream id layout: one block for the calibration pre-pass, one per trial.
CALIB_STREAM_BASE = 1 << 40
TRIAL_STREAM_BASE = 1 << 41

STATISTICS = ("kyfan", "eigen_max", "eigen_min")


class ConfigError(ValueError):
    """Malformed experiment config; carries a JSON pointer to the bad field."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@dataclass
class ExperimentConfig:
    model: RandomModel
    n_sum: int
    g: FnSpec
    k: int
    thetas: tuple
    n_trials: int
    confidence: float = 0.99
    statistic: str = "kyfan"
    c1: float = 1.0
    c2: float = 1.0
    d1: float = 1.0
    d2: float = 1.0
    envelope_source: str = "calibrate"  # or "fixed"
    envelope_a: float | None = None
    calibrate_tail: bool = False
    calibrate_samples: int = 1000
    envelope_pmax: int = 8
    condition_trials: int = 50
    condition_t: float | None = None
    keep_samples: bool = False

    def __post_init__(self):
        if self.n_trials < 100:
            raise ParameterError("n_trials must be at least 100")
        thetas = tuple(float(t) for t in self.thetas)
        if not thetas or any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ParameterError("thetas must be nonempty and strictly ascending")
        self.thetas = thetas
        if self.statistic not in STATISTICS:
            raise ParameterError(f"statistic must be one of {STATISTICS}")
        if self.envelope_source not in ("fixed", "calibrate"):
            raise ParameterError("envelope_source must be 'fixed' or 'calibrate'")
        if self.envelope_source == "fixed" and not self.envelope_a:
            raise ParameterError("fixed envelope needs envelope_a")
        if self.g.kind != "polynomial":
            raise ParameterError("g must be a polynomial spec")

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "n_sum": self.n_sum,
            "g": {"coeffs": list(self.g.coeffs), "s": self.g.s},
            "k": self.k,
            "thetas": list(self.thetas),
            "n_trials": self.n_trials,
            "confidence": self.confidence,
            "statistic": self.statistic,
            "c1": self.c1, "c2": self.c2, "d1": self.d1, "d2": self.d2,
            "envelope_source": self.envelope_source,
            "envelope_a": self.envelope_a,
            "calibrate_tail": self.calibrate_tail,
            "calibrate_samples": self.calibrate_samples,
            "envelope_pmax": self.envelope_pmax,
            "condition_trials": self.condition_trials,
            "condition_t": self.condition_t,
            "keep_samples": self.keep_samples,
        }


_REQUIRED = object()


def _want(obj: dict, key: str, kind, pointer: str, default=_REQUIRED):
    if key not in obj:
        if default is not _REQUIRED:
            return default
        raise ConfigError(f"{pointer}/{key}", "missing required field")
    val = obj[key]
    try:
        return kind(val)
    except (TypeError, ValueError):
        raise ConfigError(f"{pointer}/{key}", f"cannot interpret {val!r}") from None


def config_from_dict(obj: dict) -> ExperimentConfig:
    """Parse and validate a config mapping, pointing at offending fields."""
    if not isinstance(obj, dict):
        raise ConfigError("", "config must be a JSON object")
    model_obj = obj.get("model")
    if not isinstance(model_obj, dict):
        raise ConfigError("/model", "missing model object")
    try:
        model = RandomModel.from_dict(model_obj)
    except (KeyError, TypeError, ValueError, ParameterError) as exc:
        raise ConfigError("/model", str(exc)) from None
    g_obj = obj.get("g", {"coeffs": [0.0, 1.0], "s": 1.0})
    if not isinstance(g_obj, dict) or "coeffs" not in g_obj:
        raise ConfigError("/g", "expected {coeffs: [...], s: number}")
    try:
        g = FnSpec.polynomial(g_obj["coeffs"], float(g_obj.get("s", 1.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError("/g", str(exc)) from None
    thetas = obj.get("thetas")
    if not isinstance(thetas, (list, tuple)) or not thetas:
        raise ConfigError("/thetas", "expected a nonempty array")
    kwargs = dict(
        model=model,
        n_sum=_want(obj, "n_sum", int, ""),
        g=g,
        k=_want(obj, "k", int, ""),
        thetas=tuple(float(t) for t in thetas),
        n_trials=_want(obj, "n_trials", int, ""),
        confidence=_want(obj, "confidence", float, "", 0.99),
        statistic=_want(obj, "statistic", str, "", "kyfan"),
        c1=_want(obj, "c1", float, "", 1.0),
        c2=_want(obj, "c2", float, "", 1.0),
        d1=_want(obj, "d1", float, "", 1.0),
        d2=_want(obj, "d2", float, "", 1.0),
        envelope_source=_want(obj, "envelope_source", str, "", "calibrate"),
        envelope_a=obj.get("envelope_a"),
        calibrate_tail=bool(obj.get("calibrate_tail", False)),
        calibrate_samples=_want(obj, "calibrate_samples", int, "", 1000),
        envelope_pmax=_want(obj, "envelope_pmax", int, "", 8),
        condition_trials=_want(obj, "condition_trials", int, "", 50),
        condition_t=obj.get("condition_t"),
        keep_samples=bool(obj.get("keep_samples", False)),
    )
    try:
        return ExperimentConfig(**kwargs)
    except ParameterError as exc:
        raise ConfigError("", str(exc)) from None


@dataclass
class ExperimentReport:
    rows: list
    metadata: dict
    runtime: float = 0.0
    samples: list | None = None

    def to_canonical_dict(self) -> dict:
        # runtime is deliberately excluded: reports must be byte-identical
        # across reruns and thread counts
        out = {"rows": self.rows, "metadata": self.metadata}
        if self.samples is not None:
            out["samples"] = self.samples
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_canonical_dict(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        obj = json.loads(text)
        return cls(rows=obj["rows"], metadata=obj["metadata"],
                   samples=obj.get("samples"))

    def write_csv(self, fh) -> None:
        fh.write("theta,empirical,ci_upper,bound,t_star,slack\n")
        for row in self.rows:
            fh.write(
                f"{row['theta']!r},{row['empirical_tail']!r},{row['ci_upper']!r},"
                f"{row['bound_value']!r},{row['t_star']!r},{row['slack']!r}\n"
            )


def clopper_pearson_upper(successes: int, n: int, confidence: float) -> float:
    """One-sided upper confidence limit for a binomial proportion."""
    if successes >= n:
        return 1.0
    return float(sp_stats.beta.ppf(confidence, successes + 1, n - successes))


def empirical_tail(samples, thetas, confidence: float = 0.99,
                   direction: str = "ge") -> list:
    """Exact tail counts with one-sided upper confidence limits per level."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise ParameterError("empirical_tail needs samples")
    n = samples.size
    rows = []
    for theta in thetas:
        hits = int(np.sum(samples >= theta) if direction == "ge"
                   else np.sum(samples <= theta))
        rows.append({
            "theta": float(theta),
            "empirical_tail": hits / n,
            "ci_upper": clopper_pearson_upper(hits, n, confidence),
        })
    return rows


def _trial_statistics(cfg: ExperimentConfig, envelope: Envelope, trial: int):
    """One trial: draw, clip to the envelope, return (stat, lmax, lmin, rejections)."""
    sampler = RandomTensorSampler(cfg.model, TRIAL_STREAM_BASE + trial)
    rejections = 0
    total = None
    last = None
    for _ in range(cfg.n_sum):
        while True:
            x = sampler.draw()
            radius = spectral.spectral_radius(x)
            if rand_t.required_scale(radius, envelope.p_max) <= envelope.a:
                break
            rejections += 1
        last = x
        total = x if total is None else total + x
    lam = np.linalg.eigvalsh(spectral.hermitian_blocks(total)).reshape(-1)
    gvals = np.sort(np.abs(cfg.g.apply_scalar(lam)))[::-1]
    stat = float(np.sum(gvals[: cfg.k]))
    return stat, float(lam.max()), float(lam.min()), rejections, total, last


def run_experiment(cfg: ExperimentConfig, threads: int = 0) -> ExperimentReport:
    """Run the full experiment described by ``cfg``.

    ``threads=0`` picks sequential execution; any positive count gives the
    same report bytes because every trial owns a derived random stream and
    aggregation happens in trial order.
    """
    t0 = time.monotonic()
    # calibration pre-pass: spectral radii of fresh samples
    radii = []
    for i in range(cfg.calibrate_samples):
        x = rand_t.sample_tensor(cfg.model, CALIB_STREAM_BASE + i)
        radii.append(spectral.spectral_radius(x))
    if cfg.envelope_source == "calibrate":
        a = max(rand_t.required_scale(r, cfg.envelope_pmax) for r in radii)
    else:
        a = float(cfg.envelope_a)
    envelope = Envelope(a=a, p_max=cfg.envelope_pmax)
    d1, d2 = cfg.d1, cfg.d2
    if cfg.calibrate_tail:
        d1, d2 = bounds.fit_tail_constants(radii, cfg.model.m)

    indices = range(cfg.n_trials)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda i: _trial_statistics(cfg, envelope, i), indices))
    else:
        results = [_trial_statistics(cfg, envelope, i) for i in indices]

    stats_kyfan = np.array([r[0] for r in results])
    lmax = np.array([r[1] for r in results])
    lmin = np.array([r[2] for r in results])
    rejections = int(sum(r[3] for r in results))

    # hypothesis checks on a deterministic subsample
    n_cond = min(cfg.condition_trials, cfg.n_trials)
    params = bounds.TailBoundParams(
        m=cfg.model.m, p=cfg.model.p, n_sum=cfg.n_sum, k=cfg.k, g=cfg.g,
        env=envelope, c1=cfg.c1, c2=cfg.c2, d1=d1, d2=d2,
    )
    if cfg.condition_t is not None:
        t_cond = float(cfg.condition_t)
    else:
        deg = max(cfg.g.degree, 1)
        t_cond = 0.5 / (cfg.n_sum * deg * cfg.g.s)
    cond_passes = 0
    domination_passes = 0
    for i in range(n_cond):
        total, last = results[i][4], results[i][5]
        rep = rand_t.check_g_exp_condition(total, cfg.g, t_cond)
        cond_passes += rep.passes
        dom = rand_t.check_subexp_domination(last, envelope)
        domination_passes += 1 if dom.passed else 0

    if cfg.statistic == "kyfan":
        samples, direction = stats_kyfan, "ge"
    elif cfg.statistic == "eigen_max":
        samples, direction = lmax, "ge"
    else:
        samples, direction = lmin, "le"

    rows = empirical_tail(samples, cfg.thetas, cfg.confidence, direction)
    for row in rows:
        theta = row["theta"]
        if cfg.statistic == "kyfan":
            bound, t_star = bounds.kyfan_bernstein_bound(params, theta)
        elif cfg.statistic == "eigen_max":
            bound, t_star = bounds.eigen_bernstein_bound(params, theta, "max")
        else:
            bound, t_star = bounds.eigen_bernstein_bound(params, theta, "min")
        row["bound_value"] = float(bound)
        row["t_star"] = float(t_star)
        row["slack"] = float(bound - row["ci_upper"])
        row["vacuous"] = bool(bound >= 1.0)

    metadata = {
        "config": cfg.to_dict(),
        "seed": cfg.model.seed,
        "statistic": cfg.statistic,
        "envelope_a": envelope.a,
        "d1": d1,
        "d2": d2,
        "rejections": rejections,
        "condition_t": t_cond,
        "condition_pass_rate": cond_passes / n_cond if n_cond else None,
        "domination_pass_rate": domination_passes / n_cond if n_cond else None,
    }
    report = ExperimentReport(rows=rows, metadata=metadata,
                              runtime=time.monotonic() - t0)
    if cfg.keep_samples:
        report.samples = [float(v) for v in samples]
    return report
