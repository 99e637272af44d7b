"""Command-line front end: sampling, verification suites, bounds, experiments.

Data goes to stdout (or ``--out``), diagnostics to stderr.  Exit codes:
0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, ineq, mc, rand_t, spectral
from .errors import ParameterError
from .rand_t import RandomModel
from .spectral import FnSpec


def _eprint(*args):
    print(*args, file=sys.stderr)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + ("\n" if not text.endswith("\n") else ""))
    else:
        print(text)


def parse_g(text: str) -> FnSpec:
    """Parse a polynomial spec "a0,a1,...[:s]"."""
    if ":" in text:
        coeff_part, s_part = text.split(":", 1)
        s = float(s_part)
    else:
        coeff_part, s = text, 1.0
    coeffs = [float(a) for a in coeff_part.split(",") if a.strip() != ""]
    if not coeffs:
        raise ParameterError(f"no coefficients in {text!r}")
    return FnSpec.polynomial(coeffs, s)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("TPROD_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            _eprint(f"ignoring malformed TPROD_THREADS={env!r}")
    return 0


def cmd_sample(args) -> int:
    if args.model:
        try:
            model = RandomModel.from_dict(json.loads(Path(args.model).read_text()))
        except FileNotFoundError:
            _eprint(f"model file not found: {args.model}")
            return 2
        except (KeyError, ValueError, ParameterError) as exc:
            _eprint(f"malformed model file {args.model}: {exc}")
            return 2
    else:
        model = RandomModel(m=args.m, p=args.p, mode=args.mode, seed=args.seed)
    out = Path(args.out)
    files = []
    if args.n > 1 or out.is_dir():
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / f"sample_{i:04d}.ttj" for i in range(args.n)]
    else:
        paths = [out]
    for i, path in enumerate(paths):
        x = rand_t.sample_tensor(model, stream=i)
        if isinstance(x, spectral.BlockSpectrum):
            obj = x.to_ttj_dict()
        else:
            from . import tcore
            obj = tcore.to_ttj_dict(x)
        path.write_text(json.dumps(obj))
        files.append(str(path))
    summary = {"model": model.to_dict(), "files": files}
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        _eprint(f"wrote {len(files)} sample(s)")
    return 0


def cmd_verify(args) -> int:
    names = list(ineq.SUITES) if "all" in args.suite else args.suite
    unknown = [n for n in names if n not in ineq.SUITES]
    if unknown:
        _eprint(f"unknown suite(s): {', '.join(unknown)}")
        return 2
    reports = []
    failed = False
    for name in names:
        rep = ineq.run_suite(name, seed=args.seed, trials=args.trials, tol=args.tol)
        reports.append(rep)
        failed = failed or not rep.passed
        if not args.json:
            print(rep.summary())
    if args.json:
        text = json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2)
        _emit(text, args.out)
    elif args.out:
        Path(args.out).write_text(
            json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2))
    return 1 if failed else 0


def cmd_bound(args) -> int:
    g = parse_g(args.g)
    env = rand_t.Envelope(a=args.envelope)
    params = bounds.TailBoundParams(
        m=args.m, p=args.p, n_sum=args.nsum, k=args.k, g=g, env=env,
        c1=args.c1, c2=args.c2, d1=args.d1, d2=args.d2,
    )
    if args.kind == "kyfan":
        bound, t_star = bounds.kyfan_bernstein_bound(params, args.theta)
    else:
        side = "max" if args.kind == "eigen-max" else "min"
        bound, t_star = bounds.eigen_bernstein_bound(params, args.theta, side)
    payload = {
        "bound": bound,
        "t_star": t_star,
        "params": {
            "m": args.m, "p": args.p, "n_sum": args.nsum, "k": args.k,
            "g": {"coeffs": list(g.coeffs), "s": g.s},
            "envelope_a": args.envelope, "theta": args.theta,
            "c1": args.c1, "c2": args.c2, "d1": args.d1, "d2": args.d2,
            "kind": args.kind,
        },
    }
    _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def cmd_calibrate(args) -> int:
    model = RandomModel(m=args.m, p=args.p, mode=args.mode, seed=args.seed)
    radii = []
    for i in range(args.samples):
        x = rand_t.sample_tensor(model, stream=mc.CALIB_STREAM_BASE + i)
        radii.append(spectral.spectral_radius(x))
    env = rand_t.calibrate_envelope_from_radii(radii, args.pmax)
    d1, d2 = bounds.fit_tail_constants(np.asarray(radii), args.m)
    payload = {
        "a": env.a, "p_max": env.p_max, "d1": d1, "d2": d2,
        "n_samples": args.samples, "model": model.to_dict(),
    }
    _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def cmd_mc_run(args) -> int:
    try:
        obj = json.loads(Path(args.config).read_text())
    except FileNotFoundError:
        _eprint(f"config file not found: {args.config}")
        return 2
    except json.JSONDecodeError as exc:
        _eprint(f"config {args.config} is not valid JSON: {exc}")
        return 2
    if args.seed is not None:
        obj.setdefault("model", {})["seed"] = args.seed
    try:
        cfg = mc.config_from_dict(obj)
    except mc.ConfigError as exc:
        _eprint(f"config {args.config}: {exc}")
        return 2
    report = mc.run_experiment(cfg, threads=_threads(args))
    _eprint(f"experiment finished in {report.runtime:.1f}s "
            f"(rejections={report.metadata['rejections']})")
    _emit(report.to_json(), args.out)
    return 0


def cmd_mc_report(args) -> int:
    try:
        report = mc.ExperimentReport.from_json(Path(args.infile).read_text())
    except FileNotFoundError:
        _eprint(f"report file not found: {args.infile}")
        return 2
    except (json.JSONDecodeError, KeyError) as exc:
        _eprint(f"malformed report {args.infile}: {exc}")
        return 2
    if args.csv:
        with open(args.csv, "w") as fh:
            report.write_csv(fh)
    else:
        report.write_csv(sys.stdout)
    if args.json:
        print(json.dumps(report.metadata, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tprod",
        description="T-product tensor verification toolkit and bound evaluators",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (0 = auto; env TPROD_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw random tensors to ttj files")
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--mode", choices=rand_t.MODES, default="paper_literal")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=1, help="number of draws")
    sp.add_argument("--model", help="JSON model file {m,p,mode,seed}")
    sp.add_argument("--out", required=True, help="output file or directory")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_sample)

    vp = sub.add_parser("verify", help="run named verification suites")
    vp.add_argument("--suite", nargs="+", default=["all"],
                    help=f"suites: all, {', '.join(ineq.SUITES)}")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--trials", type=int, default=200)
    vp.add_argument("--tol", type=float, default=1e-8)
    vp.add_argument("--json", action="store_true")
    vp.add_argument("--out")
    vp.set_defaults(func=cmd_verify)

    bp = sub.add_parser("bound", help="evaluate a tail bound")
    bp.add_argument("--kind", choices=["kyfan", "eigen-max", "eigen-min"],
                    default="kyfan")
    bp.add_argument("--theta", type=float, required=True)
    bp.add_argument("--k", type=int, default=1)
    bp.add_argument("--g", default="0,1", help='polynomial "a0,a1,...[:s]"')
    bp.add_argument("--m", type=int, default=4)
    bp.add_argument("--p", type=int, default=3)
    bp.add_argument("--nsum", type=int, default=3)
    bp.add_argument("--c1", type=float, default=1.0)
    bp.add_argument("--c2", type=float, default=1.0)
    bp.add_argument("--d1", type=float, default=1.0)
    bp.add_argument("--d2", type=float, default=1.0)
    bp.add_argument("--envelope", type=float, default=1.0,
                    help="moment envelope scale a")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--json", action="store_true")
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bound)

    cp = sub.add_parser("calibrate", help="fit envelope and tail constants")
    cp.add_argument("--m", type=int, default=4)
    cp.add_argument("--p", type=int, default=3)
    cp.add_argument("--mode", choices=rand_t.MODES, default="paper_literal")
    cp.add_argument("--samples", type=int, default=1000)
    cp.add_argument("--pmax", type=int, default=8)
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--json", action="store_true")
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_calibrate)

    mp = sub.add_parser("mc", help="Monte Carlo experiments")
    msub = mp.add_subparsers(dest="mc_command", required=True)
    mr = msub.add_parser("run", help="run an experiment config")
    mr.add_argument("--config", required=True)
    mr.add_argument("--out")
    mr.add_argument("--seed", type=int, default=None,
                    help="override the model seed from the config")
    mr.add_argument("--json", action="store_true")
    mr.set_defaults(func=cmd_mc_run)
    mv = msub.add_parser("report", help="render a report to CSV")
    mv.add_argument("--in", dest="infile", required=True)
    mv.add_argument("--csv")
    mv.add_argument("--seed", type=int, default=0)
    mv.add_argument("--json", action="store_true")
    mv.set_defaults(func=cmd_mc_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        _eprint(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
