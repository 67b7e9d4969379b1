"""Command-line surface.

Commands: complex, persistence, msa, sample, experiment <sub>.
Exit codes: 0 success, 1 usage/parse error, 2 scientific assertion failure,
3 degeneracy.  ALPHAMSA_SEED sets the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from .complexes import ComplexError, parse_complex, serialize_complex
from .experiments import (default_threads, run_clt, run_config_check,
                          run_d2_angle_check, run_stabilization,
                          run_tail_estimate, verify_lemma_geometric)
from .geometry import (PointParseError, alpha_complex, delaunay_cech_complex,
                       read_points_csv, read_points_jsonl, write_points_csv)
from .msa import ContractError, PhiSpec, statistics
from .persistence import diagram_csv, reduce
from .predicates import DegeneracyError
from .stochastic import ConfigSpec, Window, sample_config, sample_poisson

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ASSERTION = 2
EXIT_DEGENERACY = 3


def _default_seed() -> int:
    return int(os.environ.get("ALPHAMSA_SEED", "42"))


def _read_points(path: str):
    if path.endswith(".jsonl"):
        return read_points_jsonl(path)
    return read_points_csv(path)


def _load_config_file(path: str) -> dict:
    """JSON or simple `key = value` lines; '#' starts a comment."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = json.loads(value) if value and value[0] in "[{\"" \
            else _coerce_scalar(value)
    return out


def _coerce_scalar(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    return value


def _header(args_dict: dict) -> list:
    items = ", ".join(f"{k}={v}" for k, v in sorted(args_dict.items()))
    return [f"alphamsa {__version__}", items]


# -- subcommands -------------------------------------------------------------

def _cmd_complex(args) -> int:
    points = _read_points(args.points)
    if args.weight_mode == "alpha":
        fc = alpha_complex(points, args.d)
    else:
        fc = delaunay_cech_complex(points, args.d)
    text = serialize_complex(fc, header=_header(
        {"command": "complex", "points": args.points, "d": args.d,
         "weight_mode": args.weight_mode}))
    _write(args.out, text)
    return EXIT_OK


def _cmd_persistence(args) -> int:
    with open(args.complex, "r", encoding="utf-8") as fh:
        fc = parse_complex(fh.read())
    pairing = reduce(fc)
    _write(args.out, diagram_csv(pairing))
    return EXIT_OK


def _cmd_msa(args) -> int:
    with open(args.complex, "r", encoding="utf-8") as fh:
        fc = parse_complex(fh.read())
    phi = PhiSpec(args.p)
    res = statistics(fc, args.k, phi)
    payload = res.to_dict(include_simplices=args.include_simplices)
    _write(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _cmd_sample(args) -> int:
    if args.kind == "poisson":
        window = Window(n=args.n, d=args.d)
        pts = sample_poisson(args.intensity, window, args.seed)
    else:
        spec = ConfigSpec(d=args.d, r=args.r, eps=args.eps, rho=args.rho)
        pts = sample_config(spec, args.seed)
    write_points_csv(pts, args.out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}

    def get(key, default=None):
        attr = "lambda_" if key == "lambda" else key
        value = getattr(args, attr, None)
        if value is not None:
            return value
        return cfg.get(key, default)

    seed = int(get("seed", _default_seed()))
    threads = int(get("threads", default_threads()))
    out_dir = get("out_dir", "reports")
    sub = args.subcommand
    if sub == "geom":
        ok = True
        for d in ([args.d] if args.d else [2, 3]):
            chk = verify_lemma_geometric(d, rho=get("rho"))
            print(f"d={d}: ||a|| - rho' = {chk.gap:.9f} >= {chk.bound:.9f}, "
                  f"added-simplex weight {chk.added_weight:.9f} "
                  f"(expected {chk.expected_added:.9f}), "
                  f"{'ok' if chk.ok else 'FAIL'}")
            ok = ok and chk.ok
        return EXIT_OK if ok else EXIT_ASSERTION
    if sub == "stabilization":
        report = run_stabilization(
            lam=float(get("lambda", 1.0)), d=int(get("d", 2)),
            k=get("k", [1, 2]), p=float(get("p", 1.0)),
            n_grid=get("n_grid", [64, 128, 256, 512, 1024, 2048, 4096]),
            R=int(get("R", 100)), seed=seed, threads=threads,
            tol=float(get("tol", 1e-9)), replay_n=get("replay_n"))
        failed = any(
            (report.summary.get(f"frac_stabilized_d0m_k{k}") or 0) < 0.95
            for k in report.summary["ks"])
    elif sub == "clt":
        report = run_clt(
            lam=float(get("lambda", 1.0)), d=int(get("d", 2)),
            k=int(get("k", 1)), p=float(get("p", 1.0)),
            n=int(get("n", 4096)), R=int(get("R", 500)),
            seed=seed, threads=threads)
        failed = False
    elif sub == "config":
        report = run_config_check(
            d=int(get("d", 2)), r=float(get("r", 1.0)),
            ps=get("ps", [1.0, 2.0]), trials=int(get("trials", 100)),
            seed=seed, eps=get("eps"), rho=get("rho"), threads=threads)
        failed = not report.summary["all_ok"]
    elif sub == "tails":
        report = run_tail_estimate(
            lam=float(get("lambda", 1.0)), d=int(get("d", 2)),
            volumes=get("volumes", [64, 256, 1024]),
            R=int(get("R", 2000)), seed=seed, threads=threads)
        failed = False
    elif sub == "d2angle":
        report = run_d2_angle_check(
            trials=int(get("trials", 1000)),
            eps=float(get("eps", 1.0 / 50.0)), seed=seed,
            r=float(get("r", 1.0)), threads=threads)
        failed = not report.summary["all_ok"]
    else:
        raise ValueError(f"unknown experiment {sub}")
    paths = report.write(out_dir)
    for path in paths:
        print(f"wrote {path}")
    if failed:
        print("assertion failures recorded in the report", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="alphamsa")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", help="build a filtered Delaunay complex")
    p.add_argument("--points", required=True)
    p.add_argument("--d", type=int, required=True, choices=(2, 3))
    p.add_argument("--weight-mode", default="alpha",
                   choices=("alpha", "delaunay-cech"))
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_complex)

    p = sub.add_parser("persistence", help="persistence diagram CSV")
    p.add_argument("--complex", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_persistence)

    p = sub.add_parser("msa", help="minimal spanning acycle statistics")
    p.add_argument("--complex", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--include-simplices", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_msa)

    p = sub.add_parser("sample", help="sample a point set")
    p.add_argument("--kind", default="poisson", choices=("poisson", "config"))
    p.add_argument("--d", type=int, default=2, choices=(2, 3))
    p.add_argument("--intensity", type=float, default=1.0)
    p.add_argument("--n", type=float, default=100.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("experiment", help="run an experiment")
    p.add_argument("subcommand", choices=(
        "stabilization", "clt", "config", "tails", "geom", "d2angle"))
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--d", type=int, default=None, choices=(2, 3))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p.set_defaults(fn=_cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.seed is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    try:
        return args.fn(args)
    except DegeneracyError as exc:
        print(f"degeneracy: {exc}; witness ids {list(exc.witness)}",
              file=sys.stderr)
        return EXIT_DEGENERACY
    except (PointParseError, ComplexError, ContractError, ValueError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
