"""Desk-scale experiment harness: stabilization trajectories, CLT
diagnostics, configuration robustness, tail estimation, and the closed-form
geometry checks.

Replicates are pure functions of (parameters, seed, replicate index) and run
in a process pool; reports are merged by replicate index, so identical
(parameters, seed) give byte-identical reports regardless of scheduling.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import FilteredComplex, symmetric_difference
from .geometry import Point, alpha_complex, circumsphere, _circumsphere_coords
from .msa import AddOneCost, PhiSpec, add_one_cost, decompose_add_one, statistics
from .persistence import POSITIVE, reduce
from .predicates import DegeneracyError
from .stochastic import (ConfigSpec, Window, build_config, origin_point,
                         regular_simplex, restrict, rng_stream, sample_config,
                         sample_poisson)

ORIGIN_ID = 10 ** 9
_RETRY_STRIDE = 1_000_003


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    records: List[dict]
    summary: dict

    def to_json(self) -> str:
        payload = {"experiment": self.experiment, "params": self.params,
                   "summary": self.summary}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def records_csv(self) -> str:
        if not self.records:
            return "\n"
        cols = sorted({k for rec in self.records for k in rec})
        lines = [",".join(cols)]
        for rec in self.records:
            lines.append(",".join(_csv_cell(rec.get(c)) for c in cols))
        return "\n".join(lines) + "\n"

    def write(self, outdir: str, stem: Optional[str] = None) -> List[str]:
        os.makedirs(outdir, exist_ok=True)
        stem = stem or self.experiment
        paths = []
        jp = os.path.join(outdir, f"{stem}.json")
        with open(jp, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
        paths.append(jp)
        cp = os.path.join(outdir, f"{stem}_records.csv")
        with open(cp, "w", encoding="utf-8") as fh:
            fh.write(self.records_csv())
        paths.append(cp)
        for name, text in self.summary.get("_extra_files", {}).items():
            ep = os.path.join(outdir, f"{stem}_{name}")
            with open(ep, "w", encoding="utf-8") as fh:
                fh.write(text)
            paths.append(ep)
        return paths


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return '"' + " ".join(repr(x) for x in v) + '"'
    return str(v)


def _pmap(fn, args: Sequence, threads: int) -> List:
    if threads <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(min(threads, len(args))) as pool:
        return pool.map(fn, args, chunksize=1)


def default_threads() -> int:
    return os.cpu_count() or 1


def _moments(xs: Sequence[float]) -> Tuple[float, float, float, float]:
    """mean, variance (ddof=1), skewness, excess kurtosis."""
    n = len(xs)
    mean = math.fsum(xs) / n
    c2 = math.fsum((x - mean) ** 2 for x in xs) / n
    c3 = math.fsum((x - mean) ** 3 for x in xs) / n
    c4 = math.fsum((x - mean) ** 4 for x in xs) / n
    var = c2 * n / (n - 1) if n > 1 else 0.0
    skew = c3 / c2 ** 1.5 if c2 > 0 else 0.0
    kurt = c4 / c2 ** 2 - 3.0 if c2 > 0 else 0.0
    return mean, var, skew, kurt


def _ks_normal(xs: Sequence[float]) -> float:
    """Kolmogorov-Smirnov distance of the standardized sample from N(0,1)."""
    n = len(xs)
    mean, var, _, _ = _moments(xs)
    sd = math.sqrt(var)
    zs = sorted((x - mean) / sd for x in xs)
    d = 0.0
    for i, z in enumerate(zs):
        cdf = 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
        d = max(d, abs((i + 1) / n - cdf), abs(cdf - i / n))
    return d


def _poisson_complexes(lam, window, seed, replicate, d, max_retries=8):
    """Sample and triangulate, re-drawing on (astronomically rare) float
    degeneracies; returns (points, retries)."""
    for attempt in range(max_retries):
        rep = replicate + _RETRY_STRIDE * attempt
        pts = sample_poisson(lam, window, seed, rep)
        try:
            if len(pts) >= d + 1:
                alpha_complex(pts, d)
            return pts, attempt
        except DegeneracyError:
            continue
    raise DegeneracyError("repeated degeneracies in Poisson sample")


# ---------------------------------------------------------------------------
# weak stabilization (add-one cost along growing windows)
# ---------------------------------------------------------------------------

def _stab_worker(args) -> dict:
    (lam, d, ks, p, n_grid, seed, replicate, tol, replay_n) = args
    phi = PhiSpec(p)
    big = Window(n=float(n_grid[-1]), d=d)
    pts_all, retries = _poisson_complexes(lam, big, seed, replicate, d)
    origin = origin_point(d, ORIGIN_ID)
    record: dict = {"replicate": replicate, "retries": retries,
                    "n_points_max": len(pts_all)}
    traj: Dict[str, List[float]] = {}
    mono_violations = 0
    prev_labels = None
    prev_simplices = None
    for n in n_grid:
        pts = restrict(pts_all, Window(n=float(n), d=d))
        fc = alpha_complex(pts, d)
        fc0 = alpha_complex(pts + [origin], d)
        pairing = reduce(fc)
        pairing0 = reduce(fc0)
        for k in ks:
            s = statistics(fc, k, phi, pairing)
            s0 = statistics(fc0, k, phi, pairing0)
            traj.setdefault(f"d0m_k{k}", []).append(s0.M - s.M)
            traj.setdefault(f"d0b_k{k}", []).append(s0.B - s.B)
            if s.L is not None and s0.L is not None:
                traj.setdefault(f"d0l_k{k}", []).append(s0.L - s.L)
        # Label monotonicity along the nested window complexes: a simplex
        # positive at the smaller window stays positive at the larger.
        if prev_labels is not None:
            for simp in prev_simplices:
                if simp in fc and prev_labels[simp] == POSITIVE \
                        and pairing.labels[simp] != POSITIVE:
                    mono_violations += 1
        prev_labels = pairing.labels
        prev_simplices = set(fc.weights())
    record["mono_violations"] = mono_violations
    for key, values in traj.items():
        record[key] = values
        record[f"{key}_stable"] = (
            None if len(values) < 2 else abs(values[-1] - values[-2]) <= tol)
    if replay_n is not None and p == int(p):
        pts = restrict(pts_all, Window(n=float(replay_n), d=d))
        for k in ks:
            rr = decompose_add_one(pts, origin, k, phi, d)
            record[f"replay_exact_k{k}"] = rr.exact_match
            record[f"replay_single_step_k{k}"] = rr.single_step_ok
            record[f"replay_steps_k{k}"] = len(rr.steps)
    return record


def run_stabilization(lam: float, d: int, k, p: float, n_grid: Sequence[int],
                      R: int, seed: int, threads: Optional[int] = None,
                      tol: float = 1e-9,
                      replay_n: Optional[int] = None) -> ExperimentReport:
    """Couple one Poisson realization per replicate across the n-grid and
    track the add-one costs D0 M, D0 B, D0 L.

    ``k`` may be a degree or a sequence of degrees; ``replay_n`` selects the
    window at which the symmetric-difference replay consistency check runs
    (defaults to the largest grid point).
    """
    ks = tuple(k) if isinstance(k, (tuple, list)) else (k,)
    if len(n_grid) < 1 or list(n_grid) != sorted(n_grid):
        raise ValueError("n_grid must be non-empty and increasing")
    if replay_n is None:
        replay_n = n_grid[-1]
    threads = threads or default_threads()
    args = [(lam, d, ks, p, tuple(n_grid), seed, rep, tol, replay_n)
            for rep in range(R)]
    records = _pmap(_stab_worker, args, threads)
    summary: dict = {"n_grid": list(n_grid), "ks": list(ks)}
    for k_ in ks:
        for stat in ("d0m", "d0b", "d0l"):
            key = f"{stat}_k{k_}"
            flags = [rec.get(f"{key}_stable") for rec in records]
            known = [f for f in flags if f is not None]
            summary[f"frac_stabilized_{key}"] = (
                sum(known) / len(known) if known else None)
            finals = [rec[key][-1] for rec in records if key in rec]
            summary[f"mean_final_{key}"] = (
                math.fsum(finals) / len(finals) if finals else None)
        summary[f"replay_all_exact_k{k_}"] = all(
            rec.get(f"replay_exact_k{k_}", True) for rec in records)
        summary[f"replay_all_single_step_k{k_}"] = all(
            rec.get(f"replay_single_step_k{k_}", True) for rec in records)
    summary["mono_violations_total"] = sum(r["mono_violations"] for r in records)
    summary["_extra_files"] = {
        "trajectories.csv": _trajectories_csv(records, ks, n_grid)}
    return ExperimentReport(
        experiment="stabilization",
        params={"lambda": lam, "d": d, "k": list(ks), "p": p,
                "n_grid": list(n_grid), "R": R, "seed": seed, "tol": tol,
                "replay_n": replay_n},
        records=records, summary=summary)


def _trajectories_csv(records, ks, n_grid) -> str:
    lines = ["replicate,statistic,k,n,value"]
    for rec in records:
        for k in ks:
            for stat in ("d0m", "d0b", "d0l"):
                key = f"{stat}_k{k}"
                if key not in rec:
                    continue
                for n, v in zip(n_grid, rec[key]):
                    lines.append(f"{rec['replicate']},{stat},{k},{n},{v!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CLT diagnostics
# ---------------------------------------------------------------------------

def _clt_worker(args) -> dict:
    (lam, d, k, p, n, seed, replicate) = args
    phi = PhiSpec(p)
    pts, retries = _poisson_complexes(lam, Window(n=float(n), d=d),
                                      seed, replicate, d)
    fc = alpha_complex(pts, d)
    s = statistics(fc, k, phi)
    rec = {"replicate": replicate, "retries": retries,
           "n_points": len(pts), "M": s.M}
    if k < d:
        rec["B"] = s.B
        if s.L is not None:
            rec["L"] = s.L
    return rec


def run_clt(lam: float, d: int, k: int, p: float, n: int, R: int, seed: int,
            threads: Optional[int] = None) -> ExperimentReport:
    """R independent replicates of the degree-k statistics on W_n.

    B and L are reported for 1 <= k <= d-1 only, matching the range of the
    limit theorem; M is reported for 1 <= k <= d.
    """
    if R < 100:
        raise ValueError("CLT diagnostics need R >= 100")
    if not 1 <= k <= d:
        raise ValueError("k out of range")
    threads = threads or default_threads()
    args = [(lam, d, k, p, n, seed, rep) for rep in range(R)]
    records = _pmap(_clt_worker, args, threads)
    summary: dict = {"n": n, "k": k}
    for name in ("M", "B", "L"):
        xs = [rec[name] for rec in records if name in rec]
        if not xs:
            continue
        mean, var, skew, kurt = _moments(xs)
        summary[f"{name}_mean"] = mean
        summary[f"{name}_var_over_n"] = var / n
        summary[f"{name}_skewness"] = skew
        summary[f"{name}_excess_kurtosis"] = kurt
        summary[f"{name}_ks_normal"] = _ks_normal(xs)
    return ExperimentReport(
        experiment="clt",
        params={"lambda": lam, "d": d, "k": k, "p": p, "n": n, "R": R,
                "seed": seed},
        records=records, summary=summary)


# ---------------------------------------------------------------------------
# configuration robustness (variance lower bound construction)
# ---------------------------------------------------------------------------

def _config_worker(args) -> dict:
    (d, r, ps, eps, rho, seed, trial) = args
    spec = ConfigSpec(d=d, r=r, eps=eps, rho=rho)
    pts = sample_config(spec, seed, replicate=trial)
    origin = origin_point(d)
    rec: dict = {"trial": trial, "points": [c for p in pts for c in p.coords]}
    ok = True
    for p_pow in ps:
        phi = PhiSpec(p_pow)
        lower = phi(r / 4.0)
        upper = 2 ** (d + 1) * phi(d * r)
        for k in range(1, d + 1):
            cost = add_one_cost(pts, origin, k, phi, d)
            rec[f"d0m_k{k}_p{p_pow:g}"] = cost.dm
            checks = [cost.dm > lower, cost.dm <= upper]
            if k < d:
                rec[f"d0b_k{k}_p{p_pow:g}"] = cost.db
                checks.append(cost.db > lower)
                if cost.dl is not None:
                    rec[f"d0l_k{k}_p{p_pow:g}"] = cost.dl
                    checks.append(cost.dl > lower)
            if not all(checks):
                ok = False
    rec["ok"] = ok
    return rec


def run_config_check(d: int, r: float, ps: Sequence[float], trials: int,
                     seed: int, eps: Optional[float] = None,
                     rho: Optional[float] = None,
                     threads: Optional[int] = None) -> ExperimentReport:
    """Sample perturbed configurations and assert the add-one cost bounds:
    phi(r/4) < D0 M_k (k <= d), phi(r/4) < D0 B_k and D0 L_k (k < d), and
    D0 M_k <= 2^(d+1) phi(d r).

    With eps=0 every "trial" evaluates the unperturbed anchors.
    """
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3")
    threads = threads or default_threads()
    args = [(d, r, tuple(ps), eps, rho, seed, t) for t in range(trials)]
    records = _pmap(_config_worker, args, threads)
    failures = [rec for rec in records if not rec["ok"]]
    summary = {
        "trials": trials, "failures": len(failures),
        "all_ok": not failures,
        "offending_points": [rec["points"] for rec in failures],
    }
    return ExperimentReport(
        experiment="config_check",
        params={"d": d, "r": r, "ps": list(ps), "trials": trials,
                "seed": seed, "eps": eps, "rho": rho},
        records=records, summary=summary)


# ---------------------------------------------------------------------------
# closed-form geometry checks
# ---------------------------------------------------------------------------

@dataclass
class GeometricCheck:
    d: int
    rho: float
    gap: float            # ||a|| - rho' for the outer-point d-simplex
    bound: float          # (9 d^2 + 1) / (10 d^3)
    added_weight: float   # circumradius of [0, p_2, ..., p_{d+1}]
    expected_added: float  # d r / 2
    ok: bool


def verify_lemma_geometric(d: int, rho: Optional[float] = None,
                           r: float = 1.0, tol: float = 1e-9) -> GeometricCheck:
    """Circumsphere facts of the configuration: the d-simplex on the first
    outer point clears the origin by (9d^2+1)/(10d^3), and the d-simplex the
    origin forms with a face of the inner simplex has weight d r / 2."""
    if rho is None:
        rho = 21.0 * d * r
    if rho < 20.0 * d * r:
        raise ValueError("rho must be at least 20*d*r")
    inner = regular_simplex(d, r)
    norm0 = math.sqrt(sum(c * c for c in inner[0]))
    q1 = tuple(-rho * c / norm0 for c in inner[0])
    center, radius = _circumsphere_coords([q1] + list(inner[1:]))
    gap = math.sqrt(sum(c * c for c in center)) - radius
    bound = (9.0 * d * d + 1.0) / (10.0 * d ** 3)
    origin = tuple(0.0 for _ in range(d))
    _, added = _circumsphere_coords([origin] + list(inner[1:]))
    expected = d * r / 2.0
    ok = gap >= bound - tol and abs(added - expected) <= tol
    return GeometricCheck(d=d, rho=rho, gap=gap, bound=bound,
                          added_weight=added, expected_added=expected, ok=ok)


# ---------------------------------------------------------------------------
# tail estimation for the add-one symmetric difference
# ---------------------------------------------------------------------------

def _cone_radius_2d(points: Sequence[Point], window: Window) -> float:
    """R(A) of the twelve-sector construction: per sector, distance to the
    nearest sample point in the widened sector, capped by the sector's
    diameter inside the box."""
    m = 12
    half = math.pi / 12.0          # sector angular radius
    widened = math.pi / 6.0
    corners = [(lo, hi) for lo, hi in window.bounds()]
    corner_pts = [(x, y) for x in corners[0] for y in corners[1]]
    r_max = 0.0
    for i in range(m):
        axis = 2.0 * math.pi * (i + 0.5) / m
        ax = (math.cos(axis), math.sin(axis))
        d_i = 0.0
        for cx, cy in corner_pts:
            ang = math.atan2(cy, cx)
            delta = abs((ang - axis + math.pi) % (2.0 * math.pi) - math.pi)
            if delta <= half:
                d_i = max(d_i, math.hypot(cx, cy))
        if d_i == 0.0:
            d_i = max(math.hypot(cx, cy) for cx, cy in corner_pts)
        best = d_i
        for p in points:
            x, y = p.coords
            norm = math.hypot(x, y)
            if norm == 0.0 or norm >= best:
                continue
            cosang = (x * ax[0] + y * ax[1]) / norm
            if cosang >= math.cos(widened):
                best = norm
        r_max = max(r_max, best)
    return r_max


def _tail_worker(args) -> dict:
    (lam, d, volumes, seed, replicate) = args
    big = Window(n=float(volumes[-1]), d=d)
    pts_all, retries = _poisson_complexes(lam, big, seed, replicate, d)
    origin = origin_point(d, ORIGIN_ID)
    rec: dict = {"replicate": replicate, "retries": retries}
    for vol in volumes:
        window = Window(n=float(vol), d=d)
        pts = restrict(pts_all, window)
        fc = alpha_complex(pts, d)
        fc0 = alpha_complex(pts + [origin], d)
        ops = symmetric_difference(fc, fc0)
        weights = []
        for op in ops:
            if op[0] == "del":
                weights.append(fc.weight(op[1]))
            else:
                weights.append(op[2])
        rec[f"m_a_{vol}"] = max(weights) if weights else 0.0
        rec[f"l_a_{vol}"] = len(ops)
        if d == 2:
            r_cone = _cone_radius_2d(pts, window)
            rec[f"r_cone_{vol}"] = r_cone
            pts_map = {p.id: p.coords for p in pts}
            pts_map[ORIGIN_ID] = origin.coords
            viol = 0
            for op in ops:
                simp = op[1]
                if min(math.hypot(*pts_map[v]) for v in simp) > 3.0 * r_cone:
                    viol += 1
            rec[f"outside_3r_{vol}"] = viol
    return rec


def run_tail_estimate(lam: float, d: int, volumes: Sequence[float], R: int,
                      seed: int, threads: Optional[int] = None,
                      t_grid: Optional[Sequence[float]] = None
                      ) -> ExperimentReport:
    """Empirical tails of M_A (max weight over the add-one symmetric
    difference) and L_A (its cardinality) over centred boxes."""
    volumes = sorted(volumes)
    threads = threads or default_threads()
    args = [(lam, d, tuple(volumes), seed, rep) for rep in range(R)]
    records = _pmap(_tail_worker, args, threads)
    if t_grid is None:
        t_grid = [0.25 * i for i in range(1, 41)]
    lines = ["statistic,volume,t,t_transformed,survival,log_survival"]
    summary: dict = {"volumes": list(volumes)}
    for vol in volumes:
        ms = [rec[f"m_a_{vol}"] for rec in records]
        ls = [rec[f"l_a_{vol}"] for rec in records]
        surv_prev = 1.0
        monotone = True
        for t in t_grid:
            surv = sum(1 for x in ms if x > t) / len(ms)
            if surv > surv_prev + 1e-12:
                monotone = False
            surv_prev = surv
            logs = repr(math.log(surv)) if surv > 0 else ""
            lines.append(f"M,{vol},{t!r},{t ** d!r},{surv!r},{logs}")
        for t in sorted(set(int(x) for x in ls)):
            surv = sum(1 for x in ls if x > t) / len(ls)
            logs = repr(math.log(surv)) if surv > 0 else ""
            lines.append(f"L,{vol},{t!r},{t ** (1.0 / (d + 1))!r},{surv!r},{logs}")
        summary[f"m_a_survival_monotone_{vol}"] = monotone
        summary[f"p_m_a_gt_5_{vol}"] = sum(1 for x in ms if x > 5.0) / len(ms)
        summary[f"median_l_a_{vol}"] = sorted(ls)[len(ls) // 2]
        if d == 2:
            summary[f"outside_3r_total_{vol}"] = sum(
                rec[f"outside_3r_{vol}"] for rec in records)
    summary["_extra_files"] = {"survival.csv": "\n".join(lines) + "\n"}
    return ExperimentReport(
        experiment="tails",
        params={"lambda": lam, "d": d, "volumes": list(volumes), "R": R,
                "seed": seed},
        records=records, summary=summary)


# ---------------------------------------------------------------------------
# d=2 cone construction check
# ---------------------------------------------------------------------------

def _angle_at_origin(a: Sequence[float], b: Sequence[float]) -> float:
    na = math.hypot(*a)
    nb = math.hypot(*b)
    dot = (a[0] * b[0] + a[1] * b[1]) / (na * nb)
    dot = max(-1.0, min(1.0, dot))
    return math.acos(dot)


def _d2_angle_worker(args) -> dict:
    (r, eps, seed, trial) = args
    spec = ConfigSpec(d=2, r=r, eps=eps)
    config = build_config(spec)
    rng = rng_stream(seed, trial)
    p1 = config.regions[0].sample(rng)
    p2 = config.regions[1].sample(rng)
    p3 = config.regions[2].sample(rng)
    origin = (0.0, 0.0)
    _, w123 = _circumsphere_coords([p1, p2, p3])
    _, w103 = _circumsphere_coords([p1, origin, p3])
    _, w102 = _circumsphere_coords([p1, origin, p2])
    _, w203 = _circumsphere_coords([p2, origin, p3])
    angle = _angle_at_origin(p1, p3)
    tol = 1e-12
    return {
        "trial": trial,
        "w123": w123, "w103": w103,
        "angle": angle,
        "weight_ok": w123 <= w103 + tol,
        "angle_ok": angle >= 2.0 * math.pi / 3.0 - tol,
        "max_pair_ok": max(w103, w102, w203) >= w123 - tol,
        "points": [*p1, *p2, *p3],
    }


def run_d2_angle_check(trials: int, eps: float, seed: int, r: float = 1.0,
                       threads: Optional[int] = None) -> ExperimentReport:
    """Sample the three inner cone regions and verify, per trial, that the
    inner triangle's weight is at most the weight of the triangle the origin
    forms with p'_1 and p'_3, and that the angle those two points subtend at
    the origin is at least 2 pi / 3."""
    if not eps < r / 40.0:
        raise ValueError("d=2 construction requires eps < r/40")
    threads = threads or default_threads()
    args = [(r, eps, seed, t) for t in range(trials)]
    records = _pmap(_d2_angle_worker, args, threads)
    bad = [rec for rec in records
           if not (rec["weight_ok"] and rec["angle_ok"])]
    summary = {
        "trials": trials,
        "weight_failures": sum(1 for rec in records if not rec["weight_ok"]),
        "angle_failures": sum(1 for rec in records if not rec["angle_ok"]),
        "max_pair_failures": sum(
            1 for rec in records if not rec["max_pair_ok"]),
        "all_ok": not bad,
        "offending_points": [rec["points"] for rec in bad],
    }
    return ExperimentReport(
        experiment="d2_angle_check",
        params={"trials": trials, "eps": eps, "seed": seed, "r": r},
        records=records, summary=summary)
