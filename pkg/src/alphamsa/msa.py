"""Minimal spanning acycles and the associated statistics.

The degree-k MSA of a filtered complex is exactly the set of negative
k-simplices of the persistence pairing; the 0-MSA is empty by convention.
Statistics:

    M_k = sum of phi(w) over the MSA,
    B_k = sum of phi(w) over the k-faces outside the MSA,
    L_k = M_k - B_{k-1}            (identity weight only).

L is reported under the lifetime indexing L_k = M_k - B_{k-1}, i.e. it sums
the lifetimes of degree-(k-1) classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .complexes import ComplexError, FilteredComplex, Simplex, symmetric_difference
from .geometry import Point, alpha_complex, as_points
from .persistence import NEGATIVE, PersistencePairing, reduce


class ContractError(ValueError):
    pass


@dataclass(frozen=True)
class PhiSpec:
    """Weight map phi(t) = t**p with p > 0."""
    p: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise ContractError("phi power must be positive")

    def __call__(self, t: float) -> float:
        return t ** self.p

    @property
    def is_identity(self) -> bool:
        return self.p == 1.0

    def exact(self, t: float) -> Fraction:
        ip = int(self.p)
        if ip != self.p:
            raise ContractError("exact evaluation needs an integer power")
        return Fraction(t) ** ip


@dataclass
class MsaResult:
    k: int
    p: float
    M: float
    B: float
    L: Optional[float]
    msa: FrozenSet[Simplex]

    def to_dict(self, include_simplices: bool = False) -> dict:
        out = {"k": self.k, "p": self.p, "M": self.M, "B": self.B,
               "L": self.L, "msa_size": len(self.msa)}
        if include_simplices:
            out["msa_simplices"] = [list(s) for s in sorted(self.msa)]
        return out


def _check_degree(fc: FilteredComplex, k: int):
    if not isinstance(k, int) or k < 0 or k > fc.dim:
        raise ContractError(f"degree k={k} out of range 0..{fc.dim}")


def minimal_spanning_acycle(fc: FilteredComplex, k: int,
                            pairing: Optional[PersistencePairing] = None
                            ) -> FrozenSet[Simplex]:
    """Negative k-simplices; empty for k = 0 by convention."""
    _check_degree(fc, k)
    if k == 0:
        return frozenset()
    if pairing is None:
        pairing = reduce(fc, only_dim=k)
    return frozenset(pairing.negatives(k))


def statistics(fc: FilteredComplex, k: int, phi: PhiSpec = PhiSpec(1.0),
               pairing: Optional[PersistencePairing] = None) -> MsaResult:
    _check_degree(fc, k)
    msa = minimal_spanning_acycle(fc, k, pairing)
    w = fc.weights()
    m = math.fsum(phi(w[s]) for s in msa)
    b = math.fsum(phi(w[s]) for s in fc.simplices(k) if s not in msa)
    l: Optional[float] = None
    if phi.is_identity and k >= 1:
        prev = statistics(fc, k - 1, phi, pairing=None) if k - 1 >= 1 else None
        b_prev = prev.B if prev is not None else math.fsum(
            phi(w[s]) for s in fc.simplices(0))
        l = m - b_prev
    return MsaResult(k=k, p=phi.p, M=m, B=b, L=l, msa=msa)


def lifetime_sum(fc: FilteredComplex, k: int, phi: PhiSpec = PhiSpec(1.0),
                 pairing: Optional[PersistencePairing] = None) -> float:
    """L_k = M_k - B_{k-1}; defined for the identity weight only."""
    if not phi.is_identity:
        raise ContractError("L is defined for the identity weight (p=1) only")
    if k < 1:
        raise ContractError("L needs k >= 1")
    res = statistics(fc, k, phi, pairing)
    assert res.L is not None
    return res.L


# ---------------------------------------------------------------------------
# add-one cost
# ---------------------------------------------------------------------------

@dataclass
class AddOneCost:
    k: int
    p: float
    dm: float
    db: float
    dl: Optional[float]


def _origin_point(points: Sequence[Point], new_point) -> Point:
    if isinstance(new_point, Point):
        p0 = new_point
    else:
        p0 = Point(max((p.id for p in points), default=-1) + 1, tuple(new_point))
    if any(p.id == p0.id for p in points):
        raise ContractError(f"new point id {p0.id} collides")
    return p0


def add_one_cost(points, new_point, k: int, phi: PhiSpec, d: int) -> AddOneCost:
    """Statistics of D(points + new_point) minus D(points), from scratch."""
    pts = as_points(points, d)
    p0 = _origin_point(pts, new_point)
    before = alpha_complex(pts, d)
    after = alpha_complex(pts + [p0], d)
    sb = statistics(before, k, phi)
    sa = statistics(after, k, phi)
    dl = (sa.L - sb.L) if (sa.L is not None and sb.L is not None) else None
    return AddOneCost(k=k, p=phi.p, dm=sa.M - sb.M, db=sa.B - sb.B, dl=dl)


# ---------------------------------------------------------------------------
# stability (sorted-matching l^p bound)
# ---------------------------------------------------------------------------

@dataclass
class StabilityResult:
    p: float
    lhs: float
    rhs: float
    ok: bool


def stability_check(fc: FilteredComplex, other_weights: Mapping[Simplex, float],
                    k: int, p: float, tol: float = 1e-9) -> StabilityResult:
    """Minimal l^p matching cost between the two degree-k death multisets
    versus the l^p distance of the two weight functions on the k-faces.

    The sorted matching is optimal for point multisets on the real line.
    p may be 1, 2, or math.inf.
    """
    _check_degree(fc, k)
    other = FilteredComplex({s: other_weights[s] for s in fc.weights()})
    msa_a = minimal_spanning_acycle(fc, k)
    msa_b = minimal_spanning_acycle(other, k)
    if len(msa_a) != len(msa_b):
        raise ComplexError(
            "death multisets differ in size; weight functions do not induce "
            "the same boundary ranks")
    da = sorted(fc.weight(s) for s in msa_a)
    db = sorted(other.weight(s) for s in msa_b)
    diffs = [fc.weight(s) - other.weight(s) for s in fc.simplices(k)]
    if math.isinf(p):
        lhs = max((abs(x - y) for x, y in zip(da, db)), default=0.0)
        rhs = max((abs(v) for v in diffs), default=0.0)
    else:
        lhs = math.fsum(abs(x - y) ** p for x, y in zip(da, db))
        rhs = math.fsum(abs(v) ** p for v in diffs)
    return StabilityResult(p=p, lhs=lhs, rhs=rhs, ok=lhs <= rhs + tol)


# ---------------------------------------------------------------------------
# single-simplex insertion (matroid exchange)
# ---------------------------------------------------------------------------

@dataclass
class AddOneSimplexResult:
    ok: bool
    inserted_label: int
    gained: FrozenSet[Simplex]
    lost: FrozenSet[Simplex]


def add_one_simplex_check(fc: FilteredComplex, simplex, weight: float
                          ) -> AddOneSimplexResult:
    """Insert one k-simplex and verify the MSA moves by at most one simplex
    in each direction, and not at all when the insertion is positive."""
    s = tuple(sorted(simplex))
    k = len(s) - 1
    bigger = fc.with_simplex(s, weight)  # raises if s present / not a complex
    pairing = reduce(bigger, only_dim=k)
    before = minimal_spanning_acycle(fc, k)
    after = minimal_spanning_acycle(bigger, k, pairing)
    gained = after - before
    lost = before - after
    ok = len(gained) <= 1 and len(lost) <= 1
    if pairing.labels[s] == 1:
        ok = ok and after == before
    return AddOneSimplexResult(ok=ok, inserted_label=pairing.labels[s],
                               gained=frozenset(gained), lost=frozenset(lost))


# ---------------------------------------------------------------------------
# add-one decomposition via symmetric-difference replay
# ---------------------------------------------------------------------------

@dataclass
class ReplayStep:
    op: str                    # "del" / "ins" / "reweight"
    simplex: Optional[Simplex]
    delta_m: Fraction
    msa_gained: int
    msa_lost: int


@dataclass
class ReplayResult:
    k: int
    direct: Fraction           # M(after) - M(before), exact rational
    replayed: Fraction         # telescoped sum over steps
    steps: List[ReplayStep]
    exact_match: bool
    single_step_ok: bool       # every simplex step moved the MSA by <= 1


def _msa_exact_m(fc: FilteredComplex, k: int, phi: PhiSpec) -> Tuple[Fraction, FrozenSet[Simplex]]:
    msa = minimal_spanning_acycle(fc, k)
    total = sum((phi.exact(fc.weight(s)) for s in msa), Fraction(0))
    return total, msa


def decompose_add_one(points, new_point, k: int, phi: PhiSpec, d: int) -> ReplayResult:
    """Replay D(X) -> D(X + new_point) one simplex at a time and compare the
    telescoped M deltas with the from-scratch difference, exactly.

    The replay deletes (cofaces first) under the source weights, switches the
    intersection complex to the target weights in one bookkeeping step (alpha
    weights of shared simplices may grow when a point is added), then inserts
    (faces first) under the target weights.  phi must have an integer power
    so sums are exact rationals.
    """
    pts = as_points(points, d)
    p0 = _origin_point(pts, new_point)
    before = alpha_complex(pts, d)
    after = alpha_complex(pts + [p0], d)
    ops = symmetric_difference(before, after)

    m_before, _ = _msa_exact_m(before, k, phi)
    m_after, _ = _msa_exact_m(after, k, phi)
    direct = m_after - m_before

    steps: List[ReplayStep] = []
    single_ok = True
    current = dict(before.weights())
    m_cur, msa_cur = m_before, minimal_spanning_acycle(before, k)
    replayed = Fraction(0)

    deletions = [op for op in ops if op[0] == "del"]
    insertions = [op for op in ops if op[0] == "ins"]

    def advance(new_weights: Dict[Simplex, float], op: str, s: Optional[Simplex]):
        nonlocal m_cur, msa_cur, replayed, single_ok
        fc2 = FilteredComplex(new_weights, validate=False)
        m2, msa2 = _msa_exact_m(fc2, k, phi)
        gained, lost = msa2 - msa_cur, msa_cur - msa2
        if op in ("del", "ins") and (s is None or len(s) - 1 == k):
            if len(gained) > 1 or len(lost) > 1:
                single_ok = False
        steps.append(ReplayStep(op=op, simplex=s, delta_m=m2 - m_cur,
                                msa_gained=len(gained), msa_lost=len(lost)))
        replayed += m2 - m_cur
        m_cur, msa_cur = m2, msa2

    for _, s in deletions:
        nxt = dict(current)
        del nxt[s]
        current = nxt
        advance(current, "del", s)
    # weight switch on the intersection complex
    switched = {s: after.weight(s) for s in current}
    if switched != current:
        current = switched
        advance(current, "reweight", None)
    else:
        current = switched
    for _, s, w in insertions:
        nxt = dict(current)
        nxt[s] = w
        current = nxt
        advance(current, "ins", s)

    exact = (replayed == direct) and (m_cur == m_after)
    return ReplayResult(k=k, direct=direct, replayed=replayed, steps=steps,
                        exact_match=exact, single_step_ok=single_ok)
