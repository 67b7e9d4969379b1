"""Brute-force ground truth, independent of the persistence code path.

Spanning-acycle membership is decided by rank computations over the
two-element field using a separate elimination routine, so the oracle and
the system under test cannot share a bug.  Everything here is test-grade:
small inputs, exhaustive search, no performance goals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .complexes import FilteredComplex, Simplex, facets_of
from .geometry import Point, as_points


class OracleSizeError(ValueError):
    pass


def _rank_gauss(columns: Sequence[int]) -> int:
    """Forward elimination on F2 columns (kept separate from the persistence
    reduction on purpose)."""
    basis: List[int] = []
    for col in columns:
        for b in basis:
            col = min(col, col ^ b)
        if col:
            basis.append(col)
            basis.sort(reverse=True)
    return len(basis)


def _boundary_columns(fc_simplices: Sequence[Simplex], k: int,
                      subset: Optional[Sequence[Simplex]] = None
                      ) -> List[int]:
    rows = {s: i for i, s in enumerate(
        s for s in fc_simplices if len(s) - 1 == k - 1)}
    cols = []
    source = subset if subset is not None else [
        s for s in fc_simplices if len(s) - 1 == k]
    for s in source:
        bits = 0
        for f in facets_of(s):
            bits ^= 1 << rows[f]
        cols.append(bits)
    return cols


@dataclass
class AcycleCertificate:
    faces: FrozenSet[Simplex]
    betti_km1: int
    betti_k: int
    weight: float


def _reduced_betti(fc: FilteredComplex, simplices: Sequence[Simplex], k: int) -> int:
    """Reduced Betti number of the complex given by `simplices`."""
    n_k = sum(1 for s in simplices if len(s) - 1 == k)
    if n_k == 0:
        return 0
    if k == 0:
        rank_dk = 1
    else:
        rank_dk = _rank_gauss(_boundary_columns(simplices, k))
    rank_dk1 = _rank_gauss(_boundary_columns(simplices, k + 1))
    return n_k - rank_dk - rank_dk1


def enumerate_spanning_acycles(fc: FilteredComplex, k: int,
                               max_faces: int = 16) -> List[AcycleCertificate]:
    """All S in F_k with beta_{k-1}(K_{k-1} u S) = beta_{k-1}(K) and
    beta_k(K_{k-1} u S) = 0, by exhaustive subset search."""
    if max_faces > 22:
        raise OracleSizeError("max_faces capped at 22")
    faces_k = sorted(fc.simplices(k))
    if len(faces_k) > max_faces:
        raise OracleSizeError(
            f"|F_{k}| = {len(faces_k)} exceeds max_faces = {max_faces}")
    skeleton = [s for s in fc.weights() if len(s) - 1 <= k - 1]
    target = _reduced_betti(fc, list(fc.weights()), k - 1)
    out: List[AcycleCertificate] = []
    for mask in range(1 << len(faces_k)):
        subset = [faces_k[i] for i in range(len(faces_k)) if mask >> i & 1]
        simplices = skeleton + subset
        b_km1 = _reduced_betti(fc, simplices, k - 1)
        b_k = _reduced_betti(fc, simplices, k)
        if b_km1 == target and b_k == 0:
            out.append(AcycleCertificate(
                faces=frozenset(subset), betti_km1=b_km1, betti_k=b_k,
                weight=math.fsum(fc.weight(s) for s in subset)))
    return out


def min_weight_spanning_acycle(fc: FilteredComplex, k: int,
                               max_candidates: int = 2_000_000
                               ) -> AcycleCertificate:
    """Minimum-weight spanning acycle by exhaustive search over subsets of
    the basis cardinality (spanning acycles are the bases of the column
    matroid of the k-th boundary operator, hence equicardinal; the full
    enumeration in `enumerate_spanning_acycles` cross-checks this)."""
    faces_k = sorted(fc.simplices(k))
    skeleton_simplices = [s for s in fc.weights() if len(s) - 1 <= k - 1]
    full_rank = _rank_gauss(_boundary_columns(
        skeleton_simplices + faces_k, k))
    r = full_rank
    if math.comb(len(faces_k), r) > max_candidates:
        raise OracleSizeError("candidate count exceeds cap")
    rows = {s: i for i, s in enumerate(
        s for s in skeleton_simplices if len(s) - 1 == k - 1)}
    col_of = {}
    for s in faces_k:
        bits = 0
        for f in facets_of(s):
            bits ^= 1 << rows[f]
        col_of[s] = bits
    best: Optional[Tuple[float, Tuple[Simplex, ...]]] = None
    for subset in combinations(faces_k, r):
        weight = math.fsum(fc.weight(s) for s in subset)
        if best is not None and weight >= best[0]:
            continue
        if _rank_gauss([col_of[s] for s in subset]) != r:
            continue
        best = (weight, subset)
    if best is None:
        raise OracleSizeError("no spanning acycle exists")
    weight, subset = best
    simplices = skeleton_simplices + list(subset)
    return AcycleCertificate(
        faces=frozenset(subset),
        betti_km1=_reduced_betti(fc, simplices, k - 1),
        betti_k=_reduced_betti(fc, simplices, k),
        weight=weight)


# ---------------------------------------------------------------------------
# classical Euclidean MST
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def kruskal_mst(points) -> Tuple[List[Tuple[int, int]], float]:
    """Euclidean MST over the complete graph: sort edges, union-find."""
    pts = as_points(points)
    if not pts:
        raise ValueError("kruskal_mst needs at least one point")
    coords = {p.id: p.coords for p in pts}
    ids = sorted(coords)
    edges = []
    for a, b in combinations(ids, 2):
        d2 = sum((x - y) ** 2 for x, y in zip(coords[a], coords[b]))
        edges.append((d2, a, b))
    edges.sort()
    uf = _UnionFind(ids)
    chosen: List[Tuple[int, int]] = []
    total = 0.0
    for d2, a, b in edges:
        if uf.union(a, b):
            chosen.append((a, b))
            total += math.sqrt(d2)
            if len(chosen) == len(ids) - 1:
                break
    return chosen, total
