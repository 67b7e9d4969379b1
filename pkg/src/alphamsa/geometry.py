"""Computational geometry: Delaunay triangulations in R^2/R^3, circumspheres,
smallest enclosing balls, Alpha and Delaunay-Cech filtration weights.

The triangulation is built by incremental Bowyer-Watson insertion over a
ghost-vertex convex-hull closure.  All sign decisions go through the
filtered exact predicates in :mod:`alphamsa.predicates`, so the output is
exactly Delaunay for the given float coordinates.  Near-degenerate inputs
are rejected with a witness, never perturbed.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .complexes import FilteredComplex, Simplex, facets_of
from .predicates import DegeneracyError, in_circumball, incircle, insphere, orient

GHOST = -1

Coords = Tuple[float, ...]


@dataclass(frozen=True)
class Point:
    id: int
    coords: Coords

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if self.id < 0:
            raise ValueError("point ids must be non-negative")
        if not all(math.isfinite(c) for c in self.coords):
            raise ValueError(f"point {self.id} has non-finite coordinates")


@dataclass(frozen=True)
class Ball:
    center: Coords
    radius: float

    def contains(self, coords: Sequence[float], slack: float = 1e-12) -> bool:
        r = self.radius * (1.0 + slack) + slack
        return _dist2(self.center, coords) <= r * r


@dataclass(frozen=True)
class Triangulation:
    d: int
    points: Mapping[int, Coords]           # id -> coordinates
    cells: Tuple[Simplex, ...]             # sorted id tuples, sorted list
    neighbors: Mapping[Simplex, Tuple[Simplex, ...]]


def as_points(data, d: Optional[int] = None) -> List[Point]:
    """Coerce Points / (id, coords) pairs / bare coordinate tuples."""
    pts: List[Point] = []
    for i, item in enumerate(data):
        if isinstance(item, Point):
            pts.append(item)
        elif len(item) == 2 and not isinstance(item[1], (int, float)):
            pts.append(Point(int(item[0]), tuple(item[1])))
        else:
            pts.append(Point(i, tuple(item)))
    if d is not None:
        for p in pts:
            if len(p.coords) != d:
                raise ValueError(f"point {p.id} has {len(p.coords)} coords, expected {d}")
    ids = [p.id for p in pts]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate point ids")
    return pts


# ---------------------------------------------------------------------------
# vector helpers (scalar tuples; hot paths avoid numpy row overhead)
# ---------------------------------------------------------------------------

def _dist2(a: Sequence[float], b: Sequence[float]) -> float:
    acc = 0.0
    for x, y in zip(a, b):
        t = x - y
        acc += t * t
    return acc


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# circumspheres
# ---------------------------------------------------------------------------

def _circumsphere_coords(coords: Sequence[Coords]) -> Tuple[Coords, float]:
    """Center and radius of the smallest sphere through all given points,
    center constrained to their affine hull.  2..d+1 points."""
    m = len(coords)
    a = coords[0]
    if m == 1:
        return tuple(a), 0.0
    if m == 2:
        c = tuple((x + y) / 2.0 for x, y in zip(a, coords[1]))
        return c, math.sqrt(_dist2(c, a))
    diffs = [_sub(q, a) for q in coords[1:]]
    # Solve 2 G mu = rhs with G the Gram matrix of the edge vectors.
    n = m - 1
    g = [[sum(x * y for x, y in zip(diffs[i], diffs[j])) for j in range(n)]
         for i in range(n)]
    rhs = [0.5 * sum(x * x for x in diffs[i]) for i in range(n)]
    mu = _solve_small(g, rhs)
    offset = [0.0] * len(a)
    for i in range(n):
        for j in range(len(a)):
            offset[j] += mu[i] * diffs[i][j]
    center = tuple(a[j] + offset[j] for j in range(len(a)))
    radius = math.sqrt(sum(o * o for o in offset))
    return center, radius


def _solve_small(g: List[List[float]], rhs: List[float]) -> List[float]:
    """Gaussian elimination with partial pivoting for 1x1..3x3 systems."""
    n = len(g)
    m = [row[:] + [rhs[i]] for i, row in enumerate(g)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0.0:
            raise DegeneracyError("affinely dependent points in circumsphere")
        m[col], m[piv] = m[piv], m[col]
        inv = 1.0 / m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0.0:
                f = m[r][col] * inv
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


def _coplanar_in_facet_ball(facet: Sequence[Coords], p: Coords) -> int:
    """For p on the affine hull of the facet: +1 if p lies strictly inside
    the facet's smallest circumball, -1 strictly outside, 0 on its boundary.
    Exact rational arithmetic throughout."""
    a = [Fraction(x) for x in facet[0]]
    diffs = [[Fraction(x) - ax for x, ax in zip(q, a)] for q in facet[1:]]
    n = len(diffs)
    g = [[sum(u * v for u, v in zip(diffs[i], diffs[j])) for j in range(n)]
         for i in range(n)]
    rhs = [sum(u * u for u in diffs[i]) / 2 for i in range(n)]
    if n == 1:
        det = g[0][0]
        if det == 0:
            raise DegeneracyError("degenerate facet")
        mu = [rhs[0] / det]
    else:
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        if det == 0:
            raise DegeneracyError("degenerate facet")
        mu = [(rhs[0] * g[1][1] - rhs[1] * g[0][1]) / det,
              (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det]
    offset = [sum(mu[i] * diffs[i][j] for i in range(n))
              for j in range(len(a))]
    r2 = sum(o * o for o in offset)
    dp = [Fraction(x) - ax - o for x, ax, o in zip(p, a, offset)]
    d2 = sum(u * u for u in dp)
    if d2 < r2:
        return 1
    if d2 > r2:
        return -1
    return 0


def _affinely_independent_exact(coords: Sequence[Coords]) -> bool:
    """Exact rank check of the edge-vector matrix via rational Gram minors."""
    diffs = [[Fraction(x) - Fraction(y) for x, y in zip(q, coords[0])]
             for q in coords[1:]]
    n = len(diffs)
    g = [[sum(a * b for a, b in zip(diffs[i], diffs[j])) for j in range(n)]
         for i in range(n)]
    # Gram determinant is zero iff the vectors are linearly dependent.
    if n == 1:
        det = g[0][0]
    elif n == 2:
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    else:
        det = (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
               - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
               + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))
    return det != 0


def circumsphere(points, d: Optional[int] = None) -> Ball:
    """Smallest sphere through k+1 affinely independent points (1 <= k <= d),
    center in their affine hull."""
    pts = as_points(points, d)
    if not 2 <= len(pts) <= len(pts[0].coords) + 1:
        raise ValueError("circumsphere needs k+1 points with 1 <= k <= d")
    coords = [p.coords for p in pts]
    if not _affinely_independent_exact(coords):
        raise DegeneracyError("affinely dependent input",
                              witness=[p.id for p in pts])
    center, radius = _circumsphere_coords(coords)
    return Ball(center, radius)


# ---------------------------------------------------------------------------
# smallest enclosing ball (Welzl, randomized incremental)
# ---------------------------------------------------------------------------

_MEB_SLACK = 1e-10


def _ball_contains(center, r, p) -> bool:
    return _dist2(center, p) <= r * r * (1.0 + _MEB_SLACK) + _MEB_SLACK


def _ball_from_boundary(boundary: Sequence[Coords]) -> Tuple[Coords, float]:
    if not boundary:
        return (), -1.0
    if len(boundary) == 1:
        return tuple(boundary[0]), 0.0
    try:
        return _circumsphere_coords(boundary)
    except DegeneracyError:
        # Dependent boundary set: the true ball is supported by a subset.
        best = None
        for k in range(len(boundary) - 1, 0, -1):
            for sub in combinations(boundary, k):
                c, r = _ball_from_boundary(sub)
                if all(_ball_contains(c, r, q) for q in boundary):
                    if best is None or r < best[1]:
                        best = (c, r)
            if best is not None:
                return best
        raise


def min_enclosing_ball(points, d: Optional[int] = None) -> Ball:
    """Smallest ball containing all points (Welzl's algorithm)."""
    pts = as_points(points, d)
    if not pts:
        raise ValueError("min_enclosing_ball needs at least one point")
    coords = [p.coords for p in pts]
    dim = len(coords[0])
    rnd = random.Random(0x5EB)
    order = coords[:]
    rnd.shuffle(order)

    def grow(upto: int, boundary: List[Coords]) -> Tuple[Coords, float]:
        if len(boundary) == dim + 1:
            return _ball_from_boundary(boundary)
        c, r = _ball_from_boundary(boundary)
        for i in range(upto):
            q = order[i]
            if r < 0 or not _ball_contains(c, r, q):
                c, r = grow(i, boundary + [q])
        return c, r

    c, r = grow(len(order), [])
    return Ball(tuple(c), r)


# ---------------------------------------------------------------------------
# Bowyer-Watson Delaunay triangulation
# ---------------------------------------------------------------------------

def _morton_key(coords: Coords, lo: Coords, scale: Coords) -> int:
    key = 0
    quant = [int((c - l) * s) for c, l, s in zip(coords, lo, scale)]
    for bit in range(21):
        for q in quant:
            key = (key << 1) | ((q >> (20 - bit)) & 1)
    return key


class _Builder:
    """Incremental Delaunay over vertex indices with a ghost-vertex hull."""

    def __init__(self, coords: List[Coords], ids: List[int], d: int):
        self.coords = coords
        self.ids = ids
        self.d = d
        self.cells: Dict[int, Tuple[int, ...]] = {}
        self.facets: Dict[Tuple[int, ...], List[int]] = {}
        self.next_cid = 0
        self.last_finite = -1

    # -- plumbing -----------------------------------------------------------

    def _witness(self, verts: Iterable[int], extra: Iterable[int] = ()) -> List[int]:
        return sorted(self.ids[v] for v in list(verts) + list(extra) if v != GHOST)

    def _add_cell(self, stored: Tuple[int, ...]) -> int:
        cid = self.next_cid
        self.next_cid += 1
        self.cells[cid] = stored
        key = tuple(sorted(stored))
        for i in range(len(stored)):
            fk = tuple(sorted(stored[:i] + stored[i + 1:]))
            self.facets.setdefault(fk, []).append(cid)
        if GHOST not in stored:
            self.last_finite = cid
        return cid

    def _remove_cell(self, cid: int):
        stored = self.cells.pop(cid)
        for i in range(len(stored)):
            fk = tuple(sorted(stored[:i] + stored[i + 1:]))
            lst = self.facets[fk]
            lst.remove(cid)
            if not lst:
                del self.facets[fk]

    def _neighbor(self, cid: int, fk: Tuple[int, ...]) -> Optional[int]:
        for other in self.facets[fk]:
            if other != cid:
                return other
        return None

    # -- predicates over stored cells ----------------------------------------

    def _pt(self, v: int) -> Coords:
        return self.coords[v]

    def _in_conflict(self, cid: int, p: Coords, v: int) -> bool:
        stored = self.cells[cid]
        if stored[0] == GHOST:
            facet = stored[1:]
            s = orient([self._pt(u) for u in facet], p)
            if s == 0:
                # p on the hull facet's hyperplane: the ghost circumball is
                # the open outer halfspace plus the facet's open in-plane
                # circumball (standard symbolic rule for benign coplanarity).
                side = _coplanar_in_facet_ball([self._pt(u) for u in facet], p)
                if side == 0:
                    raise DegeneracyError(
                        "point on hull facet circumsphere",
                        witness=self._witness(facet, [v]))
                return side > 0
            return s > 0
        s = in_circumball([self._pt(u) for u in stored], p)
        if s == 0:
            raise DegeneracyError(
                "cospherical points", witness=self._witness(stored, [v]))
        return s > 0

    # -- initial simplex ------------------------------------------------------

    def init_simplex(self, order: List[int]) -> List[int]:
        d = self.d
        chosen = [order[0]]
        pending: List[int] = []
        for v in order[1:]:
            if len(chosen) == d + 1:
                pending.append(v)
                continue
            trial = chosen + [v]
            if _affinely_independent_exact([self._pt(u) for u in trial]):
                chosen.append(v)
            else:
                pending.append(v)
        if len(chosen) != d + 1:
            raise DegeneracyError(
                "all points affinely dependent",
                witness=self._witness(order))
        s = orient([self._pt(u) for u in chosen[:-1]], self._pt(chosen[-1]))
        if s < 0:
            chosen[0], chosen[1] = chosen[1], chosen[0]
        cid = self._add_cell(tuple(chosen))
        # One ghost per facet, facet oriented outward (negative toward the
        # opposite vertex).
        for i in range(d + 1):
            facet = list(chosen[:i] + chosen[i + 1:])
            opp = chosen[i]
            if orient([self._pt(u) for u in facet], self._pt(opp)) > 0:
                facet[0], facet[1] = facet[1], facet[0]
            self._add_cell((GHOST, *facet))
        return pending

    # -- point location -------------------------------------------------------

    def _locate_conflict(self, p: Coords, v: int) -> int:
        cid = self.last_finite
        d = self.d
        guard = 0
        limit = 8 * len(self.cells) + 64
        while True:
            guard += 1
            if guard > limit:
                return self._scan_conflict(p, v)
            stored = self.cells[cid]
            moved = False
            for i in range(d + 1):
                facet = stored[:i] + stored[i + 1:]
                s = orient([self._pt(u) for u in facet], p)
                if s == 0:
                    continue  # on the facet's hyperplane: not strictly beyond
                # Positively oriented cell: vertex i sits on sign (-1)^(d-i).
                s_v = 1 if (d - i) % 2 == 0 else -1
                if s == -s_v:
                    nb = self._neighbor(cid, tuple(sorted(facet)))
                    if self.cells[nb][0] == GHOST:
                        return nb
                    cid = nb
                    moved = True
                    break
            if not moved:
                # p in the closed cell, hence strictly inside its circumball
                # (exact ties raise inside the conflict test).
                if self._in_conflict(cid, p, v):
                    return cid
                return self._scan_conflict(p, v)

    def _scan_conflict(self, p: Coords, v: int) -> int:
        for cid in self.cells:
            if self._in_conflict(cid, p, v):
                return cid
        raise RuntimeError("no conflicting cell found; triangulation corrupt")

    # -- insertion -------------------------------------------------------------

    def insert(self, v: int):
        p = self._pt(v)
        seed = self._locate_conflict(p, v)
        conflict = {seed}
        stack = [seed]
        while stack:
            cid = stack.pop()
            stored = self.cells[cid]
            for i in range(len(stored)):
                fk = tuple(sorted(stored[:i] + stored[i + 1:]))
                nb = self._neighbor(cid, fk)
                if nb is None or nb in conflict:
                    continue
                if self._in_conflict(nb, p, v):
                    conflict.add(nb)
                    stack.append(nb)
        boundary: List[Tuple[int, ...]] = []
        for cid in conflict:
            stored = self.cells[cid]
            for i in range(len(stored)):
                fk = tuple(sorted(stored[:i] + stored[i + 1:]))
                nb = self._neighbor(cid, fk)
                if nb is None or nb not in conflict:
                    boundary.append(fk)
        for cid in conflict:
            self._remove_cell(cid)
        new_ghosts: List[int] = []
        for fk in boundary:
            if fk[0] == GHOST:
                ridge = fk[1:]
                cid = self._add_cell((GHOST, *sorted(ridge + (v,))))
                new_ghosts.append(cid)
            else:
                s = orient([self._pt(u) for u in fk], p)
                if s == 0:
                    raise DegeneracyError(
                        "point on cavity facet hyperplane",
                        witness=self._witness(fk, [v]))
                stored = list(fk)
                if s < 0:
                    stored[0], stored[1] = stored[1], stored[0]
                self._add_cell((*stored, v))
        for cid in new_ghosts:
            self._orient_ghost(cid)

    def _orient_ghost(self, cid: int):
        stored = self.cells[cid]
        facet = list(stored[1:])
        fk = tuple(sorted(facet))
        nb = self._neighbor(cid, fk)
        nb_stored = self.cells[nb]
        if nb_stored[0] == GHOST:
            raise RuntimeError("ghost cell without finite support")
        opp = next(u for u in nb_stored if u not in fk)
        if orient([self._pt(u) for u in facet], self._pt(opp)) > 0:
            facet[0], facet[1] = facet[1], facet[0]
        # Rewrite in place; facet key is unchanged by the swap.
        self.cells[cid] = (GHOST, *facet)


def delaunay(points, d: int) -> Triangulation:
    """Delaunay triangulation of a generic point set in R^2 or R^3."""
    if d not in (2, 3):
        raise ValueError("only d in {2, 3} is supported")
    pts = as_points(points, d)
    if len(pts) < d + 1:
        raise ValueError(f"need at least {d + 1} points for d={d}")
    seen: Dict[Coords, int] = {}
    for p in pts:
        if p.coords in seen:
            raise DegeneracyError(
                "duplicate coordinates",
                witness=sorted([seen[p.coords], p.id]))
        seen[p.coords] = p.id
    coords = [p.coords for p in pts]
    ids = [p.id for p in pts]

    lo = tuple(min(c[j] for c in coords) for j in range(d))
    hi = tuple(max(c[j] for c in coords) for j in range(d))
    scale = tuple((2 ** 21 - 1) / (h - l) if h > l else 0.0
                  for l, h in zip(lo, hi))
    order = sorted(range(len(coords)),
                   key=lambda i: (_morton_key(coords[i], lo, scale), ids[i]))

    builder = _Builder(coords, ids, d)
    pending = builder.init_simplex(order)
    for v in pending:
        builder.insert(v)

    id_of = ids
    cells = sorted(
        tuple(sorted(id_of[u] for u in stored))
        for stored in builder.cells.values() if stored[0] != GHOST)
    neighbors: Dict[Simplex, List[Simplex]] = {c: [] for c in cells}
    for fk, incident in builder.facets.items():
        if GHOST in fk or len(incident) != 2:
            continue
        a, b = (builder.cells[cid] for cid in incident)
        if a[0] == GHOST or b[0] == GHOST:
            continue
        ca = tuple(sorted(id_of[u] for u in a))
        cb = tuple(sorted(id_of[u] for u in b))
        neighbors[ca].append(cb)
        neighbors[cb].append(ca)
    frozen = {c: tuple(sorted(set(v))) for c, v in neighbors.items()}
    return Triangulation(
        d=d,
        points={p.id: p.coords for p in pts},
        cells=tuple(cells),
        neighbors=frozen,
    )


# ---------------------------------------------------------------------------
# Alpha and Delaunay-Cech filtrations
# ---------------------------------------------------------------------------

def _faces_and_cofaces(tri: Triangulation):
    """All faces of the Delaunay complex plus, per face, the vertices
    opposite it in its codimension-1 cofaces."""
    by_dim: List[set] = [set() for _ in range(tri.d + 1)]
    by_dim[tri.d] = set(tri.cells)
    opposite: Dict[Simplex, List[int]] = {}
    for k in range(tri.d, 0, -1):
        for s in by_dim[k]:
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                by_dim[k - 1].add(f)
                opposite.setdefault(f, []).append(s[i])
    return by_dim, opposite


def alpha_weights(tri: Triangulation) -> Dict[Simplex, float]:
    """Alpha filtration values: circumradius on Gabriel faces, attachment
    value (min over cofaces) otherwise.  Monotone by construction."""
    pts = tri.points
    by_dim, opposite = _faces_and_cofaces(tri)
    w: Dict[Simplex, float] = {}
    for cell in by_dim[tri.d]:
        _, r = _circumsphere_coords([pts[v] for v in cell])
        w[cell] = r
    for k in range(tri.d - 1, 0, -1):
        for s in by_dim[k]:
            center, r = _circumsphere_coords([pts[v] for v in s])
            r2 = r * r
            gabriel = True
            cof_min = math.inf
            for i, opp in enumerate(opposite[s]):
                coface = tuple(sorted(s + (opp,)))
                cw = w[coface]
                if cw < cof_min:
                    cof_min = cw
                if _dist2(pts[opp], center) < r2:
                    gabriel = False
            w[s] = min(r, cof_min) if gabriel else cof_min
    for v in by_dim[0]:
        w[v] = 0.0
    return w


def alpha_complex(points, d: int) -> FilteredComplex:
    """Alpha-weighted Delaunay complex of a generic point set."""
    tri = delaunay(points, d)
    return FilteredComplex(alpha_weights(tri), validate=False)


def alpha_weight(simplex, tri: Triangulation,
                 cache: Optional[Dict[Simplex, float]] = None) -> float:
    """Alpha value of one simplex of the Delaunay complex."""
    s = tuple(sorted(simplex))
    w = cache if cache is not None else alpha_weights(tri)
    if s not in w:
        raise ValueError(f"simplex {s} is not in the Delaunay complex")
    return w[s]


def delaunay_cech_complex(points, d: int) -> FilteredComplex:
    """Delaunay complex with min-enclosing-ball weights."""
    tri = delaunay(points, d)
    by_dim, _ = _faces_and_cofaces(tri)
    w: Dict[Simplex, float] = {}
    for k in range(tri.d, 0, -1):
        for s in by_dim[k]:
            w[s] = min_enclosing_ball([(v, tri.points[v]) for v in s]).radius
    for v in by_dim[0]:
        w[v] = 0.0
    return FilteredComplex(w, validate=True)


# ---------------------------------------------------------------------------
# general position check
# ---------------------------------------------------------------------------

def is_general_position(points, d: int, exhaustive: Optional[bool] = None
                        ) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """True iff no d+1 points are affinely dependent and no d+2 points lie
    on a common sphere.  Exhaustive mode checks every subset with exact
    predicates; otherwise degeneracies are detected during triangulation
    (which catches every degeneracy that affects the Delaunay complex).
    """
    pts = as_points(points, d)
    n = len(pts)
    if exhaustive is None:
        exhaustive = math.comb(n, d + 2) <= 200_000 if n >= d + 2 else True
    coords = {p.id: p.coords for p in pts}
    ids = sorted(coords)
    for a, b in combinations(ids, 2):
        if coords[a] == coords[b]:
            return False, (a, b)
    if exhaustive:
        for sub in combinations(ids, min(d + 1, n)):
            if len(sub) >= 2 and not _affinely_independent_exact(
                    [coords[i] for i in sub]):
                return False, sub
        if n >= d + 2:
            for sub in combinations(ids, d + 2):
                cs = [coords[i] for i in sub]
                s = (incircle(*cs) if d == 2 else insphere(*cs))
                if s == 0:
                    return False, sub
        return True, None
    try:
        delaunay(pts, d)
    except DegeneracyError as exc:
        return False, tuple(exc.witness)
    return True, None


# ---------------------------------------------------------------------------
# point-set input/output
# ---------------------------------------------------------------------------

class PointParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def write_points_csv(points: Sequence[Point], path) -> None:
    pts = sorted(as_points(points), key=lambda p: p.id)
    dim = len(pts[0].coords) if pts else 2
    cols = ["id", "x", "y", "z"][:dim + 1]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for p in pts:
            fh.write(",".join([str(p.id)] + [repr(c) for c in p.coords]) + "\n")


def read_points_csv(path) -> List[Point]:
    pts: List[Point] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1 and parts[0].lower() == "id":
                continue
            try:
                pid = int(parts[0])
                coords = tuple(float(x) for x in parts[1:])
            except (ValueError, IndexError) as exc:
                raise PointParseError(str(exc), lineno) from None
            if len(coords) not in (2, 3):
                raise PointParseError(
                    f"expected 2 or 3 coordinates, got {len(coords)}", lineno)
            pts.append(Point(pid, coords))
    pts.sort(key=lambda p: p.id)
    if len({p.id for p in pts}) != len(pts):
        raise PointParseError("duplicate ids", 0)
    return pts


def write_points_jsonl(points: Sequence[Point], path) -> None:
    pts = sorted(as_points(points), key=lambda p: p.id)
    with open(path, "w", encoding="utf-8") as fh:
        for p in pts:
            fh.write(json.dumps({"id": p.id, "coords": list(p.coords)}) + "\n")


def read_points_jsonl(path) -> List[Point]:
    pts: List[Point] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pts.append(Point(int(obj["id"]), tuple(obj["coords"])))
            except (ValueError, KeyError, TypeError) as exc:
                raise PointParseError(str(exc), lineno) from None
    pts.sort(key=lambda p: p.id)
    if len({p.id for p in pts}) != len(pts):
        raise PointParseError("duplicate ids", 0)
    return pts
