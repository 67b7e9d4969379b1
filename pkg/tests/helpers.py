"""Shared test utilities: generators and independent mini-oracles."""

import math
import random
from itertools import combinations

from alphamsa.complexes import FilteredComplex, all_faces


def random_points_2d(rnd, n, lo=0.0, hi=10.0):
    return [(i, (rnd.uniform(lo, hi), rnd.uniform(lo, hi))) for i in range(n)]


def random_points_3d(rnd, n, lo=0.0, hi=10.0):
    return [(i, (rnd.uniform(lo, hi), rnd.uniform(lo, hi), rnd.uniform(lo, hi)))
            for i in range(n)]


def random_abstract_complex(rnd, n_vertices, n_triangles, extra_edges=3):
    """Random 2-complex with monotone weights: every face of every chosen
    triangle plus a few extra edges; weights strictly grow with dimension."""
    weights = {}
    for v in range(n_vertices):
        weights[(v,)] = 0.0
    tris = list(combinations(range(n_vertices), 3))
    rnd.shuffle(tris)
    for tri in tris[:n_triangles]:
        for e in combinations(tri, 2):
            weights.setdefault(tuple(e), rnd.uniform(0.0, 1.0))
    for tri in tris[:n_triangles]:
        base = max(weights[tuple(e)] for e in combinations(tri, 2))
        weights[tri] = base + rnd.uniform(0.001, 1.0)
    all_edges = list(combinations(range(n_vertices), 2))
    rnd.shuffle(all_edges)
    added = 0
    for e in all_edges:
        if added >= extra_edges:
            break
        if e not in weights:
            weights[e] = rnd.uniform(0.0, 1.0)
            added += 1
    return FilteredComplex(weights)


def dense_f2_rank(columns, n_rows):
    """Row-echelon rank over F2 on dense 0/1 lists (kept naive on purpose:
    independent of every bitset elimination in the package)."""
    mat = [list(col) for col in columns]
    rank = 0
    for row in range(n_rows):
        piv = None
        for j in range(rank, len(mat)):
            if mat[j][row]:
                piv = j
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for j in range(len(mat)):
            if j != rank and mat[j][row]:
                mat[j] = [(a + b) % 2 for a, b in zip(mat[j], mat[rank])]
        rank += 1
    return rank


def boundary_dense(fc, k):
    """Dense F2 boundary columns of the k-simplices (rows: (k-1)-simplices;
    for k = 0 a single augmentation row)."""
    if k == 0:
        return [[1] for _ in fc.simplices(0)], 1
    rows = {s: i for i, s in enumerate(sorted(fc.simplices(k - 1)))}
    cols = []
    for s in sorted(fc.simplices(k)):
        col = [0] * len(rows)
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            col[rows[f]] ^= 1
        cols.append(col)
    return cols, len(rows)


def brute_force_meb(points_coords):
    """Smallest enclosing ball by trying every support subset of size <= d+1."""
    dim = len(points_coords[0])
    best = None
    from alphamsa.geometry import _circumsphere_coords

    def contains_all(c, r):
        rr = r * (1 + 1e-9) + 1e-12
        return all(sum((x - y) ** 2 for x, y in zip(c, p)) <= rr * rr
                   for p in points_coords)

    for size in range(1, dim + 2):
        for sub in combinations(points_coords, size):
            try:
                c, r = _circumsphere_coords(list(sub))
            except Exception:
                continue
            if contains_all(c, r) and (best is None or r < best[1]):
                best = (c, r)
    return best


def alpha_edge_inf_oracle(a, b, others, t_span=200.0, iters=80):
    """Direct evaluation of the filtration value of the edge {a, b}:
    minimize the distance to a over the part of the bisector line where a
    and b stay the nearest sites.  Grid with interval refinement."""
    mx, my = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    ux, uy = -dy / norm, dx / norm

    def feasible(t):
        y = (mx + t * ux, my + t * uy)
        da = math.hypot(y[0] - a[0], y[1] - a[1])
        return all(da <= math.hypot(y[0] - c[0], y[1] - c[1]) for c in others)

    def value(t):
        y = (mx + t * ux, my + t * uy)
        return math.hypot(y[0] - a[0], y[1] - a[1])

    ts = [t_span * (2.0 * i / 4000 - 1.0) for i in range(4001)]
    best_t = min((t for t in ts if feasible(t)), key=value)
    lo, hi = best_t - t_span / 1000, best_t + t_span / 1000
    for _ in range(iters):
        cands = [lo + (hi - lo) * i / 16 for i in range(17)]
        feas = [t for t in cands if feasible(t)]
        best_t = min(feas, key=value)
        width = (hi - lo) / 8
        lo, hi = best_t - width, best_t + width
    return value(best_t)
