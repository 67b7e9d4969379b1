import math
import random

import pytest

from helpers import random_abstract_complex, random_points_2d

from alphamsa.complexes import FilteredComplex
from alphamsa.geometry import alpha_complex
from alphamsa.msa import minimal_spanning_acycle
from alphamsa.oracle import (OracleSizeError, enumerate_spanning_acycles,
                             kruskal_mst, min_weight_spanning_acycle)


def test_enumerate_hollow_triangle():
    fc = FilteredComplex({(0,): 0, (1,): 0, (2,): 0,
                          (0, 1): 1.0, (0, 2): 2.0, (1, 2): 3.0})
    accs = enumerate_spanning_acycles(fc, 1)
    assert len(accs) == 3
    assert all(len(a.faces) == 2 for a in accs)   # equal cardinality
    assert all(a.betti_k == 0 for a in accs)


def test_full_delaunay_top_degree_unique_acycle():
    pts = random_points_2d(random.Random(0), 7)
    fc = alpha_complex(pts, 2)
    if len(fc.simplices(2)) <= 14:
        accs = enumerate_spanning_acycles(fc, 2, max_faces=14)
        assert len(accs) == 1
        assert accs[0].faces == frozenset(fc.simplices(2))


def test_enumerate_size_cap():
    fc = alpha_complex(random_points_2d(random.Random(1), 20), 2)
    with pytest.raises(OracleSizeError):
        enumerate_spanning_acycles(fc, 1, max_faces=10)
    with pytest.raises(OracleSizeError):
        enumerate_spanning_acycles(fc, 1, max_faces=30)


def test_min_weight_is_unique_minimum_of_enumeration():
    rnd = random.Random(2)
    for _ in range(10):
        fc = random_abstract_complex(rnd, 6, rnd.randint(1, 4))
        for k in (1, 2):
            if not fc.simplices(k) or len(fc.simplices(k)) > 14:
                continue
            accs = enumerate_spanning_acycles(fc, k, max_faces=14)
            if not accs:
                continue
            cert = min_weight_spanning_acycle(fc, k)
            best = min(accs, key=lambda a: a.weight)
            assert cert.faces == best.faces
            assert cert.weight == pytest.approx(best.weight, abs=1e-12)
            # matroid bases: every spanning acycle has the same cardinality
            assert len({len(a.faces) for a in accs}) == 1
            # the persistence MSA appears in the enumeration and is minimal
            msa = minimal_spanning_acycle(fc, k)
            assert msa in [a.faces for a in accs]
            assert msa == cert.faces


def test_kruskal_examples():
    edges, total = kruskal_mst([(0, (0.0, 0.0)), (1, (1.0, 0.0))])
    assert edges == [(0, 1)] and total == pytest.approx(1.0)
    # 3-4-5 right triangle: the two legs
    edges, total = kruskal_mst([(0, (0.0, 0.0)), (1, (3.0, 0.0)), (2, (0.0, 4.0))])
    assert total == pytest.approx(7.0, abs=1e-12)
    # collinear points at 0, 1, 3
    edges, total = kruskal_mst([(0, (0.0, 0.0)), (1, (1.0, 0.0)), (2, (3.0, 0.0))])
    assert sorted(edges) == [(0, 1), (1, 2)]
    assert total == pytest.approx(3.0, abs=1e-12)


def test_kruskal_matches_brute_force_small():
    rnd = random.Random(3)
    from itertools import combinations

    def brute_mst_total(coords):
        ids = list(range(len(coords)))
        best = math.inf
        all_edges = list(combinations(ids, 2))

        def span_weight(tree):
            parent = list(ids)

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x
            total = 0.0
            joined = 0
            for a, b in tree:
                ra, rb = find(a), find(b)
                if ra == rb:
                    return None
                parent[ra] = rb
                joined += 1
                total += math.dist(coords[a], coords[b])
            return total if joined == len(ids) - 1 else None

        for tree in combinations(all_edges, len(ids) - 1):
            w = span_weight(tree)
            if w is not None:
                best = min(best, w)
        return best

    for _ in range(8):
        n = rnd.randint(3, 6)
        pts = random_points_2d(rnd, n)
        _, total = kruskal_mst(pts)
        assert total == pytest.approx(brute_mst_total([c for _, c in pts]),
                                      abs=1e-9)


def test_kruskal_twice_m1():
    pts = random_points_2d(random.Random(4), 15)
    fc = alpha_complex(pts, 2)
    from alphamsa.msa import PhiSpec, statistics
    _, total = kruskal_mst(pts)
    assert total == pytest.approx(2 * statistics(fc, 1, PhiSpec(1.0)).M,
                                  rel=1e-9)
