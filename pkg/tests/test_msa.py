import math
import random
from fractions import Fraction

import pytest

from helpers import random_abstract_complex, random_points_2d

from alphamsa.complexes import ComplexError, FilteredComplex
from alphamsa.geometry import alpha_complex
from alphamsa.msa import (AddOneCost, ContractError, PhiSpec, add_one_cost,
                          add_one_simplex_check, decompose_add_one,
                          lifetime_sum, minimal_spanning_acycle,
                          stability_check, statistics)
from alphamsa.oracle import kruskal_mst, min_weight_spanning_acycle
from alphamsa.persistence import diagram, reduce

PHI1 = PhiSpec(1.0)


def exact_equilateral():
    return FilteredComplex({(0,): 0.0, (1,): 0.0, (2,): 0.0,
                            (0, 1): 0.5, (0, 2): 0.5, (1, 2): 0.5,
                            (0, 1, 2): 1 / math.sqrt(3)})


def monotone_perturbation(fc, rnd, eps):
    """Perturbed weights within eps of the originals, kept monotone by
    taking the running face maximum."""
    out = {}
    for s in fc.filtration_order():
        w = fc.weight(s) + rnd.uniform(0.0, eps)
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if f:
                w = max(w, out[f])
        out[s] = w
    return out


def test_phispec_contract():
    with pytest.raises(ContractError):
        PhiSpec(0.0)
    assert PhiSpec(2.0)(3.0) == 9.0


def test_msa_examples():
    # three collinear-free points: the two lighter merging edges
    fc = FilteredComplex({(0,): 0, (1,): 0, (2,): 0,
                          (0, 1): 1.0, (0, 2): 2.0, (1, 2): 3.0})
    assert minimal_spanning_acycle(fc, 1) == {(0, 1), (0, 2)}
    # k = d on a full Delaunay complex: every top simplex
    pts = random_points_2d(random.Random(1), 9)
    fca = alpha_complex(pts, 2)
    assert minimal_spanning_acycle(fca, 2) == frozenset(fca.simplices(2))
    # k = 0: empty by convention
    assert minimal_spanning_acycle(fca, 0) == frozenset()


def test_statistics_equilateral():
    fc = exact_equilateral()
    s1 = statistics(fc, 1, PHI1)
    s2 = statistics(fc, 2, PHI1)
    assert s1.M == pytest.approx(1.0, abs=1e-15)
    assert s1.B == pytest.approx(0.5, abs=1e-15)
    assert s2.M == pytest.approx(1 / math.sqrt(3), abs=1e-15)
    assert s2.L == pytest.approx(1 / math.sqrt(3) - 0.5, abs=1e-15)


def test_b0_zero_and_l1_equals_m1():
    pts = random_points_2d(random.Random(2), 12)
    fc = alpha_complex(pts, 2)
    s0 = statistics(fc, 0, PHI1)
    s1 = statistics(fc, 1, PHI1)
    assert s0.M == 0.0 and s0.B == 0.0
    assert s1.L == pytest.approx(s1.M, abs=1e-12)


def test_l_contract_errors():
    fc = exact_equilateral()
    with pytest.raises(ContractError):
        lifetime_sum(fc, 1, PhiSpec(2.0))
    with pytest.raises(ContractError):
        lifetime_sum(fc, 0, PHI1)
    assert statistics(fc, 1, PhiSpec(2.0)).L is None
    with pytest.raises(ContractError):
        statistics(fc, 5, PHI1)


def test_lifetime_equals_diagram_sum():
    rnd = random.Random(3)
    for _ in range(10):
        pts = random_points_2d(rnd, rnd.randint(6, 20))
        fc = alpha_complex(pts, 2)
        pairing = reduce(fc)
        for k in (1, 2):
            l_k = lifetime_sum(fc, k, PHI1)
            dgm = diagram(pairing, k - 1)
            assert l_k == pytest.approx(
                math.fsum(d - b for b, d in dgm), abs=1e-9)
            assert l_k >= -1e-12


def test_msa_matches_oracle_small():
    rnd = random.Random(4)
    for _ in range(10):
        fc = random_abstract_complex(rnd, 6, rnd.randint(1, 5))
        for k in (1, 2):
            if not fc.simplices(k):
                continue
            mine = minimal_spanning_acycle(fc, k)
            cert = min_weight_spanning_acycle(fc, k)
            assert mine == cert.faces
            m = statistics(fc, k, PHI1).M
            assert m == pytest.approx(cert.weight, abs=1e-12)


def test_mst_correspondence():
    rnd = random.Random(5)
    for _ in range(10):
        pts = random_points_2d(rnd, rnd.randint(5, 40))
        fc = alpha_complex(pts, 2)
        _, total = kruskal_mst(pts)
        m1 = statistics(fc, 1, PHI1).M
        assert abs(m1 - total / 2) <= 1e-9 * max(1.0, total)


def test_add_one_cost_far_point():
    # a far new point contributes exactly one Gabriel MST edge of weight
    # half the distance to its nearest neighbor
    rnd = random.Random(6)
    pts = random_points_2d(rnd, 10, lo=0.0, hi=1.0)
    new = (200.0, 0.5)
    cost = add_one_cost(pts, new, 1, PHI1, 2)
    nearest = min(math.hypot(c[0] - new[0], c[1] - new[1]) for _, c in pts)
    edges_before, before = kruskal_mst(pts)
    edges_after, after = kruskal_mst(pts + [(99, new)])
    assert after - before == pytest.approx(nearest, abs=1e-9)
    assert cost.dm == pytest.approx(nearest / 2, abs=1e-6)


def test_stability_identity_and_shift():
    fc = exact_equilateral()
    res = stability_check(fc, dict(fc.weights()), 1, 1)
    assert res.lhs == 0.0 and res.ok
    shifted = {s: w + (1e-3 if len(s) >= 1 else 0.0)
               for s, w in fc.weights().items()}
    res_inf = stability_check(fc, shifted, 1, math.inf)
    assert res_inf.lhs <= 1e-3 + 1e-12 and res_inf.ok


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_stability_random_perturbations(p):
    rnd = random.Random(7)
    for _ in range(15):
        pts = random_points_2d(rnd, rnd.randint(6, 15))
        fc = alpha_complex(pts, 2)
        other = monotone_perturbation(fc, rnd, 1e-3)
        for k in (1, 2):
            res = stability_check(fc, other, k, p)
            assert res.ok, (k, p, res)
            if p == 1:
                assert res.lhs <= len(fc.simplices(k)) * 1e-3 + 1e-9


def test_add_one_simplex_positive_keeps_msa():
    # inserting the hollow triangle's filling: positive insertion impossible
    # here (it kills the cycle), so use a duplicate-path edge instead
    fc = FilteredComplex({(0,): 0, (1,): 0, (2,): 0,
                          (0, 1): 1.0, (0, 2): 2.0})
    res = add_one_simplex_check(fc, (1, 2), 5.0)
    assert res.ok and res.inserted_label == 1
    assert res.gained == frozenset() and res.lost == frozenset()


def test_add_one_simplex_negative_displaces_at_most_one():
    fc = FilteredComplex({(0,): 0, (1,): 0, (2,): 0,
                          (0, 1): 1.0, (0, 2): 2.0})
    res = add_one_simplex_check(fc, (1, 2), 0.5)
    assert res.ok and res.inserted_label == -1
    assert res.gained == frozenset({(1, 2)})
    assert res.lost == frozenset({(0, 2)})


def test_add_one_simplex_random_suite():
    rnd = random.Random(8)
    checked = 0
    while checked < 60:
        fc = random_abstract_complex(rnd, 6, rnd.randint(1, 4))
        absent_edges = [(a, b) for a in range(6) for b in range(a + 1, 6)
                        if (a, b) not in fc and (a,) in fc and (b,) in fc]
        if not absent_edges:
            continue
        s = absent_edges[rnd.randrange(len(absent_edges))]
        res = add_one_simplex_check(fc, s, rnd.uniform(0.0, 2.0))
        assert res.ok
        checked += 1


def test_decompose_add_one_exact():
    rnd = random.Random(9)
    for _ in range(6):
        pts = random_points_2d(rnd, rnd.randint(8, 16))
        new = (rnd.uniform(2, 8), rnd.uniform(2, 8))
        for k in (1, 2):
            res = decompose_add_one(pts, new, k, PHI1, 2)
            assert res.exact_match
            assert res.single_step_ok
            assert isinstance(res.direct, Fraction)
            cost = add_one_cost(pts, new, k, PHI1, 2)
            assert float(res.direct) == pytest.approx(cost.dm, abs=1e-9)
