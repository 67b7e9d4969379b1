import random
from fractions import Fraction

import pytest

from alphamsa.predicates import incircle, insphere, orient2d, orient3d


def exact_orient2d(a, b, c):
    det = ((Fraction(a[0]) - Fraction(c[0])) * (Fraction(b[1]) - Fraction(c[1]))
           - (Fraction(a[1]) - Fraction(c[1])) * (Fraction(b[0]) - Fraction(c[0])))
    return (det > 0) - (det < 0)


def test_orient2d_basic():
    assert orient2d((0, 0), (1, 0), (0, 1)) == 1
    assert orient2d((0, 0), (0, 1), (1, 0)) == -1
    assert orient2d((0, 0), (1, 1), (2, 2)) == 0


def test_orient2d_matches_exact_on_near_degenerate():
    rnd = random.Random(0)
    for _ in range(2000):
        base = rnd.uniform(-1, 1)
        a = (base, base)
        b = (base + 1e-8, base + 1e-8 * (1 + rnd.uniform(-1e-9, 1e-9)))
        c = (base + 2e-8, base + 2e-8)
        assert orient2d(a, b, c) == exact_orient2d(a, b, c)


def test_orient3d_conventions():
    # positively oriented tetrahedron
    assert orient3d((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)) != 0
    s = orient3d((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
    # swapping two vertices flips the sign
    assert orient3d((1, 0, 0), (0, 0, 0), (0, 1, 0), (0, 0, 1)) == -s
    assert orient3d((0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)) == 0


def test_incircle_unit_circle():
    a, b, c = (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)
    assert orient2d(a, b, c) == 1
    assert incircle(a, b, c, (0.0, 0.0)) == 1          # strictly inside
    assert incircle(a, b, c, (0.0, -1.0)) == 0         # cocircular
    assert incircle(a, b, c, (2.0, 0.0)) == -1         # outside


def test_incircle_orientation_flip():
    a, b, c = (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)
    assert incircle(a, c, b, (0.0, 0.0)) == -1


def test_insphere_unit_sphere():
    a, b, c, d = (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)
    sign = orient3d(a, b, c, d)
    assert sign != 0
    inside = insphere(a, b, c, d, (0.0, 0.0, 0.0)) * sign
    outside = insphere(a, b, c, d, (2.0, 0.0, 0.0)) * sign
    boundary = insphere(a, b, c, d, (0.0, -1.0, 0.0))
    assert inside > 0 and outside < 0 and boundary == 0


def test_insphere_filter_fallback_consistency():
    # tiny perturbations around a cospherical configuration must resolve
    # to the exact sign, not a rounded one
    a, b, c, d = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, -1.0)
    sign = orient3d(a, b, c, d)
    for eps in (1e-18, 1e-16, 1e-14):
        p_in = (0.0, -1.0 + eps, 0.0)
        p_out = (0.0, -1.0 - eps, 0.0)
        if eps >= 1e-16:  # representable offsets around 1.0
            assert insphere(a, b, c, d, p_in) * sign >= 0
            assert insphere(a, b, c, d, p_out) * sign <= 0


@pytest.mark.parametrize("seed", range(5))
def test_orient2d_random_agreement(seed):
    rnd = random.Random(seed)
    for _ in range(500):
        pts = [(rnd.uniform(-10, 10), rnd.uniform(-10, 10)) for _ in range(3)]
        assert orient2d(*pts) == exact_orient2d(*pts)
