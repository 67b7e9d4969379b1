"""Sign-exact geometric predicates for d = 2, 3.

Each predicate is evaluated in double precision first, guarded by a static
forward error bound on the determinant (Shewchuk-style "stage A" filter).
When the filter cannot certify the sign, the determinant is re-evaluated in
exact rational arithmetic over the binary values of the inputs, so the
returned sign is always the true sign for the given float coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

_EPS = 2.0 ** -53

# Stage-A coefficients from Shewchuk's predicate derivations.
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_O3D_BOUND = (7.0 + 56.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS
_ISP_BOUND = (16.0 + 224.0 * _EPS) * _EPS


class DegeneracyError(ValueError):
    """A geometric predicate evaluated to exactly zero where the caller
    requires general position, or an input is otherwise degenerate."""

    def __init__(self, message: str, witness: Sequence[int] = ()):
        super().__init__(message)
        self.witness = tuple(witness)


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _frac(v) -> Fraction:
    return Fraction(v)


def orient2d(a, b, c) -> int:
    """Sign of the signed area of triangle (a, b, c); +1 = counterclockwise."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return _sign(det)
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return _sign(det)
        detsum = -detleft - detright
    else:
        return _sign(det)
    if abs(det) > _CCW_BOUND * detsum:
        return _sign(det)
    ax, ay = _frac(a[0]), _frac(a[1])
    bx, by = _frac(b[0]), _frac(b[1])
    cx, cy = _frac(c[0]), _frac(c[1])
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def orient3d(a, b, c, d) -> int:
    """Sign of the 3x3 determinant of (a-d, b-d, c-d); +1 when d sees
    (a, b, c) in counterclockwise order."""
    adx, ady, adz = a[0] - d[0], a[1] - d[1], a[2] - d[2]
    bdx, bdy, bdz = b[0] - d[0], b[1] - d[1], b[2] - d[2]
    cdx, cdy, cdz = c[0] - d[0], c[1] - d[1], c[2] - d[2]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady

    det = (adz * (bdxcdy - cdxbdy)
           + bdz * (cdxady - adxcdy)
           + cdz * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
                 + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
                 + (abs(adxbdy) + abs(bdxady)) * abs(cdz))
    if abs(det) > _O3D_BOUND * permanent:
        return _sign(det)
    fa = [_frac(a[i]) - _frac(d[i]) for i in range(3)]
    fb = [_frac(b[i]) - _frac(d[i]) for i in range(3)]
    fc = [_frac(c[i]) - _frac(d[i]) for i in range(3)]
    exact = (fa[2] * (fb[0] * fc[1] - fc[0] * fb[1])
             + fb[2] * (fc[0] * fa[1] - fa[0] * fc[1])
             + fc[2] * (fa[0] * fb[1] - fb[0] * fa[1]))
    return _sign(exact)


def incircle(a, b, c, d) -> int:
    """Sign test for d against the circle through (a, b, c).

    Positive iff d lies strictly inside, assuming orient2d(a, b, c) > 0.
    The sign flips with the orientation of (a, b, c).
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > _ICC_BOUND * permanent:
        return _sign(det)
    fa = [_frac(a[i]) - _frac(d[i]) for i in range(2)]
    fb = [_frac(b[i]) - _frac(d[i]) for i in range(2)]
    fc = [_frac(c[i]) - _frac(d[i]) for i in range(2)]
    la = fa[0] * fa[0] + fa[1] * fa[1]
    lb = fb[0] * fb[0] + fb[1] * fb[1]
    lc = fc[0] * fc[0] + fc[1] * fc[1]
    exact = (la * (fb[0] * fc[1] - fc[0] * fb[1])
             + lb * (fc[0] * fa[1] - fa[0] * fc[1])
             + lc * (fa[0] * fb[1] - fb[0] * fa[1]))
    return _sign(exact)


def insphere(a, b, c, d, e) -> int:
    """Sign test for e against the sphere through (a, b, c, d).

    Positive iff e lies strictly inside, assuming orient3d(a, b, c, d) > 0.
    """
    aex, aey, aez = a[0] - e[0], a[1] - e[1], a[2] - e[2]
    bex, bey, bez = b[0] - e[0], b[1] - e[1], b[2] - e[2]
    cex, cey, cez = c[0] - e[0], c[1] - e[1], c[2] - e[2]
    dex, dey, dez = d[0] - e[0], d[1] - e[1], d[2] - e[2]

    aexbey = aex * bey
    bexaey = bex * aey
    ab = aexbey - bexaey
    bexcey = bex * cey
    cexbey = cex * bey
    bc = bexcey - cexbey
    cexdey = cex * dey
    dexcey = dex * cey
    cd = cexdey - dexcey
    dexaey = dex * aey
    aexdey = aex * dey
    da = dexaey - aexdey
    aexcey = aex * cey
    cexaey = cex * aey
    ac = aexcey - cexaey
    bexdey = bex * dey
    dexbey = dex * bey
    bd = bexdey - dexbey

    abc = aez * bc - bez * ac + cez * ab
    bcd = bez * cd - cez * bd + dez * bc
    cda = cez * da + dez * ac + aez * cd
    dab = dez * ab + aez * bd + bez * da

    alift = aex * aex + aey * aey + aez * aez
    blift = bex * bex + bey * bey + bez * bez
    clift = cex * cex + cey * cey + cez * cez
    dlift = dex * dex + dey * dey + dez * dez

    det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd)

    aezplus, bezplus = abs(aez), abs(bez)
    cezplus, dezplus = abs(cez), abs(dez)
    aexbeyplus, bexaeyplus = abs(aexbey), abs(bexaey)
    bexceyplus, cexbeyplus = abs(bexcey), abs(cexbey)
    cexdeyplus, dexceyplus = abs(cexdey), abs(dexcey)
    dexaeyplus, aexdeyplus = abs(dexaey), abs(aexdey)
    aexceyplus, cexaeyplus = abs(aexcey), abs(cexaey)
    bexdeyplus, dexbeyplus = abs(bexdey), abs(dexbey)
    permanent = (((cexdeyplus + dexceyplus) * bezplus
                  + (dexbeyplus + bexdeyplus) * cezplus
                  + (bexceyplus + cexbeyplus) * dezplus) * alift
                 + ((dexaeyplus + aexdeyplus) * cezplus
                    + (aexceyplus + cexaeyplus) * dezplus
                    + (cexdeyplus + dexceyplus) * aezplus) * blift
                 + ((aexbeyplus + bexaeyplus) * dezplus
                    + (bexdeyplus + dexbeyplus) * aezplus
                    + (dexaeyplus + aexdeyplus) * bezplus) * clift
                 + ((bexceyplus + cexbeyplus) * aezplus
                    + (cexaeyplus + aexceyplus) * bezplus
                    + (aexbeyplus + bexaeyplus) * cezplus) * dlift)
    if abs(det) > _ISP_BOUND * permanent:
        return _sign(det)
    return _insphere_exact(a, b, c, d, e)


def _insphere_exact(a, b, c, d, e) -> int:
    pts = []
    for p in (a, b, c, d):
        row = [_frac(p[i]) - _frac(e[i]) for i in range(3)]
        row.append(row[0] * row[0] + row[1] * row[1] + row[2] * row[2])
        pts.append(row)

    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    total = Fraction(0)
    sign = 1
    for col in range(4):
        minor = [[pts[r][cc] for cc in range(4) if cc != col] for r in (1, 2, 3)]
        total += sign * pts[0][col] * det3(minor)
        sign = -sign
    # Expansion above computes det with rows (a,b,c,d); the insphere sign
    # convention matches the float path, which expands along lifted columns.
    return _sign(total)


def orient(simplex_points, p) -> int:
    """Dimension-dispatching orientation test (facet has d points)."""
    if len(simplex_points) == 2:
        return orient2d(simplex_points[0], simplex_points[1], p)
    return orient3d(simplex_points[0], simplex_points[1], simplex_points[2], p)


def in_circumball(cell_points, p) -> int:
    """Dimension-dispatching open-circumball test for a full-dimensional cell."""
    if len(cell_points) == 3:
        return incircle(cell_points[0], cell_points[1], cell_points[2], p)
    return insphere(cell_points[0], cell_points[1], cell_points[2],
                    cell_points[3], p)
