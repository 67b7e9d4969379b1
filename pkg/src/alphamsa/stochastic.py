"""Poisson sampling in boxes, window geometry, and the robust point
configuration used for the variance lower bound.

Randomness comes from numpy's counter-based Philox generator with
(seed, replicate) stream addressing, so replicate r of a run is bit-identical
no matter how replicates are scheduled across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geometry import Point

_MASK64 = (1 << 64) - 1


def rng_stream(seed: int, replicate: int = 0) -> np.random.Generator:
    """Philox stream addressed by (seed, replicate); draws are sequential."""
    key = (int(seed) & _MASK64) | ((int(replicate) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class Window:
    """Axis-aligned box of volume n: anchor + [-n^(1/d)/2, n^(1/d)/2]^d."""
    n: float
    d: int
    anchor: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("window volume must be positive")
        if self.d not in (2, 3):
            raise ValueError("d must be 2 or 3")
        anchor = self.anchor if self.anchor else tuple(0.0 for _ in range(self.d))
        if len(anchor) != self.d:
            raise ValueError("anchor dimension mismatch")
        object.__setattr__(self, "anchor", tuple(float(a) for a in anchor))

    @property
    def side(self) -> float:
        return self.n ** (1.0 / self.d)

    @property
    def volume(self) -> float:
        return self.n

    def bounds(self) -> List[Tuple[float, float]]:
        h = self.side / 2.0
        return [(a - h, a + h) for a in self.anchor]

    def contains(self, coords: Sequence[float]) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(coords, self.bounds()))


def sample_poisson(lam: float, window: Window, seed: int, replicate: int = 0,
                   rng: Optional[np.random.Generator] = None) -> List[Point]:
    """Poisson(lam * volume) many i.i.d. uniform points in the window."""
    if lam <= 0:
        raise ValueError("intensity must be positive")
    if rng is None:
        rng = rng_stream(seed, replicate)
    count = int(rng.poisson(lam * window.volume))
    lows = np.array([b[0] for b in window.bounds()])
    highs = np.array([b[1] for b in window.bounds()])
    coords = rng.uniform(lows, highs, size=(count, window.d))
    return [Point(i, tuple(row)) for i, row in enumerate(coords)]


def restrict(points: Sequence[Point], window: Window) -> List[Point]:
    return [p for p in points if window.contains(p.coords)]


# ---------------------------------------------------------------------------
# the robust configuration Q(r)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BallRegion:
    center: Tuple[float, ...]
    radius: float

    def contains(self, coords: Sequence[float]) -> bool:
        return sum((c - x) ** 2 for c, x in zip(self.center, coords)) \
            <= self.radius ** 2

    def sample(self, rng: np.random.Generator) -> Tuple[float, ...]:
        d = len(self.center)
        while True:
            u = rng.uniform(-self.radius, self.radius, size=d)
            if float(np.dot(u, u)) <= self.radius ** 2:
                return tuple(c + x for c, x in zip(self.center, u))


@dataclass(frozen=True)
class ConeBallRegion:
    """Ball intersected with a cone of given half-angle at the ball center."""
    center: Tuple[float, ...]
    axis: Tuple[float, ...]          # unit vector
    half_angle: float
    radius: float

    def _in_cone(self, offset: Sequence[float]) -> bool:
        norm = math.sqrt(sum(x * x for x in offset))
        if norm == 0.0:
            return True
        cosang = sum(a * x for a, x in zip(self.axis, offset)) / norm
        return cosang >= math.cos(self.half_angle)

    def contains(self, coords: Sequence[float]) -> bool:
        offset = [c - x for c, x in zip(coords, self.center)]
        if sum(x * x for x in offset) > self.radius ** 2:
            return False
        return self._in_cone(offset)

    def sample(self, rng: np.random.Generator) -> Tuple[float, ...]:
        d = len(self.center)
        while True:
            u = rng.uniform(-self.radius, self.radius, size=d)
            if float(np.dot(u, u)) > self.radius ** 2:
                continue
            if self._in_cone(u):
                return tuple(c + x for c, x in zip(self.center, u))


@dataclass(frozen=True)
class ConfigSpec:
    """Parameters of the 2d+2 point configuration in B_r(0).

    rho is the absolute outer radius (default 21*d*r, strictly above the
    20*d*r requirement); eps is the perturbation radius.
    """
    d: int
    r: float = 1.0
    rho: Optional[float] = None
    eps: Optional[float] = None

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("d must be 2 or 3")
        if self.r <= 0:
            raise ValueError("r must be positive")
        if self.rho is None:
            object.__setattr__(self, "rho", 21.0 * self.d * self.r)
        if self.eps is None:
            object.__setattr__(self, "eps", self.r / 50.0)
        if not self.rho > 20.0 * self.d * self.r:
            raise ValueError("rho must exceed 20*d*r")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        if self.d == 2:
            if not self.eps < self.r / 40.0:
                raise ValueError("d=2 requires eps < r/40")
        else:
            if not 2 * (self.d + 2) * self.eps < self.r / 4.0:
                raise ValueError("d>=3 requires 2(d+2)eps < r/4")


# Cone axes for the inner points at d=2, indexed like p_1, p_2, p_3.
_CONE_DIRS_2D = ((-2.0, -1.0), (0.0, -1.0), (2.0, -1.0))
_CONE_HALF_ANGLE = math.pi / 12.0

# Rotation of the d=2 regular triangle.  The printed cone axes are
# tangential at p_1/p_3 and radial at p_2 exactly for this placement,
# which is what makes the angle bound of the d=2 construction hold for
# every admissible perturbation (p_1 at 150, p_2 at 270, p_3 at 30 degrees).
_TRIANGLE_ANGLES_2D = (150.0, 270.0, 30.0)


def regular_simplex(d: int, r: float) -> List[Tuple[float, ...]]:
    """Vertices of a regular d-simplex inscribed in the radius-r sphere."""
    if d == 2:
        return [(r * math.cos(math.radians(a)), r * math.sin(math.radians(a)))
                for a in _TRIANGLE_ANGLES_2D]
    s23 = math.sqrt(2.0 / 3.0)
    s22 = 2.0 * math.sqrt(2.0) / 3.0
    verts = [(0.0, 0.0, 1.0),
             (s22, 0.0, -1.0 / 3.0),
             (-math.sqrt(2.0) / 3.0, s23, -1.0 / 3.0),
             (-math.sqrt(2.0) / 3.0, -s23, -1.0 / 3.0)]
    return [tuple(r * c for c in v) for v in verts]


@dataclass(frozen=True)
class Configuration:
    spec: ConfigSpec
    inner: Tuple[Tuple[float, ...], ...]   # p_1 .. p_{d+1}
    outer: Tuple[Tuple[float, ...], ...]   # q_1 .. q_{d+1}
    regions: Tuple[object, ...]            # aligned with inner + outer

    def anchors(self) -> List[Point]:
        """Anchor points with ids 1..2d+2 (0 is reserved for the origin)."""
        return [Point(i + 1, c) for i, c in enumerate(self.inner + self.outer)]


def build_config(spec: ConfigSpec) -> Configuration:
    inner = regular_simplex(spec.d, spec.r)
    # q_i sits on the ray from the origin through the center of the face
    # opposite p_i; for a regular simplex that direction is -p_i.
    outer = []
    for p in inner:
        norm = math.sqrt(sum(c * c for c in p))
        outer.append(tuple(-spec.rho * c / norm for c in p))
    regions: List[object] = []
    for i, p in enumerate(inner):
        if spec.d == 2:
            ax = _CONE_DIRS_2D[i]
            nrm = math.hypot(*ax)
            regions.append(ConeBallRegion(
                center=p, axis=(ax[0] / nrm, ax[1] / nrm),
                half_angle=_CONE_HALF_ANGLE, radius=spec.eps))
        else:
            regions.append(BallRegion(center=p, radius=spec.eps))
    for q in outer:
        regions.append(BallRegion(center=q, radius=spec.eps))
    return Configuration(spec=spec, inner=tuple(inner), outer=tuple(outer),
                         regions=tuple(regions))


def sample_config(spec: ConfigSpec, seed: int, replicate: int = 0,
                  rng: Optional[np.random.Generator] = None,
                  config: Optional[Configuration] = None) -> List[Point]:
    """One uniform point per region, ids 1..2d+2 (0 reserved for the origin).

    With eps = 0 the anchors are returned unperturbed (diagnostic mode).
    """
    if config is None:
        config = build_config(spec)
    if spec.eps == 0.0:
        return config.anchors()
    if rng is None:
        rng = rng_stream(seed, replicate)
    pts = []
    for i, region in enumerate(config.regions):
        pts.append(Point(i + 1, region.sample(rng)))
    return pts


def origin_point(d: int, pid: int = 0) -> Point:
    return Point(pid, tuple(0.0 for _ in range(d)))
