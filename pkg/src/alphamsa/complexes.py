"""Filtered simplicial complexes over the two-element field.

A simplex is a strictly increasing tuple of vertex ids.  A FilteredComplex
maps simplices to non-negative weights, closed under faces and with weights
monotone under face inclusion.  Filtration order breaks ties by
(weight, dimension, lexicographic vertex tuple), which puts every face
before its cofaces and is deterministic even on symmetric synthetic inputs.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Simplex = Tuple[int, ...]


class ComplexError(ValueError):
    pass


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(vertices))
    if len(set(s)) != len(s):
        raise ComplexError(f"duplicate vertices in simplex {s}")
    return s


def facets_of(s: Simplex) -> List[Simplex]:
    """Codimension-1 faces."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def all_faces(s: Simplex) -> Iterator[Simplex]:
    """Every nonempty face of s, including s itself."""
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


class FilteredComplex:
    """Immutable weighted simplicial complex.

    The constructor validates closure under faces and weight monotonicity;
    both are exact comparisons, no tolerance.
    """

    __slots__ = ("_weights", "_dim", "_order", "_positions")

    def __init__(self, weights: Mapping[Simplex, float], validate: bool = True):
        w: Dict[Simplex, float] = {}
        for s, v in weights.items():
            w[make_simplex(s)] = float(v)
        if validate:
            for s, v in w.items():
                if not math.isfinite(v):
                    raise ComplexError(f"non-finite weight {v} for {s}")
                for f in facets_of(s):
                    if f not in w:
                        raise ComplexError(f"{s} present but face {f} missing")
                    if w[f] > v:
                        raise ComplexError(
                            f"weights not monotone: w{f}={w[f]} > w{s}={v}")
        self._weights = w
        self._dim = max((len(s) - 1 for s in w), default=-1)
        self._order: Optional[Tuple[Simplex, ...]] = None
        self._positions: Optional[Dict[Simplex, int]] = None

    # -- basic queries ------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return len(self._weights)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._weights

    def weight(self, s) -> float:
        try:
            return self._weights[tuple(s)]
        except KeyError:
            raise ComplexError(f"simplex {tuple(s)} not in complex") from None

    def weights(self) -> Mapping[Simplex, float]:
        return self._weights

    def simplices(self, k: Optional[int] = None) -> List[Simplex]:
        if k is None:
            return list(self._weights)
        return [s for s in self._weights if len(s) - 1 == k]

    def face_counts(self) -> List[int]:
        counts = [0] * (self._dim + 1)
        for s in self._weights:
            counts[len(s) - 1] += 1
        return counts

    # -- filtration ---------------------------------------------------------

    def filtration_order(self) -> Tuple[Simplex, ...]:
        """Simplices sorted by (weight, dim, lex); faces precede cofaces."""
        if self._order is None:
            self._order = tuple(sorted(
                self._weights, key=lambda s: (self._weights[s], len(s), s)))
        return self._order

    def positions(self) -> Dict[Simplex, int]:
        if self._positions is None:
            self._positions = {s: i for i, s in enumerate(self.filtration_order())}
        return self._positions

    def sublevel(self, t: float, strict: bool = False) -> "FilteredComplex":
        if strict:
            kept = {s: v for s, v in self._weights.items() if v < t}
        else:
            kept = {s: v for s, v in self._weights.items() if v <= t}
        return FilteredComplex(kept, validate=False)

    def skeleton(self, k: int) -> "FilteredComplex":
        kept = {s: v for s, v in self._weights.items() if len(s) - 1 <= k}
        return FilteredComplex(kept, validate=False)

    # -- editing (returns new complexes; instances stay immutable) ----------

    def with_simplex(self, s, w: float) -> "FilteredComplex":
        s = make_simplex(s)
        if s in self._weights:
            raise ComplexError(f"{s} already present")
        new = dict(self._weights)
        new[s] = float(w)
        return FilteredComplex(new)

    def without_simplex(self, s) -> "FilteredComplex":
        s = make_simplex(s)
        if s not in self._weights:
            raise ComplexError(f"{s} not present")
        for other in self._weights:
            if len(other) == len(s) + 1 and set(s) < set(other):
                raise ComplexError(f"cannot remove {s}: coface {other} present")
        new = dict(self._weights)
        del new[s]
        return FilteredComplex(new, validate=False)


# -- boundary matrices and Betti numbers ------------------------------------


def _rank_f2(columns: Iterable[int]) -> int:
    """Rank of a set of F2 columns given as python-int bitsets."""
    pivots: Dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            h = col.bit_length() - 1
            if h in pivots:
                col ^= pivots[h]
            else:
                pivots[h] = col
                rank += 1
                break
    return rank


def boundary_rank(fc: FilteredComplex, k: int) -> int:
    """Rank of the k-th boundary operator, with the augmentation
    C_{-1} = F so that every vertex has boundary the empty simplex."""
    if k < 0 or k > fc.dim + 1:
        return 0
    if k == 0:
        return 1 if fc.simplices(0) else 0
    rows = {s: i for i, s in enumerate(fc.simplices(k - 1))}
    cols = []
    for s in fc.simplices(k):
        bits = 0
        for f in facets_of(s):
            bits ^= 1 << rows[f]
        cols.append(bits)
    return _rank_f2(cols)


def betti(fc: FilteredComplex, k: int) -> int:
    """Reduced k-th Betti number over the two-element field."""
    if k < 0:
        raise ComplexError("degree must be non-negative")
    n_k = len(fc.simplices(k))
    if n_k == 0:
        return 0
    return n_k - boundary_rank(fc, k) - boundary_rank(fc, k + 1)


def euler_characteristic(fc: FilteredComplex) -> int:
    return sum((-1) ** (len(s) - 1) for s in fc.weights())


# -- symmetric difference and replay -----------------------------------------

# Ops: ("del", simplex) removes from the current complex,
#      ("ins", simplex, weight) inserts with the target complex's weight.
Op = Tuple


def symmetric_difference(a: FilteredComplex, b: FilteredComplex) -> List[Op]:
    """Single-simplex edit script from a to b: deletions (cofaces before
    faces), then insertions (faces before cofaces).  Every intermediate
    simplex set is a valid complex."""
    a_only = sorted((s for s in a.weights() if s not in b),
                    key=lambda s: (-len(s), s))
    b_only = sorted((s for s in b.weights() if s not in a),
                    key=lambda s: (len(s), s))
    ops: List[Op] = [("del", s) for s in a_only]
    ops.extend(("ins", s, b.weight(s)) for s in b_only)
    return ops


def replay(a: FilteredComplex, ops: Sequence[Op]) -> FilteredComplex:
    """Apply an edit script; weights of untouched simplices are kept from a."""
    current = dict(a.weights())
    for op in ops:
        if op[0] == "del":
            s = op[1]
            if s not in current:
                raise ComplexError(f"replay: cannot delete absent {s}")
            del current[s]
        elif op[0] == "ins":
            _, s, w = op
            if s in current:
                raise ComplexError(f"replay: cannot insert present {s}")
            current[s] = w
        else:
            raise ComplexError(f"unknown op {op!r}")
    return FilteredComplex(current)


# -- serialization ------------------------------------------------------------
# One simplex per line: "v0 v1 ... vk <weight.hex()>".  Lines starting with
# '#' are headers/comments.  Hex floats round-trip 64-bit weights bit-exactly.


def serialize_complex(fc: FilteredComplex, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for s in fc.filtration_order():
        lines.append(" ".join(str(v) for v in s) + " " + fc.weights()[s].hex())
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> FilteredComplex:
    weights: Dict[Simplex, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ComplexError(f"line {lineno}: expected 'v0 ... vk weight'")
        try:
            verts = [int(p) for p in parts[:-1]]
            w = float.fromhex(parts[-1])
        except ValueError:
            try:
                verts = [int(p) for p in parts[:-1]]
                w = float(parts[-1])
            except ValueError as exc:
                raise ComplexError(f"line {lineno}: {exc}") from None
        weights[make_simplex(verts)] = w
    return FilteredComplex(weights)
