"""Boundary-matrix reduction, simplex labels, persistence diagrams.

Standard left-to-right column reduction over the two-element field with the
clearing optimization, processing dimensions from the top down.  Homology is
reduced (the chain complex is augmented with C_{-1} = F), so the globally
first vertex of the filtration kills the empty-complex class and every other
vertex is positive.  Degree-0 diagrams therefore omit the one everlasting
component, and on contractible complexes there are no essential classes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .complexes import ComplexError, FilteredComplex, Simplex, facets_of

POSITIVE = 1
NEGATIVE = -1


@dataclass
class PersistencePairing:
    complex: FilteredComplex
    labels: Dict[Simplex, int]
    # (k, birth simplex, death simplex): a degree-k class born at the birth
    # k-simplex and killed by the death (k+1)-simplex.
    pairs: List[Tuple[int, Simplex, Simplex]]
    essential: List[Simplex]
    # First vertex of the filtration; pairs with the augmentation class.
    augmentation_death: Optional[Simplex]
    reduced_dims: Optional[Set[int]] = None

    def negatives(self, k: int) -> List[Simplex]:
        return [s for s, l in self.labels.items()
                if len(s) - 1 == k and l == NEGATIVE]

    def positives(self, k: int) -> List[Simplex]:
        return [s for s, l in self.labels.items()
                if len(s) - 1 == k and l == POSITIVE]


def reduce(fc: FilteredComplex, only_dim: Optional[int] = None) -> PersistencePairing:
    """Reduce the boundary matrix in filtration order.

    With ``only_dim=k`` just the k-columns are reduced: labels and pairs are
    produced for dimension k alone (enough for the degree-k spanning acycle)
    and ``essential`` is not populated.
    """
    order = fc.filtration_order()
    pos = fc.positions()
    labels: Dict[Simplex, int] = {}
    pairs: List[Tuple[int, Simplex, Simplex]] = []
    essential: List[Simplex] = []
    augmentation_death: Optional[Simplex] = None

    if only_dim is not None:
        dims: Sequence[int] = [only_dim]
    else:
        dims = range(fc.dim, -1, -1)

    cleared: Set[Simplex] = set()
    for k in dims:
        pivots: Dict[int, int] = {}      # row bit -> reduced column bits
        owner: Dict[int, Simplex] = {}   # row bit -> column simplex
        for s in order:
            if len(s) - 1 != k:
                continue
            if s in cleared:
                continue
            if k == 0:
                col = 1  # augmentation row
            else:
                col = 0
                for f in facets_of(s):
                    col ^= 1 << (pos[f] + 1)
            while col:
                h = col.bit_length() - 1
                piv = pivots.get(h)
                if piv is None:
                    break
                col ^= piv
            if col == 0:
                labels[s] = POSITIVE
                if only_dim is None:
                    essential.append(s)
            else:
                labels[s] = NEGATIVE
                h = col.bit_length() - 1
                pivots[h] = col
                owner[h] = s
                if h == 0:
                    augmentation_death = s
                else:
                    birth = order[h - 1]
                    pairs.append((k - 1, birth, s))
                    labels[birth] = POSITIVE
                    cleared.add(birth)
    pairs.sort(key=lambda t: (t[0], pos[t[1]]))
    essential.sort(key=lambda s: pos[s])
    return PersistencePairing(
        complex=fc,
        labels=labels,
        pairs=pairs,
        essential=essential,
        augmentation_death=augmentation_death,
        reduced_dims=set([only_dim]) if only_dim is not None else None,
    )


def label_of(pairing: PersistencePairing, simplex) -> int:
    s = tuple(sorted(simplex))
    if s not in pairing.complex:
        raise ComplexError(f"simplex {s} not in complex")
    return pairing.labels[s]


def diagram(pairing: PersistencePairing, k: int) -> List[Tuple[float, float]]:
    """Degree-k persistence diagram as (birth, death) weight pairs.

    Essential classes (none on contractible complexes) are not included.
    """
    w = pairing.complex.weights()
    pts = [(w[b], w[d]) for kk, b, d in pairing.pairs if kk == k]
    pts.sort()
    return pts


def diagram_csv(pairing: PersistencePairing) -> str:
    """All finite pairs as CSV `k,birth,death,birth_simplex,death_simplex`."""
    w = pairing.complex.weights()
    out = io.StringIO()
    out.write("k,birth,death,birth_simplex,death_simplex\n")
    for k, b, d in pairing.pairs:
        out.write(f"{k},{w[b]!r},{w[d]!r},"
                  f"{'-'.join(map(str, b))},{'-'.join(map(str, d))}\n")
    return out.getvalue()
