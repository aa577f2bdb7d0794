"""Reduced rational homology of order complexes, and complement Betti numbers.

Homology ranks come from exact ranks of boundary matrices over Q (sparse
Gaussian elimination with Fractions).  The Betti numbers of the ordered
0-cycle space over complex affine space are assembled from the homology of
open lattice intervals: an element I of codimension cd (real codimension of
its subspace, 2 * dim_x * (|d| - #blocks)) contributes its reduced homology
in degree cd - i - 2 to cohomology degree i.  The offset is pinned by two
anchor cases (a single hyperplane in C^2 and ordered 3-point configuration
space in C) and frozen by tests.

Coefficients are rationals throughout; orientation modules of the subspaces
are canonically trivial for affine space and are not tracked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import GuardError, StructureError, ValidationError
from .nlattice import FinitePoset, NEqualsLattice, lower_interval

DEFAULT_FACE_GUARD = 10 ** 5


@dataclass(frozen=True)
class SimplicialComplex:
    """Facet description of a finite complex; faces are implied downward."""

    num_vertices: int
    facets: tuple  # sorted tuples of vertex indices, inclusion-maximal

    @classmethod
    def from_facets(cls, num_vertices: int, facets) -> "SimplicialComplex":
        cleaned = sorted({tuple(sorted(set(f))) for f in facets if f})
        maximal = [f for f in cleaned
                   if not any(set(f) < set(g) for g in cleaned if g != f)]
        for f in maximal:
            if f and (f[0] < 0 or f[-1] >= num_vertices):
                raise ValidationError(f"facet {f} out of vertex range")
        return cls(num_vertices, tuple(maximal))


@dataclass(frozen=True)
class BettiVector:
    """Integer ranks indexed from `start` (reduced homology starts at -1)."""

    start: int
    ranks: tuple

    @classmethod
    def make(cls, start: int, ranks) -> "BettiVector":
        ranks = list(ranks)
        while ranks and ranks[-1] == 0:
            ranks.pop()
        while ranks and ranks[0] == 0:
            ranks.pop(0)
            start += 1
        if not ranks:
            start = 0
        return cls(start, tuple(ranks))

    def rank(self, degree: int) -> int:
        i = degree - self.start
        if 0 <= i < len(self.ranks):
            return self.ranks[i]
        return 0

    def items(self):
        return [(self.start + i, r) for i, r in enumerate(self.ranks) if r]

    def as_list(self, start: int = 0, upto: int | None = None) -> list:
        if upto is None:
            upto = self.start + len(self.ranks) - 1
        return [self.rank(i) for i in range(start, max(upto, start) + 1)]


# ---------------------------------------------------------------------------
# Order complexes
# ---------------------------------------------------------------------------


def order_complex(poset: FinitePoset) -> SimplicialComplex:
    """Vertices = poset elements, faces = chains, facets = maximal chains."""
    n = poset.size
    if n == 0:
        return SimplicialComplex(0, ())
    above = poset.above
    below = poset.below_masks()

    def successors(i: int) -> list:
        # minimal elements strictly above i
        out = []
        mask = above[i]
        j = 0
        while mask:
            if mask & 1 and not (above[i] & below[j]):
                out.append(j)
            mask >>= 1
            j += 1
        return out

    chains_from: dict = {}

    def chains(i: int) -> list:
        if i in chains_from:
            return chains_from[i]
        succ = successors(i)
        if not succ:
            result = [(i,)]
        else:
            result = [(i,) + tail for j in succ for tail in chains(j)]
        chains_from[i] = result
        return result

    minimal = [i for i in range(n) if below[i] == 0]
    facets = [c for i in minimal for c in chains(i)]
    return SimplicialComplex(n, tuple(sorted(facets)))


# ---------------------------------------------------------------------------
# Exact rank computation
# ---------------------------------------------------------------------------


def exact_rank(rows: list) -> int:
    """Rank over Q of a sparse matrix given as row dicts {col: value}."""
    live = [dict(r) for r in rows if r]
    rank = 0
    while live:
        piv_idx = min(range(len(live)), key=lambda i: len(live[i]))
        piv = live.pop(piv_idx)
        col_use: dict = {}
        for row in live:
            for c in row:
                col_use[c] = col_use.get(c, 0) + 1
        piv_col = min(piv, key=lambda c: (col_use.get(c, 0), c))
        piv_val = piv[piv_col]
        rank += 1
        updated = []
        for row in live:
            if piv_col in row:
                factor = Fraction(row[piv_col], 1) / piv_val
                for c, v in piv.items():
                    new = row.get(c, 0) - factor * v
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
            if row:
                updated.append(row)
        live = updated
    return rank


def _all_faces(K: SimplicialComplex, guard: int) -> dict:
    """Faces grouped by dimension: dim -> sorted list of vertex tuples."""
    faces: set = set()
    for facet in K.facets:
        for r in range(1, len(facet) + 1):
            for combo in combinations(facet, r):
                faces.add(combo)
                if len(faces) > guard:
                    raise GuardError(
                        f"face count exceeds guard {guard}")
    by_dim: dict = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    for k in by_dim:
        by_dim[k].sort()
    return by_dim


def reduced_homology_ranks(K: SimplicialComplex,
                           guard: int = DEFAULT_FACE_GUARD) -> BettiVector:
    """Ranks of reduced homology over Q; the empty complex has rank 1 in
    degree -1."""
    by_dim = _all_faces(K, guard)
    if not by_dim:
        return BettiVector.make(-1, (1,))
    maxdim = max(by_dim)
    index: dict = {k: {f: i for i, f in enumerate(by_dim[k])} for k in by_dim}

    boundary_rank: dict = {}
    # augmentation C_0 -> C_{-1}
    boundary_rank[0] = 1 if by_dim.get(0) else 0
    for k in range(1, maxdim + 1):
        rows = [dict() for _ in by_dim[k - 1]]
        for col, face in enumerate(by_dim[k]):
            for i in range(len(face)):
                sub = face[:i] + face[i + 1:]
                rows[index[k - 1][sub]][col] = (-1) ** i
        boundary_rank[k] = exact_rank(rows)
    boundary_rank[maxdim + 1] = 0

    ranks = [1 - boundary_rank[0]]  # degree -1
    for k in range(0, maxdim + 1):
        ranks.append(len(by_dim.get(k, ())) - boundary_rank[k] - boundary_rank[k + 1])
    return BettiVector.make(-1, ranks)


# ---------------------------------------------------------------------------
# Interval homology and complement Betti numbers
# ---------------------------------------------------------------------------


def interval_homology(L: NEqualsLattice, element,
                      guard: int = DEFAULT_FACE_GUARD) -> BettiVector:
    """Reduced homology of the order complex of the open interval (0-hat, I)."""
    idx = L.index_of(element) if not isinstance(element, int) else element
    if idx == 0:
        raise ValidationError("interval homology below the bottom is undefined")
    return reduced_homology_ranks(order_complex(lower_interval(L, idx)), guard)


def codimension(L: NEqualsLattice, idx: int, dim_x: int) -> int:
    """Real codimension in (C^dim_x)^d of the subspace indexed by I."""
    return 2 * dim_x * (L.ground_size - L.elements[idx].num_blocks)


def complement_contributions(L: NEqualsLattice, dim_x: int = 1,
                             guard: int = DEFAULT_FACE_GUARD) -> list:
    """Per-element Betti contributions: (index, cd, {cohomological degree: rank})."""
    out = []
    for idx in range(1, L.size):
        iv = interval_homology(L, idx, guard)
        cd = codimension(L, idx, dim_x)
        contrib = {}
        for t, r in iv.items():
            i = cd - t - 2
            if i < 1:
                raise StructureError(
                    f"interval homology of element {idx} in degree {t} "
                    f"lands in cohomological degree {i}")
            contrib[i] = contrib.get(i, 0) + r
        out.append((idx, cd, contrib))
    return out


def complement_betti(L: NEqualsLattice, dim_x: int = 1,
                     guard: int = DEFAULT_FACE_GUARD) -> BettiVector:
    """Betti numbers of the ordered 0-cycle space over complex affine space."""
    total: dict = {0: 1}
    for _idx, _cd, contrib in complement_contributions(L, dim_x, guard):
        for i, r in contrib.items():
            total[i] = total.get(i, 0) + r
    top = max(total)
    return BettiVector.make(0, [total.get(i, 0) for i in range(top + 1)])
