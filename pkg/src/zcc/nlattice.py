"""The n-equals partition lattice and its point-count polynomial.

Elements are set partitions of a column-tagged ground set {(k, i)} in which
every block is a singleton or contains at least n elements from each of the m
columns, ordered by refinement (bottom = all singletons).  The Mobius
function from the bottom turns block counts into the exact number of
F_q-points of the ordered 0-cycle space over affine space, by
inclusion-exclusion over the arrangement's intersection poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import GuardError, StructureError, ValidationError

DEFAULT_SIZE_GUARD = 10


@lru_cache(maxsize=None)
def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


# ---------------------------------------------------------------------------
# Generic finite posets (used for lattice intervals and order complexes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePoset:
    """A finite strict partial order; above[i] is the bitmask of {j : i < j}."""

    payloads: tuple
    above: tuple

    @property
    def size(self) -> int:
        return len(self.payloads)

    def less(self, i: int, j: int) -> bool:
        return bool(self.above[i] >> j & 1)

    def below_masks(self) -> tuple:
        below = [0] * self.size
        for i, mask in enumerate(self.above):
            j = 0
            while mask:
                if mask & 1:
                    below[j] |= 1 << i
                mask >>= 1
                j += 1
        return tuple(below)

    @classmethod
    def from_less_pairs(cls, payloads, pairs) -> "FinitePoset":
        """Build from generating strict relations; takes the transitive closure."""
        n = len(payloads)
        above = [0] * n
        for i, j in pairs:
            above[i] |= 1 << j
        changed = True
        while changed:
            changed = False
            for i in range(n):
                mask = above[i]
                extra = 0
                j = 0
                scan = mask
                while scan:
                    if scan & 1:
                        extra |= above[j]
                    scan >>= 1
                    j += 1
                if extra | mask != mask:
                    above[i] = mask | extra
                    changed = True
        for i in range(n):
            if above[i] >> i & 1:
                raise ValidationError("relation is not antisymmetric")
        return cls(tuple(payloads), tuple(above))

    @classmethod
    def antichain(cls, payloads) -> "FinitePoset":
        return cls(tuple(payloads), (0,) * len(payloads))


# ---------------------------------------------------------------------------
# Lattice elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePartition:
    """A set partition of the column-tagged ground set, in canonical form:
    each block sorted, blocks ordered by their least element."""

    blocks: tuple

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def column_counts(self, m: int) -> list:
        out = []
        for block in self.blocks:
            counts = [0] * m
            for (k, _i) in block:
                counts[k - 1] += 1
            out.append(counts)
        return out

    def __str__(self) -> str:
        return "|".join(
            ",".join(f"{k}.{i}" for (k, i) in block) for block in self.blocks)


class EdgeType(Enum):
    BLOCK_CREATION = "block_creation"
    SINGLETON_ADDING = "singleton_adding"
    BLOCK_MERGING = "block_merging"


@dataclass(frozen=True)
class NEqualsLattice:
    d: tuple
    n: int
    elements: tuple          # LatticePartition, bottom first, by rank
    above: tuple             # above[i] = bitmask of {j : elements[i] < elements[j]}
    covers: tuple            # (lower index, upper index) pairs

    @property
    def m(self) -> int:
        return len(self.d)

    @property
    def ground_size(self) -> int:
        return sum(self.d)

    @property
    def size(self) -> int:
        return len(self.elements)

    def rank(self, i: int) -> int:
        return self.ground_size - self.elements[i].num_blocks

    def index_of(self, part: LatticePartition) -> int:
        try:
            return self.elements.index(part)
        except ValueError:
            raise ValidationError(f"partition {part} is not a lattice element")

    def below_masks(self) -> tuple:
        return FinitePoset(self.elements, self.above).below_masks()


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def build_lattice(d, n: int, guard: int = DEFAULT_SIZE_GUARD) -> NEqualsLattice:
    """Generate the n-equals partition lattice for the degree vector d.

    Admissible partitions are assembled depth-first with canonical block
    ordering (blocks indexed by their least element), pruning branches whose
    deficient blocks can no longer collect n elements per column.
    """
    d = tuple(int(x) for x in d)
    if not d or any(x < 0 for x in d):
        raise ValidationError(f"bad degree vector {d}")
    if n < 1:
        raise ValidationError("threshold n must be >= 1")
    total = sum(d)
    if total > guard:
        raise GuardError(
            f"|d| = {total} exceeds the lattice guard {guard}; "
            f"up to ~{bell_number(total)} set partitions")

    m = len(d)
    ground = [(k + 1, i + 1) for k, dk in enumerate(d) for i in range(dk)]
    col_of = [k for k, dk in enumerate(d) for _ in range(dk)]
    # suffix[idx][k] = number of ground points with position >= idx in column k
    suffix = [[0] * m for _ in range(total + 1)]
    for idx in range(total - 1, -1, -1):
        suffix[idx] = list(suffix[idx + 1])
        suffix[idx][col_of[idx]] += 1

    found: list[LatticePartition] = []
    blocks: list[list[int]] = []
    counts: list[list[int]] = []

    def feasible(idx: int) -> bool:
        need = [0] * m
        for block, cnt in zip(blocks, counts):
            if len(block) >= 2:
                for k in range(m):
                    if cnt[k] < n:
                        need[k] += n - cnt[k]
        rem = suffix[idx]
        return all(need[k] <= rem[k] for k in range(m))

    def rec(idx: int) -> None:
        if not feasible(idx):
            return
        if idx == total:
            found.append(LatticePartition(
                tuple(tuple(ground[i] for i in block) for block in blocks)))
            return
        k = col_of[idx]
        for block, cnt in zip(blocks, counts):
            block.append(idx)
            cnt[k] += 1
            rec(idx + 1)
            cnt[k] -= 1
            block.pop()
        blocks.append([idx])
        fresh = [0] * m
        fresh[k] = 1
        counts.append(fresh)
        rec(idx + 1)
        blocks.pop()
        counts.pop()

    rec(0)
    found.sort(key=lambda part: (total - part.num_blocks, part.blocks))

    # refinement order via point -> block maps
    index_of_point = {pt: i for i, pt in enumerate(ground)}
    point_block = []
    for part in found:
        arr = [0] * total
        for b, block in enumerate(part.blocks):
            for pt in block:
                arr[index_of_point[pt]] = b
        point_block.append(arr)

    size = len(found)
    above = [0] * size
    for i in range(size):
        fine = found[i]
        for j in range(size):
            if i == j or found[j].num_blocks >= fine.num_blocks:
                continue
            coarse_map = point_block[j]
            ok = True
            for block in fine.blocks:
                target = coarse_map[index_of_point[block[0]]]
                for pt in block[1:]:
                    if coarse_map[index_of_point[pt]] != target:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                above[i] |= 1 << j

    below = [0] * size
    for i in range(size):
        mask = above[i]
        j = 0
        while mask:
            if mask & 1:
                below[j] |= 1 << i
            mask >>= 1
            j += 1

    covers = []
    for i in range(size):
        mask = above[i]
        j = 0
        while mask:
            if mask & 1 and not (above[i] & below[j]):
                covers.append((i, j))
            mask >>= 1
            j += 1
    covers.sort()

    return NEqualsLattice(d=d, n=n, elements=tuple(found),
                          above=tuple(above), covers=tuple(covers))


# ---------------------------------------------------------------------------
# Mobius function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MobiusTable:
    lattice: NEqualsLattice
    from_bottom: tuple  # mu(0-hat, I) per element index

    def between(self, i: int, j: int) -> int:
        """mu(I, J) on demand by interval recursion."""
        L = self.lattice
        if i == j:
            return 1
        if not (L.above[i] >> j & 1):
            raise ValidationError("mu(I, J) requires I <= J")
        memo: dict = {}

        def mu(k: int) -> int:
            if k == i:
                return 1
            if k in memo:
                return memo[k]
            # interval [i, k): elements >= i and < k
            total = 0
            mask = (L.above[i] | (1 << i)) & _below_cache(L)[k]
            x = 0
            while mask:
                if mask & 1:
                    total += mu(x)
                mask >>= 1
                x += 1
            memo[k] = -total
            return -total

        return mu(j)


@lru_cache(maxsize=None)
def _below_cache(L: NEqualsLattice) -> tuple:
    return L.below_masks()


def mobius(L: NEqualsLattice) -> MobiusTable:
    """mu(0-hat, I) for every element, with the defining sums re-verified."""
    size = L.size
    below = _below_cache(L)
    values = [0] * size
    values[0] = 1  # bottom comes first in element order
    for j in range(1, size):
        total = 0
        mask = below[j]
        x = 0
        while mask:
            if mask & 1:
                total += values[x]
            mask >>= 1
            x += 1
        values[j] = -total
    # defining identity: the closed lower interval of every J > 0-hat sums to 0
    for j in range(1, size):
        total = values[j]
        mask = below[j]
        x = 0
        while mask:
            if mask & 1:
                total += values[x]
            mask >>= 1
            x += 1
        if total != 0:
            raise StructureError(f"Mobius recursion failed at element {j}")
    return MobiusTable(lattice=L, from_bottom=tuple(values))


# ---------------------------------------------------------------------------
# Cover-edge taxonomy
# ---------------------------------------------------------------------------


def classify_cover(L: NEqualsLattice, lower: int, upper: int) -> EdgeType:
    fine = L.elements[lower]
    coarse = L.elements[upper]
    fine_of_point = {}
    for b, block in enumerate(fine.blocks):
        for pt in block:
            fine_of_point[pt] = b
    merged_families = []
    for block in coarse.blocks:
        members = sorted({fine_of_point[pt] for pt in block})
        if len(members) > 1:
            merged_families.append((block, members))
    if len(merged_families) != 1:
        raise StructureError(
            f"cover {fine} -> {coarse} merges {len(merged_families)} families")
    block, members = merged_families[0]
    sizes = [len(fine.blocks[b]) for b in members]
    singles = sum(1 for s in sizes if s == 1)
    bigs = sum(1 for s in sizes if s >= 2)
    if bigs == 0:
        counts = [0] * L.m
        for (k, _i) in block:
            counts[k - 1] += 1
        # a creation cover makes a minimal admissible non-singleton block:
        # exactly n per column, except that for n = m = 1 minimality means
        # size 2 (a 1-element "block" would just be a singleton)
        if L.n * L.m >= 2:
            minimal = all(c == L.n for c in counts)
        else:
            minimal = len(block) == 2
        if minimal:
            return EdgeType.BLOCK_CREATION
        raise StructureError(
            f"creation cover {fine} -> {coarse} has column counts {counts}")
    if bigs == 1 and singles == 1:
        return EdgeType.SINGLETON_ADDING
    if bigs == 2 and singles == 0:
        return EdgeType.BLOCK_MERGING
    raise StructureError(
        f"cover {fine} -> {coarse} fits no edge type "
        f"({bigs} non-singletons, {singles} singletons merged)")


def classify_edges(L: NEqualsLattice) -> dict:
    """Count every cover edge by type; unclassifiable edges raise."""
    counts = {t: 0 for t in EdgeType}
    for lower, upper in L.covers:
        counts[classify_cover(L, lower, upper)] += 1
    return counts


# ---------------------------------------------------------------------------
# Point counts and intervals
# ---------------------------------------------------------------------------


def point_count_polynomial(L: NEqualsLattice, dim_x: int = 1) -> tuple:
    """N(q) = sum_I mu(0,I) q^(dim_x * #blocks(I)), low-to-high coefficients.

    For every prime power q this is the number of F_q-points of the ordered
    0-cycle space over affine dim_x-space.
    """
    if dim_x < 1:
        raise ValidationError("dim_x must be >= 1")
    mob = mobius(L)
    coeffs = [0] * (dim_x * L.ground_size + 1)
    for i, part in enumerate(L.elements):
        coeffs[dim_x * part.num_blocks] += mob.from_bottom[i]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def eval_int_poly(coeffs, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


def lower_interval(L: NEqualsLattice, element) -> FinitePoset:
    """The open interval (0-hat, I) with its induced order."""
    if isinstance(element, LatticePartition):
        idx = L.index_of(element)
    else:
        idx = int(element)
        if not 0 <= idx < L.size:
            raise ValidationError(f"element index {idx} out of range")
    below = _below_cache(L)[idx]
    members = []
    x = 0
    mask = below
    while mask:
        if mask & 1 and x != 0:  # exclude the bottom
            members.append(x)
        mask >>= 1
        x += 1
    pos = {orig: new for new, orig in enumerate(members)}
    above = []
    for orig in members:
        sub = 0
        for other in members:
            if L.above[orig] >> other & 1:
                sub |= 1 << pos[other]
        above.append(sub)
    return FinitePoset(tuple(L.elements[i] for i in members), tuple(above))
