from itertools import product

import pytest

from zcc.errors import GuardError, ValidationError
from zcc.nlattice import (EdgeType, FinitePoset, LatticePartition, bell_number,
                          build_lattice, classify_edges, eval_int_poly,
                          lower_interval, mobius, point_count_polynomial)

# lattices used for structure checks: everything in scope at |d| <= 6
GRID = ([((dd,), n) for dd in range(1, 7) for n in (1, 2, 3)]
        + [(dv, n)
           for dv in [(1, 1), (2, 1), (3, 1), (2, 2), (4, 1), (3, 2), (5, 1),
                      (4, 2), (3, 3)]
           for n in (1, 2, 3)])


def test_build_examples():
    L = build_lattice((2,), 2)
    assert L.size == 2
    assert [e.num_blocks for e in L.elements] == [2, 1]

    L = build_lattice((1, 1), 1)
    assert L.size == 2
    assert L.elements[1].blocks == (((1, 1), (2, 1)),)

    L = build_lattice((3,), 2)
    assert L.size == 5  # every partition of a 3-set qualifies


def test_bottom_is_first_and_all_singletons():
    for dv, n in GRID:
        L = build_lattice(dv, n)
        assert all(len(b) == 1 for b in L.elements[0].blocks)
        assert all(L.rank(i) > 0 for i in range(1, L.size))


def test_block_admissibility():
    for dv, n in [((4,), 2), ((2, 2), 1), ((2, 2), 2), ((3, 2), 2)]:
        L = build_lattice(dv, n)
        m = len(dv)
        for part in L.elements:
            for block, counts in zip(part.blocks, part.column_counts(m)):
                assert len(block) == 1 or all(c >= n for c in counts)


def test_n2_m1_is_full_partition_lattice():
    for dd in range(1, 7):
        assert build_lattice((dd,), 2).size == bell_number(dd)


def test_guard():
    with pytest.raises(GuardError, match="guard"):
        build_lattice((11,), 2)
    build_lattice((4, 4), 2, guard=8)


def test_covers_generate_order():
    for dv, n in [((4,), 2), ((2, 2), 1), ((3, 2), 1), ((5,), 2), ((2, 2), 2)]:
        L = build_lattice(dv, n)
        reach = [0] * L.size
        for lo, hi in L.covers:
            reach[lo] |= 1 << hi
        changed = True
        while changed:
            changed = False
            for i in range(L.size):
                mask, extra, j = reach[i], 0, 0
                scan = mask
                while scan:
                    if scan & 1:
                        extra |= reach[j]
                    scan >>= 1
                    j += 1
                if extra | mask != mask:
                    reach[i] |= extra
                    changed = True
        assert tuple(reach) == L.above


def test_mobius_examples():
    assert mobius(build_lattice((2,), 2)).from_bottom == (1, -1)
    assert mobius(build_lattice((3,), 2)).from_bottom[-1] == 2
    assert mobius(build_lattice((1, 1), 1)).from_bottom == (1, -1)


def test_mobius_recursion_vanishes_everywhere():
    for dv, n in GRID:
        L = build_lattice(dv, n)
        mob = mobius(L)  # raises internally if a closed-interval sum is nonzero
        below = L.below_masks()
        for j in range(1, L.size):
            total = mob.from_bottom[j]
            mask = below[j]
            x = 0
            while mask:
                if mask & 1:
                    total += mob.from_bottom[x]
                mask >>= 1
                x += 1
            assert total == 0


def test_mobius_between():
    L = build_lattice((4,), 2)
    mob = mobius(L)
    top = L.size - 1
    assert mob.between(0, top) == mob.from_bottom[top] == -6
    assert mob.between(top, top) == 1
    # interval from an atom to the top of Pi_4 is an interval of Pi_3 shape
    atom = next(i for i in range(L.size) if L.rank(i) == 1)
    assert mob.between(atom, top) == 2
    with pytest.raises(ValidationError):
        mob.between(top, atom)


def test_classify_edges_examples():
    counts = classify_edges(build_lattice((2,), 2))
    assert counts == {EdgeType.BLOCK_CREATION: 1, EdgeType.SINGLETON_ADDING: 0,
                      EdgeType.BLOCK_MERGING: 0}
    counts = classify_edges(build_lattice((3,), 2))
    assert counts[EdgeType.BLOCK_CREATION] == 3
    assert counts[EdgeType.SINGLETON_ADDING] == 3
    assert counts[EdgeType.BLOCK_MERGING] == 0
    counts = classify_edges(build_lattice((4,), 2))
    assert counts[EdgeType.BLOCK_MERGING] == 3  # the {12}{34} -> {1234} merges


def test_classification_total_on_grid():
    for dv, n in GRID:
        L = build_lattice(dv, n)
        counts = classify_edges(L)
        assert sum(counts.values()) == len(L.covers)


def test_point_count_examples():
    assert point_count_polynomial(build_lattice((2,), 2)) == (0, -1, 1)
    assert point_count_polynomial(build_lattice((1, 1), 1)) == (0, -1, 1)
    assert point_count_polynomial(build_lattice((3,), 2)) == (0, 2, -3, 1)


def test_point_count_matches_brute_force():
    for dv, n in [((2,), 2), ((3,), 2), ((1, 1), 1), ((2, 1), 1), ((2, 2), 1),
                  ((2, 2), 2), ((3, 1), 2)]:
        L = build_lattice(dv, n)
        coeffs = point_count_polynomial(L, 1)
        for q in (2, 3, 5):
            count = 0
            for tup in product(range(q), repeat=sum(dv)):
                cols = []
                pos = 0
                for dk in dv:
                    cols.append(tup[pos:pos + dk])
                    pos += dk
                if not any(all(col.count(v) >= n for col in cols)
                           for v in set(tup)):
                    count += 1
            assert count == eval_int_poly(coeffs, q), (dv, n, q)


def test_point_count_dimx_scaling():
    L = build_lattice((2,), 2)
    assert point_count_polynomial(L, 2) == (0, 0, -1, 0, 1)  # q^4 - q^2


def test_lower_interval_examples():
    L2 = build_lattice((2,), 2)
    assert lower_interval(L2, 1).size == 0
    assert lower_interval(L2, 0).size == 0  # open interval below the bottom
    L3 = build_lattice((3,), 2)
    iv = lower_interval(L3, L3.size - 1)
    assert iv.size == 3
    assert iv.above == (0, 0, 0)  # antichain of the three pair-partitions
    with pytest.raises(ValidationError):
        lower_interval(L3, LatticePartition((((1, 1), (2, 7)),)))


def test_finite_poset_closure_and_antisymmetry():
    P = FinitePoset.from_less_pairs("abc", [(0, 1), (1, 2)])
    assert P.less(0, 2)
    with pytest.raises(ValidationError):
        FinitePoset.from_less_pairs("ab", [(0, 1), (1, 0)])
