import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from zcc.errors import GuardError, ValidationError
from zcc.homology import (BettiVector, SimplicialComplex, complement_betti,
                          complement_contributions, exact_rank,
                          interval_homology, order_complex,
                          reduced_homology_ranks)
from zcc.nlattice import (FinitePoset, build_lattice, lower_interval,
                          point_count_polynomial)


# -- independent oracle: brute-force faces + sympy ranks ----------------------


def oracle_ranks(num_vertices, facets):
    from sympy import Matrix
    faces = set()
    for f in facets:
        f = tuple(sorted(set(f)))
        for r in range(1, len(f) + 1):
            faces.update(combinations(f, r))
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    for k in by_dim:
        by_dim[k].sort()
    if not by_dim:
        return {-1: 1}
    maxdim = max(by_dim)
    rank = {0: 1 if by_dim.get(0) else 0, maxdim + 1: 0}
    for k in range(1, maxdim + 1):
        rows = by_dim[k - 1]
        cols = by_dim[k]
        idx = {f: i for i, f in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for c, face in enumerate(cols):
            for i in range(len(face)):
                sub = face[:i] + face[i + 1:]
                M[idx[sub]][c] = (-1) ** i
        rank[k] = Matrix(M).rank()
    out = {-1: 1 - rank[0]}
    for k in range(0, maxdim + 1):
        out[k] = len(by_dim.get(k, ())) - rank[k] - rank[k + 1]
    return {k: v for k, v in out.items() if v}


def ranks_dict(bv: BettiVector):
    return dict(bv.items())


# -- basic complexes -----------------------------------------------------------


def test_named_complexes():
    empty = SimplicialComplex.from_facets(0, [])
    assert ranks_dict(reduced_homology_ranks(empty)) == {-1: 1}
    pts = SimplicialComplex.from_facets(3, [(0,), (1,), (2,)])
    assert ranks_dict(reduced_homology_ranks(pts)) == {0: 2}
    circle = SimplicialComplex.from_facets(3, [(0, 1), (1, 2), (0, 2)])
    assert ranks_dict(reduced_homology_ranks(circle)) == {1: 1}
    disk = SimplicialComplex.from_facets(3, [(0, 1, 2)])
    assert ranks_dict(reduced_homology_ranks(disk)) == {}
    sphere = SimplicialComplex.from_facets(
        4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert ranks_dict(reduced_homology_ranks(sphere)) == {2: 1}


def test_from_facets_drops_non_maximal():
    K = SimplicialComplex.from_facets(3, [(0, 1), (0,), (1, 0)])
    assert K.facets == ((0, 1),)


def test_face_guard():
    big = SimplicialComplex.from_facets(20, [tuple(range(20))])
    with pytest.raises(GuardError):
        reduced_homology_ranks(big, guard=100)


def test_order_complex_examples():
    assert order_complex(FinitePoset.antichain(())).facets == ()
    assert order_complex(FinitePoset.antichain("abc")).facets == ((0,), (1,), (2,))
    chain = FinitePoset.from_less_pairs("ab", [(0, 1)])
    assert order_complex(chain).facets == ((0, 1),)
    # diamond: bottom < x, y < top gives two maximal 2-chains
    diamond = FinitePoset.from_less_pairs(
        "bxyt", [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert order_complex(diamond).facets == ((0, 1, 3), (0, 2, 3))


def test_order_complex_faces_are_chains():
    # brute-force: faces must be exactly the chains of the poset
    L = build_lattice((4,), 2)
    top = L.size - 1
    poset = lower_interval(L, top)
    K = order_complex(poset)
    chains = set()
    for r in range(1, poset.size + 1):
        for sub in combinations(range(poset.size), r):
            if all(poset.less(a, b) for a, b in combinations(sub, 2)):
                chains.add(sub)
    faces = set()
    for f in K.facets:
        for r in range(1, len(f) + 1):
            faces.update(combinations(f, r))
    assert faces == chains


def test_exact_rank_small():
    assert exact_rank([]) == 0
    assert exact_rank([{0: 1, 1: 1}, {0: 2, 1: 2}]) == 1
    assert exact_rank([{0: 1}, {1: 1}, {0: 1, 1: 1}]) == 2


# -- anchors and assembly --------------------------------------------------------


def test_anchor_single_hyperplane():
    L = build_lattice((1, 1), 1)
    assert complement_betti(L, 1).as_list() == [1, 1]


def test_anchor_conf3():
    L = build_lattice((3,), 2)
    assert complement_betti(L, 1).as_list() == [1, 3, 2]


def test_anchor_conf2_c2():
    L = build_lattice((2,), 2)
    assert complement_betti(L, 2).as_list() == [1, 0, 0, 1]


def test_interval_homology_examples():
    L2 = build_lattice((2,), 2)
    assert ranks_dict(interval_homology(L2, 1)) == {-1: 1}
    L3 = build_lattice((3,), 2)
    assert ranks_dict(interval_homology(L3, L3.size - 1)) == {0: 2}
    with pytest.raises(ValidationError):
        interval_homology(L3, 0)


def test_atom_intervals_are_empty():
    for dv, n in [((4,), 2), ((2, 2), 1), ((3, 2), 1), ((2, 2), 2)]:
        L = build_lattice(dv, n)
        atoms = [hi for lo, hi in L.covers if lo == 0]
        assert atoms
        for i in atoms:
            assert ranks_dict(interval_homology(L, i)) == {-1: 1}


def test_conf_betti_are_stirling_numbers():
    # b_i(Conf_d(C)) = unsigned Stirling numbers of the first kind
    expected = {
        4: [1, 6, 11, 6],
        5: [1, 10, 35, 50, 24],
    }
    for d, b in expected.items():
        L = build_lattice((d,), 2)
        assert complement_betti(L, 1).as_list() == b


def test_characteristic_polynomial_identity_hyperplane_case():
    # n=1, m=2: N(q) = sum_i (-1)^i b_i q^(|d|-i), exact for |d| <= 6
    for dv in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (3, 3), (4, 2),
               (5, 1)]:
        L = build_lattice(dv, 1)
        b = complement_betti(L, 1)
        coeffs = point_count_polynomial(L, 1)
        total = sum(dv)
        signed = [(-1) ** i * b.rank(i) for i in range(total + 1)]
        from_poly = [coeffs[total - i] if total - i < len(coeffs) else 0
                     for i in range(total + 1)]
        assert signed == from_poly, dv


def test_contributions_degrees_positive():
    L = build_lattice((2, 2), 1)
    for _idx, cd, contrib in complement_contributions(L, 1):
        assert cd >= 2
        assert all(i >= 1 for i in contrib)


def test_oracle_agreement_on_lattice_intervals():
    for dv, n in [((4,), 2), ((2, 2), 1), ((3, 2), 1), ((5,), 2)]:
        L = build_lattice(dv, n)
        for i in range(1, L.size):
            poset = lower_interval(L, i)
            if poset.size > 8:
                continue
            K = order_complex(poset)
            assert ranks_dict(reduced_homology_ranks(K)) == oracle_ranks(
                K.num_vertices, K.facets), (dv, n, i)


def test_oracle_agreement_random_complexes():
    rng = random.Random(20260809)
    for _trial in range(40):
        nv = rng.randint(0, 8)
        facets = []
        for _f in range(rng.randint(0, 6)):
            size = rng.randint(1, min(4, nv) if nv else 1)
            if nv == 0:
                continue
            facets.append(tuple(rng.sample(range(nv), size)))
        K = SimplicialComplex.from_facets(nv, facets)
        assert ranks_dict(reduced_homology_ranks(K)) == oracle_ranks(nv, K.facets)


@given(st.integers(2, 8), st.data())
@settings(max_examples=25, deadline=None)
def test_oracle_agreement_hypothesis(nv, data):
    facets = data.draw(st.lists(
        st.lists(st.integers(0, nv - 1), min_size=1, max_size=4, unique=True),
        min_size=0, max_size=6))
    K = SimplicialComplex.from_facets(nv, [tuple(f) for f in facets])
    assert ranks_dict(reduced_homology_ranks(K)) == oracle_ranks(nv, K.facets)


def test_betti_vector_normalization():
    assert BettiVector.make(-1, (0, 2, 0)) == BettiVector(0, (2,))
    assert BettiVector.make(0, ()).rank(0) == 0
    bv = BettiVector.make(0, (1, 3, 2))
    assert bv.as_list(0, 4) == [1, 3, 2, 0, 0]
    assert bv.items() == [(0, 1), (1, 3), (2, 2)]
