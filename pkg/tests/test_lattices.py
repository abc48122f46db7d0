import random
from fractions import Fraction

import pytest

from conftest import corpus_curve, corpus_names

from prymdeg.homology import chain_vector, homology_data
from prymdeg.intlinalg import identity, mat_mul, mat_eq
from prymdeg.lattices import (
    IntegerLattice,
    cokernel_torsion_data,
    eigenlattice,
    fixed_chain_lattice,
    full_h1_lattice,
    index_in,
    klm_invariants,
    lattice_intersection,
    lattice_sum,
    make_lattice,
    minus_projection_lattice,
    prym_cokernel_torsion,
    saturation,
    y_minus_lattice,
)


def test_make_lattice_canonical():
    a = make_lattice([(1, 0), (0, 2)], 2)
    b = make_lattice([(0, 2), (1, 0), (1, 2)], 2)
    assert a == b
    half = make_lattice([(Fraction(1, 2), 0), (0, Fraction(1, 2))], 2)
    assert half.den == 2
    assert half.scaled(2) == make_lattice([(1, 0), (0, 1)], 2)
    # doubled coordinates reduce when every entry is even
    assert make_lattice([(Fraction(1, 2), Fraction(1, 2))], 2).scaled(2) == \
        make_lattice([(1, 1)], 2)


def test_membership_and_coordinates():
    lat = make_lattice([(2, 0), (1, 1)], 2)
    assert lat.contains_vector((3, 1))
    assert not lat.contains_vector((0, Fraction(1, 2)))
    assert lat.coordinates((3, 1)) is not None
    v = lat.from_coordinates(lat.coordinates((3, 1)))
    assert v == (Fraction(3), Fraction(1))


def test_intersection_and_sum():
    a = make_lattice([(2, 0), (0, 3)], 2)
    b = make_lattice([(3, 0), (0, 2)], 2)
    assert lattice_intersection(a, b) == make_lattice([(6, 0), (0, 6)], 2)
    assert lattice_sum(a, b) == make_lattice([(1, 0), (0, 1)], 2)


def test_index_and_saturation():
    sup = make_lattice([(1, 0), (0, 1)], 2)
    sub = make_lattice([(2, 0), (0, 3)], 2)
    assert index_in(sub, sup) == 6
    skew = make_lattice([(2, 4)], 2)
    assert saturation(skew) == make_lattice([(1, 2)], 2)


def fs_l_vectors(curve):
    l0 = chain_vector(curve, {"e1": 1, "e4": -1})
    l1 = tuple(
        Fraction(a - b, 2)
        for a, b in zip(
            chain_vector(curve, {"e1": 1, "e3": -1}),
            chain_vector(curve, {"e4": 1, "e2": -1}),
        )
    )
    return l0, l1


def test_fs_a2_eigenlattices():
    c = corpus_curve("fs_a2")
    hom = homology_data(c)
    l0, l1 = fs_l_vectors(c)
    xminus_br = eigenlattice(hom, -1)
    xminus = minus_projection_lattice(hom)
    assert xminus_br == make_lattice([l0, tuple(2 * x for x in l1)], 4)
    assert xminus == make_lattice([l0, l1], 4)
    assert index_in(xminus_br, xminus) == 2


def test_case33_minus_eigenlattice():
    c = corpus_curve("case33_a2")
    hom = homology_data(c)
    xminus_br = eigenlattice(hom, -1)
    want = make_lattice(
        [chain_vector(c, {"e1": 1, "e4": -1}), chain_vector(c, {"e2": 1, "e3": -1})],
        4,
    )
    assert xminus_br == want
    assert minus_projection_lattice(hom) == want.scaled(Fraction(1, 2))


def test_identity_involution_eigenlattices():
    c = corpus_curve("dollar")
    hom = homology_data(c)
    assert eigenlattice(hom, -1).rank == 0
    assert minus_projection_lattice(hom).rank == 0
    assert eigenlattice(hom, +1) == full_h1_lattice(hom)


def test_threecomp_xminus():
    c = corpus_curve("threecomp")
    hom = homology_data(c)
    h1 = chain_vector(c, {"e1": 1, "e3": 1, "e4": -1})
    h2 = chain_vector(c, {"e2": 1, "e3": 1, "e4": -1})
    half = tuple(Fraction(a + b, 2) for a, b in zip(h1, h2))
    xminus = minus_projection_lattice(hom)
    assert xminus == make_lattice([half], 4)
    assert eigenlattice(hom, -1) == xminus.scaled(2)


def test_klm_values():
    assert klm_invariants(homology_data(corpus_curve("case33_a2"))) \
        .__dict__ == {"k": 0, "l": 0, "m": 2}
    assert klm_invariants(homology_data(corpus_curve("fs_a2"))) \
        .__dict__ == {"k": 0, "l": 1, "m": 1}
    assert klm_invariants(homology_data(corpus_curve("exchanged_a2"))) \
        .__dict__ == {"k": 1, "l": 0, "m": 1}
    hom = homology_data(corpus_curve("dollar"))
    assert klm_invariants(hom).__dict__ == {"k": hom.rank, "l": 0, "m": 0}


def test_torsion_rank_matches_k():
    for name in corpus_names():
        hom = homology_data(corpus_curve(name))
        k = prym_cokernel_torsion(hom)
        assert k == klm_invariants(hom).k


def test_torsion_identity_involution():
    hom = homology_data(corpus_curve("dollar"))
    assert prym_cokernel_torsion(hom) == hom.rank  # X/2X


def random_involution(rng, rank):
    """Random conjugate U^-1 J U of a signed block form."""
    k = rng.randint(0, rank)
    rest = rank - k
    m = rng.randint(0, rest // 2)
    l = rest - 2 * m
    blocks = []
    n = k + l + 2 * m
    J = [[0] * n for _ in range(n)]
    for i in range(k):
        J[i][i] = 1
    for i in range(k, k + l):
        J[i][i] = -1
    for t in range(m):
        i = k + l + 2 * t
        J[i][i + 1] = 1
        J[i + 1][i] = 1
    # random unimodular conjugation via elementary row ops
    U = [list(r) for r in identity(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        for t in range(n):
            U[i][t] += c * U[j][t]
    from prymdeg.intlinalg import mat_inverse

    Uinv = mat_inverse(tuple(map(tuple, U)))
    M = mat_mul(mat_mul(tuple(map(tuple, U)), tuple(map(tuple, J))), Uinv)
    M = tuple(tuple(int(x) for x in row) for row in M)
    return M, (k, l, m)


def test_random_involutions_torsion_equals_k():
    rng = random.Random(987654)
    for _ in range(1000):
        rank = rng.randint(1, 6)
        M, (k, l, m) = random_involution(rng, rank)
        assert mat_eq(mat_mul(M, M), identity(rank))
        k_tor, tau = cokernel_torsion_data(M)
        assert k_tor == k


def test_y_minus_rules():
    y = y_minus_lattice(corpus_curve("threecomp"),
                        homology_data(corpus_curve("threecomp")),
                        minus_projection_lattice(homology_data(corpus_curve("threecomp"))))
    assert y.status == "exact" and y.lattice == y.lower_bound
    assert y.rule == "no_swapping_nodes_no_smooth_fixed_points"

    c = corpus_curve("mixed_532a")
    hom = homology_data(c)
    y = y_minus_lattice(c, hom, minus_projection_lattice(hom))
    assert y.status == "index_only" and y.index_in_x_minus == 2

    c = corpus_curve("mixed_533a")
    hom = homology_data(c)
    xm = minus_projection_lattice(hom)
    y = y_minus_lattice(c, hom, xm)
    assert y.status == "exact" and y.lattice == xm

    c = corpus_curve("mixed_533b")
    hom = homology_data(c)
    y = y_minus_lattice(c, hom, minus_projection_lattice(hom))
    assert y.status == "index_only" and y.index_in_x_minus == 2

    c = corpus_curve("mixed_532b")
    hom = homology_data(c)
    y = y_minus_lattice(c, hom, minus_projection_lattice(hom))
    assert y.status == "unknown"
    assert y.upper_bound.contains_lattice(y.lower_bound)


def test_y_minus_bounds_always_bracket():
    for name in corpus_names():
        c = corpus_curve(name)
        hom = homology_data(c)
        xm = minus_projection_lattice(hom)
        y = y_minus_lattice(c, hom, xm)
        assert y.lower_bound == xm.scaled(2)
        assert y.upper_bound == eigenlattice(hom, -1)
        if y.status == "exact":
            assert y.lattice.contains_lattice(y.lower_bound)
            assert xm.contains_lattice(y.lattice)


def test_xminus_rank_identity():
    for name in corpus_names():
        hom = homology_data(corpus_curve(name))
        profile = klm_invariants(hom)
        assert minus_projection_lattice(hom).rank == profile.l + profile.m
        divs = 2 ** profile.m
        if minus_projection_lattice(hom).rank:
            assert index_in(eigenlattice(hom, -1), minus_projection_lattice(hom)) == divs


def test_fixed_chain_lattice_fs():
    c = corpus_curve("fs_a2")
    hom = homology_data(c)
    fc = fixed_chain_lattice(hom)
    # spanned by e_j + iota(e_j): e1+e4, e2+e3
    want = make_lattice(
        [chain_vector(c, {"e1": 1, "e4": 1}), chain_vector(c, {"e2": 1, "e3": 1})], 4
    )
    assert fc == want
