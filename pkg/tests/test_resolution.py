import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hilbert_series_numerator, koszul_betti
from conftest import RATIONAL_IDEAL
from wptate.groebner import buchberger, is_groebner, normal_form, shift, add_into
from wptate.linalg import rank
from wptate.polyring import InhomogeneousError, ModulePresentation, WeightedRing, parse_polynomial
from wptate.resolution import (
    ZeroModuleError,
    betti,
    free_resolution,
    graded_piece_basis,
    h0m_vanishes,
    hilbert,
    hilbert_function,
    is_zero_module,
    multiplication_map,
    regularity,
    truncation,
)


def vec(f):
    return {(m, 0): c for m, c in f.terms.items()}


def test_buchberger_examples(p112, p11122, elliptic, rational):
    G = buchberger(elliptic.relations, p112, (0,))
    assert len(G) == 1 and G.generators[0] == vec(parse_polynomial("x0^4+x1^4+x2^2", p112))
    assert len(buchberger([], p112, (0,))) == 0
    G = buchberger(rational.relations, p11122, (0,))
    assert is_groebner(G)
    assert len(graded_piece_basis(rational, 1)) == 3


def test_buchberger_rejects_inhomogeneous(p112):
    with pytest.raises(InhomogeneousError):
        buchberger([vec(parse_polynomial("x0 + x2", p112))], p112, (0,))


def test_normal_form_examples(p112, elliptic):
    G = buchberger(elliptic.relations, p112, (0,))
    f = parse_polynomial("x0^4+x1^4+x2^2", p112)
    assert normal_form(vec(f), G) == {}
    # x0^4 is the leading term under weighted grevlex, so x2^2 is already reduced
    x22 = vec(parse_polynomial("x2^2", p112))
    assert normal_form(x22, G) == x22
    assert normal_form(vec(parse_polynomial("x0^4", p112)), G) == vec(parse_polynomial("-x1^4-x2^2", p112))
    x0 = vec(parse_polynomial("x0", p112))
    assert normal_form(x0, G) == x0


def test_groebner_is_reduced(rational, p11122):
    G = buchberger(rational.relations, p11122, (0,))
    for i, (m, c) in enumerate(G.leads):
        for j, g in enumerate(G.generators):
            if i != j:
                assert all(not (cc == c and all(a <= b for a, b in zip(m, t))) for (t, cc) in g)


def test_normal_form_membership_randomized(rational, p11122):
    G = buchberger(rational.relations, p11122, (0,))
    rng = random.Random(11)
    p = p11122.p
    from wptate.polyring import monomials_of_degree

    for _ in range(40):
        d = rng.randrange(3, 7)
        member: dict = {}
        for rel in rational.relations:
            deg_rel = p11122.degree(next(iter(rel))[0])
            for m in monomials_of_degree(p11122, d - deg_rel):
                add_into(member, shift(rel, m, rng.randrange(p), p), p)
        assert normal_form(member, G) == {}
        extra = {(m, 0): rng.randrange(1, p) for m in monomials_of_degree(p11122, d)[:3]}
        v = add_into(dict(member), extra, p)
        nf = normal_form(v, G)
        assert normal_form(nf, G) == nf
        assert nf == normal_form(extra, G)


def test_graded_pieces_examples(elliptic):
    assert hilbert_function(elliptic, 0, 4) == [1, 2, 4, 6, 8]
    assert graded_piece_basis(elliptic, 0) == [((0, 0, 0), 0)]


def test_multiplication_map_examples(elliptic, p112):
    X = multiplication_map(elliptic, 2, 2)
    assert X.shape == (8, 4) and rank(X, p112.p) == 4
    assert multiplication_map(elliptic, 0, 0).tolist() == [[1], [0]]
    assert multiplication_map(elliptic, 1, -3).shape == (0, 0)
    assert multiplication_map(elliptic, 2, -2).shape == (1, 0)


def test_resolution_examples(elliptic, structure_ring, residue_field):
    assert free_resolution(elliptic).ranks() == (1, 1)
    assert betti(elliptic).entries == {(0, 0): 1, (1, 4): 1}
    assert free_resolution(structure_ring).ranks() == (1,)
    assert betti(structure_ring).entries == {(0, 0): 1}
    assert betti(residue_field).entries == {
        (0, 0): 1, (1, 1): 2, (1, 2): 1, (2, 2): 1, (2, 3): 2, (3, 4): 1,
    }


def test_regularity_examples(elliptic, structure_ring, residue_field, rational):
    assert regularity(structure_ring) == -1
    assert regularity(residue_field) == 0
    assert regularity(elliptic) == 2
    assert regularity(rational) == 1


def test_zero_module(p112):
    Z = ModulePresentation.quotient(p112, ["x0", "1"])
    assert is_zero_module(Z)
    with pytest.raises(ZeroModuleError):
        regularity(Z)


def test_h0m_examples(elliptic, residue_field, structure_ring, rational):
    assert h0m_vanishes(elliptic)
    assert not h0m_vanishes(residue_field)
    assert h0m_vanishes(structure_ring)
    assert h0m_vanishes(rational)


def torsion_module(p112):
    # S/(x0*x1, x0*x2, x0^2): x0 spans the m-torsion in degree 1
    return ModulePresentation.quotient(p112, ["x0*x1", "x0*x2", "x0^2"])


def cokernel_module(p112):
    return ModulePresentation.cokernel(p112, [0, 1], [["x2", "x0^2"], ["x1", "x0"]])


def all_modules(p112, p11122):
    return [
        ModulePresentation.free(p112),
        ModulePresentation.quotient(p112, ["x0", "x1", "x2"]),
        ModulePresentation.quotient(p112, ["x0^4+x1^4+x2^2"]),
        ModulePresentation.quotient(p11122, RATIONAL_IDEAL),
        torsion_module(p112),
        cokernel_module(p112),
        ModulePresentation.quotient(WeightedRing((1, 2, 3)), ["x0^6 + x1^3 + x2^2"]),
        ModulePresentation.quotient(WeightedRing((1, 1, 1)), ["x0*x1", "x1*x2", "x0*x2"]),
    ]


def test_betti_matches_koszul_oracle(p112, p11122):
    for M in all_modules(p112, p11122):
        B = betti(M)
        top = max(j for _, j in B.entries) + 2
        assert koszul_betti(M, top) == B.entries


def test_hilbert_series_identity(p112, p11122):
    for M in all_modules(p112, p11122):
        B = betti(M)
        bound = regularity(M) + 20
        num = {j: c for j, c in B.numerator().items() if j <= bound}
        assert hilbert_series_numerator(M, bound) == num


def test_resolutions_are_minimal_complexes(p112, p11122):
    for M in all_modules(p112, p11122):
        F = free_resolution(M)
        assert F.compose_is_zero()
        assert F.is_minimal()
        assert F.length <= M.ring.nvars


def test_torsion_module(p112):
    M = torsion_module(p112)
    assert not h0m_vanishes(M)
    assert hilbert_function(M, 0, 3) == [1, 2, 2, 2]


def test_truncation_lemma(p112, p11122):
    for M in all_modules(p112, p11122):
        r = regularity(M)
        T = truncation(M, r + 1)
        assert hilbert_function(T, r + 1, r + 8) == hilbert_function(M, r + 1, r + 8)
        assert hilbert_function(T, r - 3, r) == [0, 0, 0, 0]
        if is_zero_module(T):
            continue
        assert h0m_vanishes(T)
        assert regularity(T) <= r + 1
        if h0m_vanishes(M):
            T0 = truncation(M, r)
            assert regularity(T0) <= r


def test_truncation_above_regularity_is_not_r_regular(elliptic):
    # local cohomology of M_{>=3} picks up M_2 in H^1, so it is 3-regular only
    T = truncation(elliptic, 3)
    assert betti(T).entries == {(0, 3): 6, (1, 4): 4, (1, 5): 6, (2, 6): 4}
    assert regularity(T) == 3


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(1, 9)), min_size=1, max_size=3))
def test_random_monomial_binomial_ideals(data):
    R = WeightedRing((1, 1, 2))
    gens = []
    for a, b, c, k in data:
        d = a + b + 2 * c
        if d == 0:
            continue
        gens.append(f"{k}*x0^{a}*x1^{b}*x2^{c} + x1^{d}")
    M = ModulePresentation.quotient(R, gens)
    if is_zero_module(M):
        return
    F = free_resolution(M)
    assert F.compose_is_zero() and F.is_minimal()
    top = max(j for _, j in F.betti().entries) + 1
    assert koszul_betti(M, top) == F.betti().entries
