from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from wptate.extalg import (
    ExtAlgebra,
    ExtElement,
    ExtFreeModule,
    ExtMatrix,
    expand_to_vector_space,
    ext_multiply,
    ext_sign,
    format_summands,
    generator_socle_counts,
    socle_counts,
)
from wptate.polyring import WeightedRing

E112 = ExtAlgebra(WeightedRing((1, 1, 2)))
E11122 = ExtAlgebra(WeightedRing((1, 1, 1, 2, 2)))


def test_multiplication_examples():
    e0, e1 = E112.var(0), E112.var(1)
    assert ext_multiply(e0, e0).is_zero()
    assert ext_multiply(e1, e0) == -ext_multiply(e0, e1)
    assert str(ext_multiply(e1, e0)) == "-e0*e1"
    assert ext_multiply(e0, e1).bidegree == (-2, -2)
    assert E112.var(2).bidegree == (-2, -1)


def test_algebra_dimension_and_degrees():
    for A in (E112, E11122):
        assert A.dim == 2 ** A.nvars
        assert len(list(A.subsets())) == A.dim
        w = A.ring.weights
        for T in A.subsets():
            members = [i for i in range(A.nvars) if T >> i & 1]
            assert A.subset_degree(T) == (-sum(w[i] for i in members), -len(members))


def test_sign_counts_inversions():
    # e2 * e0e1 = e0e1e2 needs two transpositions
    assert ext_sign(0b100, 0b011) == 1
    assert ext_sign(0b010, 0b001) == -1
    assert ext_sign(0b001, 0b011) == 0


def test_expansion_of_omega():
    F = ExtFreeModule(E112, [(0, 0)])
    basis = expand_to_vector_space(F)
    assert len(basis) == 8
    assert basis[0] == (0, 0, (4, 3))
    assert basis[-1] == (0, 0b111, (0, 0))
    assert socle_counts(F) == {(0, 0): 1}
    assert socle_counts(ExtFreeModule(E112, [(-2, 0)])) == {(2, 0): 1}
    assert expand_to_vector_space(ExtFreeModule(E112, [])) == []


def test_socle_examples():
    for j, i in [(0, 0), (-1, 1), (2, 0)]:
        assert socle_counts(ExtFreeModule(E112, [(-j, i)])) == {(j, -i): 1}
    F = ExtFreeModule(E112, [(0, 1), (-1, 0), (-1, 0)])
    assert socle_counts(F) == {(0, -1): 1, (1, 0): 2}
    assert socle_counts(ExtFreeModule(E112, [])) == {}


def test_generator_and_socle_positions():
    A = E11122
    for c, s in [(0, 0), (3, 1), (-2, 0), (1, -1)]:
        F = ExtFreeModule(A, [(c, s)])
        assert F.generator_degree(0) == (A.ring.a - c, A.nvars - s)
        assert socle_counts(F) == generator_socle_counts(F) == {(-c, -s): 1}
        assert len(expand_to_vector_space(F)) == 2 ** A.nvars
        assert ExtFreeModule.from_generator_degrees(A, [F.generator_degree(0)]).twists == ((c, s),)


def test_format_summands_order():
    counts = {(2, 1): 4, (1, 1): 2, (0, 0): 1, (-1, 0): 2, (0, 1): 1}
    assert format_summands(counts) == "w_E(2;1)^4 + w_E(1;1)^2 + w_E(0;0)^1 + w_E(0;1)^1 + w_E(-1;0)^2"
    assert format_summands({}) == "0"


def test_ext_matrix_homogeneity():
    src = ExtFreeModule(E112, [(1, 1)])
    tgt = ExtFreeModule(E112, [(0, 0)])
    # generator of ω(1;1) sits at (3;2), of ω_E at (4;3): entry of degree (-1;-1)
    good = ExtMatrix(src, tgt, [{0: E112.var(0)}])
    assert good.check_homogeneous() == [] and good.is_minimal()
    bad = ExtMatrix(src, tgt, [{0: E112.var(2)}])
    assert bad.check_homogeneous() == [(0, 0)]
    unit = ExtMatrix(tgt, tgt, [{0: E112.one()}])
    assert not unit.is_minimal()


@st.composite
def homogeneous_elements(draw, A=E11122):
    k = draw(st.integers(0, A.nvars))
    w = A.ring.weights
    subs = [sum(1 << i for i in c) for c in combinations(range(A.nvars), k)]
    deg = draw(st.sampled_from(sorted({sum(w[i] for i in range(A.nvars) if T >> i & 1) for T in subs})))
    pool = [T for T in subs if sum(w[i] for i in range(A.nvars) if T >> i & 1) == deg]
    coeffs = draw(st.dictionaries(st.sampled_from(pool), st.integers(1, A.p - 1), max_size=4))
    return ExtElement(A, coeffs)


@settings(max_examples=60, deadline=None)
@given(homogeneous_elements(), homogeneous_elements(), homogeneous_elements())
def test_associative_and_graded_commutative(f, g, h):
    assert ext_multiply(ext_multiply(f, g), h) == ext_multiply(f, ext_multiply(g, h))
    if f.bidegree is not None and g.bidegree is not None:
        sign = -1 if (f.bidegree[1] * g.bidegree[1]) % 2 else 1
        assert ext_multiply(f, g) == ext_multiply(g, f).scale(sign)
    if f.bidegree is not None and f.bidegree[1] % 2:
        assert ext_multiply(f, f).is_zero()


twists = st.lists(st.tuples(st.integers(-4, 4), st.integers(-2, 3)), max_size=4)


@settings(max_examples=30, deadline=None)
@given(twists, twists)
def test_socle_additive(t1, t2):
    F, G = ExtFreeModule(E112, t1), ExtFreeModule(E112, t2)
    total = dict(socle_counts(F))
    for b, c in socle_counts(G).items():
        total[b] = total.get(b, 0) + c
    assert socle_counts(F + G) == total == generator_socle_counts(F + G)
