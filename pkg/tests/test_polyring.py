import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_monomials
from wptate.polyring import (
    InhomogeneousError,
    ModulePresentation,
    ParseError,
    Polynomial,
    UnknownIdentifierError,
    WeightedRing,
    monomials_of_degree,
    parse_polynomial,
    symonds_constant,
    weighted_degree,
)


def test_ring_invariants(p112, p11122):
    assert (p112.a, p112.sigma, p112.n) == (4, 1, 2)
    assert (p11122.a, p11122.sigma) == (7, 2)
    assert symonds_constant(WeightedRing((1, 1, 1, 1))) == 0
    with pytest.raises(ValueError):
        WeightedRing((2, 1))
    with pytest.raises(ValueError):
        WeightedRing((1, 0))
    with pytest.raises(ValueError):
        WeightedRing((1, 1), ("x", "x"))


def test_parse_examples(p112):
    f = parse_polynomial("x0^4+x1^4+x2^2", p112)
    assert f.homogeneous_degree == 4
    assert parse_polynomial("x0*x2", p112).homogeneous_degree == 3
    g = parse_polynomial("x0 + x2", p112)
    assert g.homogeneous_degree is None and not g.is_homogeneous()


def test_parse_arithmetic(p112):
    f = parse_polynomial("(x0 + x1)^2 - 2*x0*x1 - (x0^2 + x1^2)", p112)
    assert f.is_zero()
    assert parse_polynomial("-3", p112) == 32000
    assert parse_polynomial("32003*x0", p112).is_zero()
    assert parse_polynomial("(x0)^0", p112) == 1


@pytest.mark.parametrize(
    "text, pos",
    [("x0 +", 4), ("x0 ** x1", 4), ("2 x0", 2), ("x0^x1", 3), ("(x0 + x1", 8), ("x0 $ x1", 3), ("", 0)],
)
def test_parse_errors_carry_position(p112, text, pos):
    with pytest.raises(ParseError) as e:
        parse_polynomial(text, p112)
    assert e.value.pos == pos


def test_unknown_identifier(p112):
    with pytest.raises(UnknownIdentifierError) as e:
        parse_polynomial("x0 + y", p112)
    assert e.value.pos == 5


def test_monomials_of_degree_examples(p112):
    assert monomials_of_degree(p112, 2) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)]
    assert monomials_of_degree(p112, 0) == [(0, 0, 0)]
    assert len(monomials_of_degree(p112, 4)) == 9
    assert monomials_of_degree(p112, -1) == []


def test_weighted_degree_examples(p112):
    assert weighted_degree((0, 0, 1), p112) == 2
    assert weighted_degree((1, 1, 1), p112) == 4
    assert weighted_degree((0, 0, 0), p112) == 0


@pytest.mark.parametrize("weights", [(1, 1, 2), (1, 1, 1, 2, 2), (1, 2, 3), (2, 3, 5, 7)])
def test_generating_function(weights):
    R = WeightedRing(weights)
    for d in range(0, 40):
        mons = monomials_of_degree(R, d)
        assert len(mons) == count_monomials(weights, d)
        assert len(set(mons)) == len(mons)
        assert all(weighted_degree(m, R) == d for m in mons)


def test_grevlex_order(p112):
    # x_n smallest: x0^4 > x0*x1^3 > x1^4 > x0^2*x2 > x2^2
    key = p112.mono_key
    chain = [(4, 0, 0), (1, 3, 0), (0, 4, 0), (2, 0, 1), (0, 0, 2)]
    assert sorted(chain, key=key, reverse=True) == chain


exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, st.integers(-50, 50), max_size=6)


@settings(max_examples=200)
@given(polys)
def test_print_parse_round_trip(terms):
    R = WeightedRing((1, 1, 2))
    f = Polynomial(R, terms)
    assert parse_polynomial(str(f), R) == f


@settings(max_examples=100)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    R = WeightedRing((1, 1, 2))
    f, g, h = Polynomial(R, a), Polynomial(R, b), Polynomial(R, c)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


def test_presentations(p112):
    M = ModulePresentation.cokernel(p112, [1, 1], [["x1", "x2"], ["-x0", "0"]])
    assert M.rank == 2 and len(M.relations) == 2
    with pytest.raises(InhomogeneousError):
        ModulePresentation.quotient(p112, ["x0 + x2"])
    with pytest.raises(InhomogeneousError):
        ModulePresentation.cokernel(p112, [0, 0], [["x1"], ["x2"]])
    with pytest.raises(ValueError):
        ModulePresentation.cokernel(p112, [0], [["x1"], ["x2"]])
    assert ModulePresentation.free(p112, [0, 3]).ambient_degrees == (0, 3)
