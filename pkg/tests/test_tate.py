from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import line_bundle_cohomology, projective_space_cohomology, sheaf_cohomology_oracle
from wptate.dmod import ResourceLimitError
from wptate.polyring import ModulePresentation, WeightedRing
from wptate.resolution import ZeroModuleError, hilbert
from wptate.tate import (
    DIMENSION_COUNT,
    REGULARITY_VANISHING,
    RESOLUTION_SOCLE,
    CohomologyQuery,
    choose_r,
    sheaf_cohomology,
    tate_window,
    validate_window,
)


def test_choose_r(elliptic, rational, structure_ring, residue_field):
    assert choose_r(elliptic) == 2
    assert choose_r(rational) == 1
    assert choose_r(structure_ring) == -1
    # k has m-torsion, so one more than its regularity
    assert choose_r(residue_field) == 1


def test_elliptic_table(elliptic):
    T = sheaf_cohomology(CohomologyQuery(elliptic, -2, 2))
    assert T.row(0) == [4, 2, 1, 0, 0]
    assert T.row(1) == [0, 0, 1, 2, 4]
    assert T.row(2) == [0] * 5
    assert T.r_used == 2 and T.char == 32003 and T.weights == (1, 1, 2)
    assert T.provenance[(0, 2)] == DIMENSION_COUNT
    assert T.provenance[(1, 1)] == REGULARITY_VANISHING
    assert T.provenance[(1, -2)] == RESOLUTION_SOCLE


def test_rational_table(rational):
    T = sheaf_cohomology(CohomologyQuery(rational, -2, 2, i_max=1))
    assert T.row(0) == [7, 3, 1, 0, 0]
    assert T.row(1) == [0, 0, 0, 3, 5]


def test_tables_match_local_duality(elliptic, rational, residue_field, p112):
    torsion = ModulePresentation.quotient(p112, ["x0*x1", "x0*x2", "x0^2"])
    for M in (elliptic, rational, residue_field, torsion):
        T = sheaf_cohomology(CohomologyQuery(M, -4, 3))
        for (i, j), v in T.entries.items():
            assert v == sheaf_cohomology_oracle(M, i, j), (i, j)


def test_line_bundles_on_p112(structure_ring):
    T = sheaf_cohomology(CohomologyQuery(structure_ring, -10, 10))
    for (i, j), v in T.entries.items():
        assert v == line_bundle_cohomology((1, 1, 2), i, j)


def test_projective_plane():
    M = ModulePresentation.free(WeightedRing((1, 1, 1)))
    T = sheaf_cohomology(CohomologyQuery(M, -6, 4))
    for (i, j), v in T.entries.items():
        assert v == projective_space_cohomology(2, i, j)


def test_euler_characteristic_of_elliptic_curve(elliptic):
    # h^0 - h^1 is the Hilbert polynomial 2j, valid for every twist
    T = sheaf_cohomology(CohomologyQuery(elliptic, -6, 6))
    for j in range(-6, 7):
        assert T[(0, j)] - T[(1, j)] == 2 * j


def test_r_independence(elliptic, rational, structure_ring):
    for M in (elliptic, rational, structure_ring):
        r = choose_r(M)
        tables = [sheaf_cohomology(CohomologyQuery(M, -4, 4, r=rr)).entries for rr in (r, r + 1, r + 2)]
        assert tables[0] == tables[1] == tables[2]


def test_r_too_small_is_rejected(elliptic):
    with pytest.raises(ValueError):
        sheaf_cohomology(CohomologyQuery(elliptic, 0, 1, r=1))


def test_query_validation(elliptic):
    with pytest.raises(ValueError):
        CohomologyQuery(elliptic, 2, 1)
    with pytest.raises(ValueError):
        CohomologyQuery(elliptic, 0, 1, i_max=-1)


def test_indices_above_dimension(elliptic):
    T = sheaf_cohomology(CohomologyQuery(elliptic, 0, 1, i_max=4))
    assert T.row(3) == T.row(4) == [0, 0]


def test_zero_module_raises(p112):
    Z = ModulePresentation.quotient(p112, ["1"])
    with pytest.raises(ZeroModuleError):
        sheaf_cohomology(CohomologyQuery(Z, 0, 1))


def test_resource_cap(rational):
    with pytest.raises(ResourceLimitError):
        sheaf_cohomology(CohomologyQuery(rational, -3, 3), cap=500)


def test_elliptic_window(elliptic):
    W = tate_window(elliptic, 3)
    assert W.piece(1) == Counter({(2, 1): 4})
    assert W.piece(0) == Counter({(1, 1): 2, (0, 0): 1})
    assert W.piece(-1) == Counter({(0, 1): 1, (-1, 0): 2})
    assert W.piece(-2) == Counter({(-2, 0): 4})
    assert W.piece(-3) == Counter({(-3, 0): 6})
    assert W.render().startswith("w_E(2;1)^4 -> w_E(1;1)^2 + w_E(0;0)^1 -> ")
    assert validate_window(W, 2, 1) == []
    assert W.jumps() <= {1, 2}


def test_rational_window_is_consistent_with_its_table(rational):
    W = tate_window(rational, 3)
    T = sheaf_cohomology(CohomologyQuery(rational, -3, 3))
    assert validate_window(W, 1, 2) == []
    # Tate summand ω(-j;i) appears with multiplicity h^i(F(j))
    for ell in W.resolution_flags:
        for (c, s), m in W.piece(ell).items():
            assert m == T[(s, -c)]


def test_validate_window_flags_bad_input(elliptic):
    W = tate_window(elliptic, 3)
    W.arrows[(1, -3)] += 1
    assert any("drops the filtration by 4" in v for v in validate_window(W, 2, 1))
    W = tate_window(elliptic, 3)
    W.pieces[0][(-3, 0)] += 1
    assert validate_window(W, 2, 1)


def test_empty_window_is_valid(elliptic):
    from wptate.tate import TateWindow

    assert validate_window(TateWindow(2, 1), 2, 1) == []
    assert TateWindow(2, 1).render() == "0"


def test_window_steps_validation(elliptic):
    with pytest.raises(ValueError):
        tate_window(elliptic, 0)


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 3), st.integers(1, 5))
def test_fermat_curves_in_p112(k, c):
    R = WeightedRing((1, 1, 2))
    M = ModulePresentation.quotient(R, [f"x0^{2 * k}+{c}*x1^{2 * k}+x2^{k}"])
    T = sheaf_cohomology(CohomologyQuery(M, -3, 3))
    for (i, j), v in T.entries.items():
        assert v == sheaf_cohomology_oracle(M, i, j)
