import pytest

from conftest import make_map
from tatemodels.compare import comparison_from_closure
from tatemodels.dga import Window
from tatemodels.pi import (
    LiePresentation,
    check_abelian,
    check_antisymmetry,
    check_d2_squared,
    check_dimensions,
    check_jacobi,
    check_square_compat,
    check_theorem_abelian,
    homotopy_lie_algebra,
    quadratic_part,
)
from tatemodels.resolve import acyclic_closure


@pytest.fixture(scope="module")
def dual_numbers():
    cl = acyclic_closure(make_map(2, ["x"], ["x^2"], ["x"]), Window(9, 14))
    return comparison_from_closure(cl)


def _names(ext):
    return {v.name: v.id for v in ext.variables}


def test_quadratic_part_reads_only_unit_coefficients(dual_numbers):
    model, _ = dual_numbers
    ids = _names(model.extension)
    q = quadratic_part(model.extension).q
    assert q[ids["x1'(y2_1)"]] == {(ids["x0(y2_1)"], ids["x0(y2_1)"]): 1}
    assert ids["x1(y2_1)"] not in q  # its boundary carries the coefficient x


def test_squares_follow_the_chain(dual_numbers):
    model, gamma = dual_numbers
    L = homotopy_lie_algebra(model.extension)
    ids = _names(model.extension)
    assert L.square(ids["x0(y2_1)"]) == {ids["x1'(y2_1)"]: 1}
    assert L.square(ids["x1(y2_1)"]) == {ids["x2'(y2_1)"]: 1}
    assert L.square(ids["x2(y2_1)"]) == {}
    assert check_abelian(L)["abelian"]
    assert check_dimensions(L, model.variable_counts())["ok"]
    r = check_theorem_abelian(gamma, L)
    assert r["ok"]
    assert r["notes"] and "x0(y2_1)" in r["notes"][0]["squares_on_L"]


def test_complete_intersection_has_trivial_quadratic_part():
    cl = acyclic_closure(make_map(3, ["x", "y"], [], ["x^2", "y^3"]), Window(6, 12))
    model, gamma = comparison_from_closure(cl)
    assert quadratic_part(model.extension).is_zero()
    L = homotopy_lie_algebra(model.extension)
    assert L.dim(2) == 2 and len(L.basis) == 2
    r = check_theorem_abelian(gamma)
    assert r["ok"] and r["L_inf"] == []


def test_odd_characteristic_squares_vanish_on_the_infinite_part():
    cl = acyclic_closure(make_map(3, ["x"], ["x^2"], ["x"]), Window(8, 14))
    model, gamma = comparison_from_closure(cl)
    r = check_theorem_abelian(gamma)
    assert r["clauses"]["c"]["ok"] and r["ok"]


def _hand_built(q312):
    # degrees: a, b in 2, c in 4 (c sits where [b, a] lands)
    return LiePresentation(5, {1: 2, 2: 2, 3: 4}, {(2, 1): {3: q312}} if q312 else {}, {})


def test_abelian_negative_control():
    res = check_abelian(_hand_built(1))
    assert not res["abelian"]
    assert res["witness"] == {"left": "v2", "right": "v1", "target": "v3", "coefficient": 1}
    assert check_abelian(_hand_built(0))["abelian"]
    assert check_abelian(LiePresentation(2, {}, {}, {}))["abelian"]


def test_antisymmetry_completion():
    L = _hand_built(1)
    assert L.bracket_basis(2, 1) == {3: 1}
    assert L.bracket_basis(1, 2) == {3: 4}
    assert check_antisymmetry(L)["ok"]


def test_jacobi_and_square_compatibility_on_models():
    for p, gens, rels, ker, W in [
        (2, ["x", "y"], ["x^2", "x*y", "y^2"], ["x", "y"], Window(6, 10)),
        (3, ["x"], ["x^2"], ["x"], Window(8, 14)),
        (2, ["x", "y"], ["x*y"], ["x"], Window(8, 14)),
    ]:
        model, _ = comparison_from_closure(acyclic_closure(make_map(p, gens, rels, ker), W))
        L = homotopy_lie_algebra(model.extension)
        assert check_jacobi(L)["ok"]
        assert check_square_compat(L)["ok"]
        assert check_d2_squared(model.extension)["ok"]


def test_export_table(dual_numbers):
    model, _ = dual_numbers
    ex = homotopy_lie_algebra(model.extension).export()
    assert ex["squares"] == [["x0(y2_1)", "x1'(y2_1)", 1], ["x1(y2_1)", "x2'(y2_1)", 1]]
    assert ex["brackets"] == []
    assert [b["degree"] for b in ex["basis"]] == [2, 3, 5, 6, 9, 10]
