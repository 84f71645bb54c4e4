import pytest

from conftest import make_map
from tatemodels.classify import (
    check_cor_ci,
    check_cor_qci,
    classify,
    deviations,
    is_closed,
    is_weakly_closed,
    poincare_check,
    predicted_eps,
    series_product,
)
from tatemodels.dga import Window
from tatemodels.resolve import acyclic_closure


def test_weakly_closed_negative_control():
    cl = acyclic_closure(make_map(2, ["x"], ["x^2"], ["x"]), Window(5, 8))
    Y = cl.extension
    y2 = Y.by_degree(2)[0]
    Y.adjoin("exterior", Y.var(y2.id, 2), name="bad", check=False)
    v = is_weakly_closed(cl)
    assert v.value is False
    assert v.witness == {"variable": "bad", "term": "y2_1^(2)"}
    assert is_closed(cl).value is False


def test_decomposable_unit_terms_are_allowed():
    cl = acyclic_closure(make_map(2, ["x"], ["x^2"], ["x"]), Window(5, 8))
    Y = cl.extension
    y1, y2 = Y.by_degree(1)[0], Y.by_degree(2)[0]
    Y.adjoin("divided", Y.mul(Y.var(y1.id), Y.var(y2.id)), name="ok", check=False)
    assert is_weakly_closed(cl).value is True
    assert is_closed(cl).value is False


def test_predicted_deviations_for_a_single_divided_variable():
    gamma = {2: 1, 3: 1}
    pred = predicted_eps(gamma, 2, 10)
    assert [i for i, v in pred.items() if v] == [2, 3, 5, 6, 9, 10]
    pred3 = predicted_eps(gamma, 3, 10)
    assert [i for i, v in pred3.items() if v] == [2, 3, 7, 8]


def test_predicted_deviations_use_j_prime_to_p():
    # i = 13 = 2*6+1 with 6 = 3*2: the sum runs over 2*3+1, 2*6+1 only
    assert predicted_eps({7: 5, 13: 1, 25: 100}, 2, 13)[13] == 6


@pytest.mark.parametrize(
    "p,gens,rels,ker,W,ci,qci",
    [
        (3, ["x", "y"], [], ["x^2", "y^3"], Window(6, 12), True, True),
        (2, ["x"], ["x^2"], ["x"], Window(9, 14), False, True),
        (2, ["x", "y"], ["x^2", "x*y", "y^2"], ["x", "y"], Window(6, 10), False, False),
    ],
)
def test_ci_and_qci(p, gens, rels, ker, W, ci, qci):
    cl = acyclic_closure(make_map(p, gens, rels, ker), W)
    rep = classify(cl)
    assert (rep.ci.value, rep.qci.value) == (ci, qci)
    assert rep.closed.value and rep.consistent()


def test_corollaries_on_dual_numbers():
    from tatemodels.compare import comparison_from_closure

    cl = acyclic_closure(make_map(2, ["x"], ["x^2"], ["x"]), Window(9, 14))
    model, _ = comparison_from_closure(cl)
    t = deviations(model, cl)
    assert t.agree()
    ci = check_cor_ci(cl, t)
    assert (ci["ci"], ci["eventually_zero"], ci["zero_at_special_index"]) == (False, False, False)
    assert ci["special_indices"] == [5, 6, 9, 10]
    q = check_cor_qci(cl, t)
    assert q["pattern_holds"] and q["qci"] and q["agree"]


def test_special_index_condition_untestable_in_tiny_window():
    from tatemodels.compare import comparison_from_closure

    cl = acyclic_closure(make_map(3, ["x"], ["x^2"], ["x"]), Window(4, 8))
    model, _ = comparison_from_closure(cl)
    assert check_cor_ci(cl, deviations(model, cl))["zero_at_special_index"] is None


def test_series_product():
    assert series_product([0, 2], 4) == [1, 2, 1, 0, 0]
    assert series_product([0, 0, 1], 6) == [1, 0, 1, 0, 1, 0, 1]
    assert series_product([0], 3) == [1, 0, 0, 0]


def test_poincare_check_on_triangle():
    cl = acyclic_closure(make_map(2, ["x", "y"], ["x^2", "x*y", "y^2"], ["x", "y"]), Window(6, 10))
    r = poincare_check(cl)
    assert r["ok"] and r["enumerated"] == [2**i for i in range(7)]
