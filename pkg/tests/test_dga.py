import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    commutativity_failures,
    d_squared_failures,
    divided_power_failures,
    exterior_square_failures,
    leibniz_failures,
)
from tatemodels.coeffs import binom_mod_p
from tatemodels.dga import (
    DIVIDED,
    EXTERIOR,
    POLYNOMIAL,
    NotACycle,
    ParityMismatch,
    SemifreeExtension,
    Window,
    WindowOverflow,
    gamma_indecomposables,
    ind_basis,
    indecomposables,
    is_decomposable_monomial,
    is_power_of,
    y_p_infinity,
)
from tatemodels.ring import QuotientRing, RingPresentation


def base(p=2, gens=("x",), rels=("x^2",)):
    return QuotientRing(RingPresentation.from_strings(p, list(gens), list(rels)))


def koszul_like(p=2, N=8, D=12):
    R = base(p)
    A = SemifreeExtension(R, Window(N, D))
    y1 = A.adjoin(EXTERIOR, A.scalar(R.parse("x")), name="y1")
    y2 = A.adjoin(DIVIDED, A.mul_ring(A.var(y1.id), R.parse("x")), name="y2")
    return A, y1, y2


def test_adjoin_checks_parity_and_cycles():
    R = base()
    A = SemifreeExtension(R, Window(4, 6))
    with pytest.raises(ParityMismatch):
        A.adjoin(POLYNOMIAL, A.scalar(R.parse("x")))
    y = A.adjoin(EXTERIOR, A.scalar(R.parse("x")))
    with pytest.raises(NotACycle):
        A.adjoin(DIVIDED, A.var(y.id))
    with pytest.raises(ValueError):
        A.adjoin(EXTERIOR, {})


def test_window_rejects_nonpositive():
    with pytest.raises(ValueError):
        Window(0, 3)


def test_products_past_the_window_raise():
    A, _, y2 = koszul_like(N=4)
    with pytest.raises(WindowOverflow):
        A.mul(A.var(y2.id, 2), A.var(y2.id))


@pytest.mark.parametrize("p", [2, 3])
def test_axioms_on_a_small_extension(p):
    A, _, _ = koszul_like(p, N=7, D=10)
    assert d_squared_failures(A) == []
    assert commutativity_failures(A) == []
    assert leibniz_failures(A, 4) == []
    assert divided_power_failures(A) == []
    assert exterior_square_failures(A) == []


def test_koszul_sign_between_odd_variables():
    R = base(3, ("x", "y"), ())
    A = SemifreeExtension(R, Window(3, 4))
    a = A.adjoin(EXTERIOR, A.scalar(R.parse("x")))
    b = A.adjoin(EXTERIOR, A.scalar(R.parse("y")))
    ab = A.mul(A.var(a.id), A.var(b.id))
    ba = A.mul(A.var(b.id), A.var(a.id))
    assert A.add(ab, ba) == {}
    assert A.d(ab) == A.add(A.mul_ring(A.var(b.id), R.parse("x")), A.mul_ring(A.var(a.id), R.parse("y")), -1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 12), st.integers(1, 12))
def test_divided_product_rule(p, a, b):
    R = base(p)
    A = SemifreeExtension(R, Window(2 * (a + b), 2 * (a + b)))
    y = A.adjoin(DIVIDED, {}, hdeg=2, ideg=2)
    prod = A.mul(A.var(y.id, a), A.var(y.id, b))
    assert prod == A.scale(A.var(y.id, a + b), binom_mod_p(a + b, a, p))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 30))
def test_divided_power_indecomposable_iff_power_of_p(p, n):
    R = base(p)
    A = SemifreeExtension(R, Window(2 * n, 2 * n))
    y = A.adjoin(DIVIDED, {}, hdeg=2, ideg=2)
    assert is_decomposable_monomial(A, ((y.id, n),)) == (not is_power_of(n, p))


def test_polynomial_powers_are_decomposable():
    R = base(2)
    A = SemifreeExtension(R, Window(8, 8))
    x = A.adjoin(POLYNOMIAL, {}, hdeg=2, ideg=2)
    assert [m for m in ind_basis(A, 4)] == []
    assert ind_basis(A, 2) == [((x.id, 1),)]


def test_indecomposable_complexes():
    A, y1, y2 = koszul_like(2, N=8, D=12)
    ind = indecomposables(A)
    assert ind.dims()[4] == 1 and ind.dims()[8] == 1 and ind.dims()[6] == 0
    assert ind.is_zero_differential()
    gind = gamma_indecomposables(A)
    assert gind.dims() == {h: int(h in (1, 2)) for h in range(1, 9)}


def test_monomial_counts_match_enumeration():
    A, _, _ = koszul_like(3, N=9, D=20)
    assert A.monomial_counts() == [len(A.all_monomials(h)) if h else 1 for h in range(10)]


def test_polynomial_leibniz_carries_the_exponent():
    R = base(3, ("x",), ())
    A = SemifreeExtension(R, Window(6, 12))
    e = A.adjoin(EXTERIOR, A.scalar(R.parse("x")))
    x = A.adjoin(POLYNOMIAL, A.mul_ring(A.var(e.id), R.parse("x")), check=False)
    assert A.d(A.var(x.id, 3)) == {}  # the factor 3 vanishes
    want = A.scale(A.mul(A.d(A.var(x.id)), A.var(x.id)), 2)
    assert A.d(A.var(x.id, 2)) == want


def test_worked_values_in_the_running_example():
    A, y1, y2 = koszul_like(2, N=8, D=12)
    x = A.base.parse("x")
    assert A.d(A.var(y2.id, 2)) == A.mul_ring(A.mul(A.var(y1.id), A.var(y2.id)), x)
    assert A.d(A.one()) == {}
    assert A.mul(A.var(y1.id), A.var(y1.id)) == {}
    assert y_p_infinity(A) == [(y2.id, 1, 4), (y2.id, 2, 8)]
    dims = gamma_indecomposables(A).dims()
    assert [dims[h] for h in (1, 2, 3, 4)] == [1, 1, 0, 0]


def test_divided_product_example():
    R = base(3)
    A = SemifreeExtension(R, Window(10, 10))
    y = A.adjoin(DIVIDED, {}, hdeg=2, ideg=2)
    assert A.mul(A.var(y.id, 2), A.var(y.id, 3)) == A.scale(A.var(y.id, 5), 10)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_associativity_and_unit(data):
    A, _, _ = koszul_like(3, N=12, D=20)
    R = A.base
    A.adjoin(EXTERIOR, A.scalar(R.parse("x")), name="z")
    monos = [m for h in range(1, 5) for m in A.monomials(h)]
    a, b, c = (A.monomial(data.draw(st.sampled_from(monos))) for _ in range(3))
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
    assert A.mul(A.one(), a) == a == A.mul(a, A.one())


def test_divided_powers_in_ind_up_to_p_cubed():
    for p in (2, 3):
        R = base(p)
        top = p**3
        A = SemifreeExtension(R, Window(2 * top, 2 * top))
        y = A.adjoin(DIVIDED, {}, hdeg=2, ideg=2)
        alive = [n for n in range(1, top + 1) if ((y.id, n),) in ind_basis(A, 2 * n)]
        assert alive == [p**i for i in range(4)]
