import pytest
from gmpy2 import mpq

from webgeom.abelrank import (
    abel_quasi_parallel,
    canonical_forms,
    check_relation_jet,
    chern_bound,
    eigen_polynomial,
    ell_j,
    functional_to_differential,
    is_infinitesimal_automorphism,
    rank_jets,
    verify_polynomial_relation,
)
from webgeom.algebra import RatFunc
from webgeom.castelnuovo import pi
from webgeom.errors import MathRefusal
from webgeom.webmodel import make_web

x, y = RatFunc.x(), RatFunc.y()


def test_chern_bound_of_generic_web_is_castelnuovo():
    w = make_web(x, y, x + y, x - y, x + 2 * y)
    assert ell_j(w, 1) == 2 and ell_j(w, 2) == 3
    assert chern_bound(w) == pi(2, 5)


def test_rank_of_hexagonal_three_web():
    rep, basis = rank_jets(make_web(x, y, x * y))
    assert rep.rank_estimate == 1 and rep.stabilized
    assert all(check_relation_jet(make_web(x, y, x * y), rel) for rel in basis)


def test_rank_of_non_hexagonal_three_web_is_zero():
    rep, basis = rank_jets(make_web(x, y, x + y + x * y * (x - y)))
    assert rep.rank_estimate == 0 and basis == []


def test_relation_jets_are_recomputed_independently():
    w = make_web(x, y, x + y, x - y)
    rep, basis = rank_jets(w)
    assert rep.rank_estimate == 3
    for rel in basis:
        assert check_relation_jet(w, rel)
    # tampering with one coefficient breaks the relation
    bad = basis[0]
    bad.g[0] = [c + 1 for c in bad.g[0]]
    assert not check_relation_jet(w, bad)


def test_polynomial_relations_certified_exactly():
    w = make_web(x, y, x + y)
    assert verify_polynomial_relation(w, [[1], [1], [-1]])
    assert not verify_polynomial_relation(w, [[1], [1], [1]])
    # log x + log y = log xy
    w = make_web(x, y, x * y)
    assert not verify_polynomial_relation(w, [[1], [1], [-1]])


def test_radical_components_need_odd_polynomials():
    w = make_web(x, y, x * x + y * y)
    with pytest.raises(MathRefusal):
        verify_polynomial_relation(w, [[1], [1], [1]], radicals=(2,))


def test_functional_to_differential():
    assert functional_to_differential([[0, 0, 1], [5, 3]]) == [[0, 2], [3]]


def test_abel_reduction():
    assert abel_quasi_parallel([x, y, x + y, x - y], x**2 + y**2).maximal
    assert not abel_quasi_parallel([x, y, x + y, x - y], x**2 + y**3).maximal
    with pytest.raises(MathRefusal):
        abel_quasi_parallel([x, y, x + y, x - y], x + 2 * y)


def test_automorphisms():
    assert is_infinitesimal_automorphism(make_web(x, y, x + y, x - y, x**2 + y**2), (x, y))
    assert is_infinitesimal_automorphism(make_web(y + x, y + x**2), (0, 1))
    assert not is_infinitesimal_automorphism(make_web(x, y, x * y), (1, 0))


def test_canonical_forms_pair_to_one_with_the_field():
    w = make_web(x, y, x + y, base=(1, 2))
    for form in canonical_forms(w, (x, y)):
        assert form.a * x + form.b * y == RatFunc(1)


def test_eigen_candidates_of_quadratic_web():
    w = make_web(x, y, x + y, x - y, x**2 + y**2)
    e = eigen_polynomial(w, (x, y), (x, -y))
    assert e.candidates == [0, 1, 2, 4, 6]
    assert e.multiplicities == {mpq(1): 2, mpq(2): 2, mpq(4): 1, mpq(6): 1}


def test_eigen_polynomial_is_a_multiple_of_the_nonzero_eigenvalue_factors():
    from webgeom.algebra import UniPoly

    w = make_web(x, y, x + y, x - y, x**2 + y**2)
    P = eigen_polynomial(w, (x, y), (x, -y)).poly
    lam = UniPoly([0, 1], "lam")
    T = (lam - 1) ** 2 * (lam - 2) ** 2 * (lam - 4) * (lam - 6)
    assert P.degree() == T.degree()
    assert all((P.coeff(n) * T.lead() - T.coeff(n) * P.lead()).is_zero() for n in range(7))
