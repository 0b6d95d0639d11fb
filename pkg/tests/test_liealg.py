import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from g2forge.catalog import DERIVATIONS
from g2forge.exterior import basis_vector, e
from g2forge.g2 import standard_phi
from g2forge.liealg import (
    Derivation,
    JacobiError,
    MetricData,
    NotADerivation,
    abelian,
    change_basis,
    diagonal,
    endo_from_images,
    extension_d_formula,
    matrices_equal,
    nilsoliton_check,
    rank_one_extension,
    ricci_operator,
    scalar_curvature,
)
from g2forge.notation import parse_structure_tuple, render_tuple
from g2forge.scalars import identity
from g2forge.su3 import standard_pair

from conftest import forms, rand_form, vectors

H1 = "(0,0,0,0,e14+e23,e13-e24)"
H2 = "(0,0,0,e13,e14+e23,e13-e15-e24)"


@pytest.fixture(scope="module")
def h1():
    return parse_structure_tuple(H1)


def test_jacobi_failure_names_index():
    with pytest.raises(JacobiError) as info:
        parse_structure_tuple("(0,0,0,0,e14+e23,e15)")
    assert info.value.index == 6 and "e^6" in str(info.value)


def test_unchecked_algebra_accepted():
    g = parse_structure_tuple("(0,0,0,0,e14+e23,e15)", check=False)
    assert g.d(g.differentials[5])


def test_differential_on_h1(h1):
    assert h1.d(e(6, "5")) == e(6, "14") + e(6, "23")
    omega, psi = standard_pair()
    assert h1.d(omega) == -psi
    assert not h1.d(psi)


def test_lie_derivative_frozen():
    ext = rank_one_extension(parse_structure_tuple(H1), DERIVATIONS["D1"])
    expected = (
        -e(7, "127") - e(7, "135", 2) + e(7, "146", 2) + e(7, "236", 2)
        + e(7, "245", 2) - e(7, "347") - e(7, "567", 2)
    )
    assert ext.total.lie_derivative(basis_vector(7, 6), standard_phi()) == expected


def test_is_derivation(h1):
    assert h1.is_derivation(DERIVATIONS["D1"])
    assert h1.is_derivation(DERIVATIONS["D2"])
    swap = endo_from_images({0: {4: 1}, 4: {0: 1}, 1: {1: 1}, 2: {2: 1}, 3: {3: 1}, 5: {5: 1}}, 6)
    assert not h1.is_derivation(swap)
    with pytest.raises(NotADerivation):
        Derivation(h1, swap)


def test_extension_tuples(h1):
    exp = {
        "D1": "(1/2e17,1/2e27,1/2e37,1/2e47,e14+e23+e57,e13-e24+e67,0)",
        "D2": "(e37,e47,-e17,-e27,e14+e23,e13-e24,0)",
        "D3": "(e37,e47,2e17,2e27,e14+e23,e13-e24,0)",
    }
    for name, text in exp.items():
        ext = rank_one_extension(h1, DERIVATIONS[name])
        assert ext.total == parse_structure_tuple(text)
        assert ext.eta_index == 7


def test_extension_predicates(h1):
    p1 = rank_one_extension(h1, DERIVATIONS["D1"]).total.predicates()
    assert p1["solvable"] and not p1["nilpotent"] and not p1["unimodular"]
    p2 = rank_one_extension(h1, DERIVATIONS["D2"]).total
    assert p2.is_unimodular and p2.is_solvable and not p2.is_nilpotent
    assert h1.is_nilpotent and h1.is_unimodular


def test_extension_d_formula_matches(h1):
    rng = random.Random(7)
    ext = rank_one_extension(h1, DERIVATIONS["D3"])
    for k in range(1, 5):
        g = rand_form(rng, 6, k)
        assert ext.total.d(ext.lift(g)) == extension_d_formula(ext, g)


def test_series():
    g = parse_structure_tuple("(0,0,e12,e13)")
    assert g.lower_central_series == [4, 2, 1, 0]
    assert g.is_nilpotent
    assert abelian(3).derived_series == [3, 0]


def test_ricci_h1(h1):
    ric = ricci_operator(h1, MetricData.euclidean(h1))
    assert matrices_equal(ric, diagonal([-1, -1, -1, -1, 1, 1]))
    sol = nilsoliton_check(h1, MetricData.euclidean(h1))
    assert sol is not None and sol.admits(-3)
    D = [[ric[i][j] + 3 * (i == j) for j in range(6)] for i in range(6)]
    assert matrices_equal(D, [[4 * x for x in r] for r in DERIVATIONS["D1"]])


def test_einstein_extension(h1):
    g = rank_one_extension(h1, DERIVATIONS["D1"]).total
    ric = ricci_operator(g, MetricData.euclidean(g))
    assert matrices_equal(ric, [[-3 * x for x in r] for r in identity(7)])


def test_h2_no_nilsoliton_for_euclidean_metric():
    h2 = parse_structure_tuple(H2)
    assert h2.is_nilpotent
    assert nilsoliton_check(h2, MetricData.euclidean(h2)) is None


@pytest.mark.parametrize("text", [H1, H2, "(1/2e17,1/2e27,1/2e37,1/2e47,e14+e23+e57,e13-e24+e67,0)"])
def test_scalar_curvature_is_ricci_trace(text):
    g = parse_structure_tuple(text)
    m = MetricData(g, diagonal([1, 2] + [1] * (g.dim - 2)))
    ric = ricci_operator(g, m)
    assert sum(ric[i][i] for i in range(g.dim)) == scalar_curvature(g, m)


def test_change_basis_identity(h1):
    assert change_basis(h1, identity(6)) == h1


def test_change_basis_roundtrip(h1):
    Q = identity(6)
    Q[0][1] = Fraction(2)
    g = change_basis(h1, Q)
    assert g.predicates() == h1.predicates()
    Qi = identity(6)
    Qi[0][1] = Fraction(-2)
    assert change_basis(g, Qi) == h1


def test_render_tuple_roundtrip(h1):
    assert parse_structure_tuple(render_tuple(h1)) == h1


@settings(max_examples=60, deadline=None)
@given(forms(6, 2))
def test_d_squared_zero_h2(a):
    h2 = parse_structure_tuple(H2)
    assert not h2.d(h2.d(a))


@settings(max_examples=40, deadline=None)
@given(vectors(7), forms(7, 2))
def test_lie_derivative_commutes_with_d(X, a):
    g = parse_structure_tuple("(e37,e47,2e17,2e27,e14+e23,e13-e24,0)")
    assert g.d(g.lie_derivative(X, a)) == g.lie_derivative(X, g.d(a))


@settings(max_examples=40, deadline=None)
@given(vectors(7), forms(7, 3))
def test_cartan_formula(X, a):
    from g2forge.exterior import interior

    g = parse_structure_tuple("(1/2e17,1/2e27,1/2e37,1/2e47,e14+e23+e57,e13-e24+e67,0)")
    assert g.lie_derivative(X, a) == interior(X, g.d(a)) + g.d(interior(X, a))
