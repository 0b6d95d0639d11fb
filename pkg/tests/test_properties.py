"""Structural invariants checked on catalog data and randomized inputs."""

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from g2forge import catalog as cat
from g2forge import conformal
from g2forge.catalog import DERIVATIONS, NILPOTENT
from g2forge.exterior import AltForm, endo_action, subspace_basis, wedge
from g2forge.g2 import (
    analyze,
    classify,
    lcc_subcomplex_check,
    lee_form,
    metric_volume,
    standard_phi,
    torsion_forms,
)
from g2forge.liealg import (
    MetricData,
    diagonal,
    is_metric_symmetric,
    rank_one_extension,
    ricci_operator,
)
from g2forge.notation import ParseError, parse_structure_tuple, render_tuple
from g2forge.scalars import det, nullspace
from g2forge.su3 import classify_su3, pullback_by, validate_su3

from conftest import fractions, rand_fraction

ALL = cat.names()
EXAMPLES = ("ex5.1", "ex5.2", "ex5.3")


@pytest.mark.parametrize("name", ALL)
def test_d_squared_on_bases(catalog, name):
    g = catalog.get(name).algebra
    for k in (1, 2):
        for a in subspace_basis(g.dim, k):
            assert not g.d(g.d(a))


@pytest.mark.parametrize("name", ["h1", "h2", "n2", "ex5.1", "ex5.3"])
def test_ricci_metric_symmetric(catalog, name):
    g = catalog.get(name).algebra
    m = MetricData(g, diagonal([1, 2, 1, 3, 1, 1, 2][: g.dim]))
    assert is_metric_symmetric(ricci_operator(g, m), m)


def test_nilpotent_derivation_gives_nilpotent_extension(catalog):
    h1 = catalog.get("h1").algebra
    # nilpotent members of a basis of Der(h1)
    rows = h1.derivation_constraints()
    basis = nullspace(rows, 36)
    found = 0
    for v in basis:
        D = [[v[i * 6 + j] for j in range(6)] for i in range(6)]
        P = D
        for _ in range(6):
            P = [[sum(P[i][k] * D[k][j] for k in range(6)) for j in range(6)] for i in range(6)]
        if all(x == 0 for r in P for x in r):
            assert rank_one_extension(h1, D).total.is_nilpotent
            found += 1
    assert found


@pytest.mark.parametrize("name", EXAMPLES + ("R7",))
def test_lcc_flag_matches_subcomplex(catalog, name):
    ent = catalog.get(name)
    an = analyze(ent.algebra, ent.phi)
    assert classify(an).lcc == lcc_subcomplex_check(an)


@pytest.mark.parametrize("name", EXAMPLES)
def test_classification_flags_consistent(catalog, name):
    cls = classify(analyze(catalog.get(name).algebra))
    assert cls.torsion_free == (cls.closed and cls.coclosed)
    assert not cls.lcp or cls.lcc
    assert not cls.closed or (cls.lcc and not cls.lee)


@pytest.mark.parametrize("name", EXAMPLES)
def test_torsion_membership(catalog, name):
    an = analyze(catalog.get(name).algebra)
    t = torsion_forms(an)
    assert not wedge(t.tau2, an.psi)
    assert not wedge(an.phi, t.tau3) and not wedge(an.psi, t.tau3)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(EXAMPLES), st.sampled_from([Fraction(2), Fraction(1, 3), Fraction(5), Fraction(3, 2)]))
def test_lee_form_scale_invariant(name, lam):
    g = cat.get(name).algebra
    assert lee_form(analyze(g, standard_phi() * lam ** 3)) == lee_form(analyze(g))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(EXAMPLES), st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
def test_exactness_conformal_class(name, lam):
    ent = cat.get(name)
    a = conformal.solve_exact(ent.algebra, ent.phi, ent.theta).feasible
    b = conformal.solve_exact(ent.algebra, ent.phi * lam, ent.theta).feasible
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=-2, max_value=2), st.integers(min_value=-2, max_value=2))
def test_volume_ninth_power(a, b):
    Q = [[Fraction(int(i == j)) for j in range(7)] for i in range(7)]
    Q[0][3], Q[2][5] = Fraction(a), Fraction(b)
    mv = metric_volume(pullback_by(Q, standard_phi()) * 8)
    from g2forge.g2 import b_map

    assert mv.volume_scale ** 9 == abs(det(b_map(pullback_by(Q, standard_phi()) * 8)))


@pytest.mark.parametrize("name", ["h1", "h2"])
def test_su3_pair_identities(catalog, name):
    ent = catalog.get(name)
    p = validate_su3(ent.algebra, ent.omega, ent.psi)
    w3 = wedge(wedge(p.omega, p.omega), p.omega)
    assert not wedge(p.omega, p.psi) and not wedge(p.omega, p.psi_hat)
    assert wedge(p.psi, p.psi_hat) == w3 * Fraction(2, 3)
    assert pullback_by(p.J, p.omega) == p.omega
    cls = classify_su3(p)
    assert cls.coupled and not ent.algebra.d(p.psi)


def test_eigen_equation_transfer(catalog):
    h = catalog.get("h1")
    for name in DERIVATIONS:
        D = DERIVATIONS[name]
        Dw = endo_action(D, h.omega)
        if not Dw:
            assert not endo_action(D, h.psi)
    # D3 moves omega, so the hypothesis does not apply there
    assert endo_action(DERIVATIONS["D3"], h.omega)
    assert not endo_action(DERIVATIONS["D2"], h.omega)


@pytest.mark.parametrize("name", EXAMPLES)
def test_automorphisms_preserve_theta(catalog, name):
    ent = catalog.get(name)
    for X in conformal.automorphism_algebra(ent.algebra, ent.phi):
        assert not ent.algebra.lie_derivative(list(X), ent.theta)
        assert not ent.algebra.lie_derivative(list(X), ent.phi)


@pytest.mark.parametrize("name", EXAMPLES)
def test_cohomology_representatives_closed(catalog, name):
    ent = catalog.get(name)
    t = conformal.lichnerowicz_cohomology(ent.algebra, ent.theta)
    assert t.euler_characteristic == 0
    for reps in t.representatives:
        for r in reps:
            assert not conformal.d_theta(ent.algebra, ent.theta, r)


@pytest.mark.parametrize("name", NILPOTENT)
def test_twisted_closed_is_exact_on_nilpotent(catalog, name):
    # H^3_theta = 0 for theta != 0, so any d_theta-closed 3-form is d_theta-exact
    g = catalog.get(name).algebra
    rng = random.Random(name)
    basis = cat._generic_closed_theta(g)[1]
    th = AltForm.one_form([sum((rand_fraction(rng) * v[i] for v in basis), Fraction(0)) for i in range(7)])
    if not th:
        th = AltForm.one_form(list(basis[0]))
    M = conformal.d_theta_matrix(g, th, 3)
    ker = nullspace(M, 35)
    coeffs = [rand_fraction(rng) for _ in ker]
    vec = [sum((c * v[i] for c, v in zip(coeffs, ker)), Fraction(0)) for i in range(35)]
    phi = AltForm.from_coords(7, 3, vec)
    assert conformal.solve_exact(g, phi, th).feasible


tuple_entries = st.lists(
    st.tuples(fractions.filter(bool), st.sampled_from([(i, j) for i in range(1, 7) for j in range(i + 1, 7)])),
    max_size=3,
)


@settings(max_examples=100, deadline=None)
@given(st.lists(tuple_entries, min_size=6, max_size=6))
def test_random_tuple_roundtrip(entries):
    parts = []
    for terms in entries:
        s = ""
        for c, (i, j) in terms:
            sign = "-" if c < 0 else "+"
            c = abs(c)
            coef = "" if c == 1 else str(c)
            s += f"{sign}{coef}e{i}{j}"
        s = s.lstrip("+") or "0"
        parts.append(s)
    g = parse_structure_tuple("(" + ",".join(parts) + ")", check=False)
    assert parse_structure_tuple(render_tuple(g), check=False) == g


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.text(alphabet="()e0123456789+-−/., x\n", max_size=30))
def test_parser_never_panics(text):
    try:
        parse_structure_tuple(text, check=False)
    except ParseError as exc:
        assert exc.line >= 1 and exc.col >= 1
