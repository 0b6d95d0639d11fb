"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line."""

import random
from fractions import Fraction

import pytest

from g2forge import catalog as cat
from g2forge import conformal
from g2forge.catalog import DERIVATIONS, GAMMA_EX53, NILPOTENT
from g2forge.exterior import AltForm, Hodge, interior, wedge
from g2forge.g2 import (
    analyze,
    b_map,
    classify,
    lee_form,
    metric_volume,
    project_forms,
    reassemble,
    standard_phi,
    torsion_forms,
)
from g2forge.liealg import MetricData, matrices_equal, ricci_operator
from g2forge.scalars import identity, matmul, transpose
from g2forge.su3 import classify_su3, g2_from_su3, pullback_by, split_exact_lcc, validate_su3

from conftest import rand_form, rand_fraction, rand_vector

CASES = 1000
EXAMPLES = ("ex5.1", "ex5.2", "ex5.3")


@pytest.fixture
def report(capsys, request):
    """Print one PASS/FAIL line for the criterion, then re-raise any failure."""
    label = request.node.function.__doc__.strip().splitlines()[0]

    class Reporter:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            with capsys.disabled():
                print(f"\n{'PASS' if exc_type is None else 'FAIL'}  {label}")
            return False

    return Reporter()


def _entry(name):
    return cat.get(name)


def _scaled(M, s):
    return [[s * x for x in row] for row in M]


def test_criterion_01_lee_forms(report):
    """criterion 1: Lee forms -e7, e7, e7 for the three examples"""
    with report:
        want = {"ex5.1": -1, "ex5.2": 1, "ex5.3": 1}
        for name in EXAMPLES:
            ent = _entry(name)
            an = analyze(ent.algebra, ent.phi)
            th = lee_form(an)
            assert th == AltForm.one_form([0] * 6 + [want[name]])
            cls = classify(an)
            assert cls.lcc and cls.lee == th


def test_criterion_02_obstruction_polynomials(report):
    """criterion 2: designated b-entry vanishes identically on all eleven nilpotent algebras; abelian control is non-zero"""
    with report:
        for name in NILPOTENT:
            c = cat.prop45_certificate(name)
            assert c.verified, c.evidence
            assert c.evidence["polynomial"] == "0"
        ctl = cat.abelian_control_certificate()
        assert ctl.verified and ctl.evidence["terms"] > 0


def test_criterion_03_einstein_nilsoliton(report):
    """criterion 3: Ric = -3 Id on the D1 extension and Ric = -3 Id + 4 D1 on h1"""
    with report:
        ent = _entry("ex5.1")
        an = analyze(ent.algebra, ent.phi)
        ric7 = ricci_operator(ent.algebra, MetricData(ent.algebra, an.metric))
        assert matrices_equal(ric7, _scaled(identity(7), -3))
        h1 = _entry("h1").algebra
        ric6 = ricci_operator(h1, MetricData.euclidean(h1))
        D1 = DERIVATIONS["D1"]
        expected = [[-3 * int(i == j) + 4 * D1[i][j] for j in range(6)] for i in range(6)]
        assert matrices_equal(ric6, expected)
        assert h1.is_derivation(D1)


def test_criterion_04_exactness(report):
    """criterion 4: ex5.1 not exact; ex5.3 exact with the given primitive; ex5.2 exact with a type-7 primitive"""
    with report:
        e1, e2, e3 = (_entry(n) for n in EXAMPLES)
        assert not conformal.solve_exact(e1.algebra, e1.phi, e1.theta).feasible
        r3 = conformal.solve_exact(e3.algebra, e3.phi, e3.theta)
        assert r3.feasible
        assert conformal.d_theta(e3.algebra, e3.theta, GAMMA_EX53) == e3.phi
        r2 = conformal.solve_exact(e2.algebra, e2.phi, e2.theta)
        assert r2.feasible
        assert conformal.d_theta(e2.algebra, e2.theta, r2.sigma) == e2.phi
        parts = project_forms(analyze(e2.algebra, e2.phi), r2.sigma)
        assert not parts.fourteen and parts.seven == r2.sigma


def test_criterion_05_kinds(report):
    """criterion 5: ex5.2 first kind; ex5.1 and ex5.3 second kind; aut(ex5.3) = span{e5, e6}"""
    with report:
        verdicts = {n: conformal.kind(_entry(n).algebra, _entry(n).phi, _entry(n).theta) for n in EXAMPLES}
        assert verdicts["ex5.2"].kind == "first"
        assert verdicts["ex5.1"].kind == "second" and verdicts["ex5.3"].kind == "second"
        span = [tuple(Fraction(int(i == k)) for i in range(7)) for k in (4, 5)]
        assert sorted(verdicts["ex5.3"].automorphism_basis) == sorted(span)


def test_criterion_06_dixmier(report):
    """criterion 6: H_theta = 0 in every degree for each nilpotent algebra and each basis closed 1-form"""
    with report:
        c = cat.Catalog()
        for name in NILPOTENT:
            cert = cat.dixmier_certificate(c, name)
            assert cert.verified, cert.evidence
            assert cert.evidence["dims"]
            for dims in cert.evidence["dims"].values():
                assert dims == [0] * 8


def test_criterion_07_roundtrip(report):
    """criterion 7: extension predictions agree with the analyzers; the ex5.2 split recovers h1 with mu = 0"""
    with report:
        h = _entry("h1")
        pair = validate_su3(h.algebra, h.omega, h.psi)
        for dname, ex in zip(("D1", "D2", "D3"), EXAMPLES):
            out = g2_from_su3(pair, DERIVATIONS[dname])
            p = out.prediction
            g = out.extension.total
            assert g == _entry(ex).algebra
            an = analyze(g, out.phi)
            assert p.lee == lee_form(an) == classify(an).lee
            ex_res = conformal.solve_exact(g, out.phi, p.lee)
            k = conformal.kind(g, out.phi, p.lee)
            if p.exact is not None:
                assert ex_res.feasible == p.exact
                assert (k.kind == "first") == p.first_kind
        assert g2_from_su3(pair, DERIVATIONS["D2"]).prediction.first_kind
        e2 = _entry("ex5.2")
        fk = conformal.first_kind_solve(e2.algebra, e2.phi, e2.theta)
        res = split_exact_lcc(e2.algebra, e2.phi, e2.theta, fk.first_kind_vector)
        assert res.ideal == h.algebra and res.mu == 0
        c = classify_su3(res.pair).coupled_constant
        assert abs(c) == 1 and res.coupling == c
        flipped = split_exact_lcc(e2.algebra, e2.phi, e2.theta, fk.first_kind_vector, epsilon=-res.epsilon)
        assert -1 in (c, classify_su3(flipped.pair).coupled_constant)


def test_criterion_08_torsion(report):
    """criterion 8: tau0 = 0, tau3 = 0, tau1 = theta/3 and exact reassembly for the three examples"""
    with report:
        for name in EXAMPLES:
            ent = _entry(name)
            an = analyze(ent.algebra, ent.phi)
            t = torsion_forms(an)
            assert t.tau0 == 0 and not t.tau3
            assert t.tau1 == ent.theta / 3
            dphi, dpsi = reassemble(an, t)
            assert not (dphi - an.dphi) and not (dpsi - an.dpsi)


def _unipotent(rng, n=7):
    # det 1, so the induced metric stays exact
    Q = identity(n)
    for _ in range(2):
        i, j = rng.sample(range(n), 2)
        if i < j:
            Q[i][j] = Fraction(rng.randint(-1, 1))
    return Q


def test_criterion_09_property_suites(report):
    """criterion 9: randomized exact property suites with at least 1000 cases each"""
    with report:
        rng = random.Random(20261014)
        algs = [_entry(n) for n in list(NILPOTENT) + list(EXAMPLES)]
        counts = dict.fromkeys(
            ["d2", "dtheta2", "antiderivation", "hodge", "projection2", "projection3", "b"], 0
        )

        # d^2 = 0
        for _ in range(CASES):
            g = rng.choice(algs).algebra
            a = rand_form(rng, 7, rng.randint(0, 5), 0.3)
            assert not g.d(g.d(a))
            counts["d2"] += 1

        # d_theta^2 = 0 for closed theta
        closed = {}
        for ent in algs:
            g = ent.algebra
            closed[ent.name] = [v for v in cat._generic_closed_theta(g)[1]]
        for _ in range(CASES):
            ent = rng.choice(algs)
            g = ent.algebra
            th = AltForm.one_form([sum((rand_fraction(rng) * v[i] for v in closed[ent.name]), Fraction(0)) for i in range(7)])
            a = rand_form(rng, 7, rng.randint(0, 5), 0.3)
            assert not conformal.d_theta(g, th, conformal.d_theta(g, th, a))
            counts["dtheta2"] += 1

        # interior is an antiderivation, wedge is graded commutative
        for _ in range(CASES):
            p, q = rng.randint(0, 4), rng.randint(0, 3)
            a, b = rand_form(rng, 7, p, 0.3), rand_form(rng, 7, q, 0.3)
            X = rand_vector(rng, 7)
            lhs = interior(X, wedge(a, b)) if p + q > 0 else None
            if lhs is not None:
                ia = interior(X, a) if p else AltForm.zero(7, 0)
                ib = interior(X, b) if q else AltForm.zero(7, 0)
                rhs = (wedge(ia, b) if p else AltForm.zero(7, p + q - 1))
                rhs = rhs + (wedge(a, ib) * (-1) ** p if q else AltForm.zero(7, p + q - 1))
                assert lhs == rhs
            assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)
            counts["antiderivation"] += 1

        # ** = 1 in odd dimension for a Riemannian metric
        # G = P^T P keeps sqrt(det G) = |det P| rational
        metrics = [Hodge(identity(7))]
        for _ in range(3):
            P = _unipotent(rng)
            for i in range(7):
                P[i][i] = Fraction(rng.randint(1, 3))
            G = matmul(transpose(P), P)
            vol = 1
            for i in range(7):
                vol *= P[i][i]
            metrics.append(Hodge(G, vol))
        for _ in range(CASES):
            h = rng.choice(metrics)
            a = rand_form(rng, 7, rng.randint(0, 7), 0.3)
            assert h(h(a)) == a
            counts["hodge"] += 1

        # type projections are idempotent and the pieces have dimensions 7 + 14, 1 + 7 + 27
        analyses = [analyze(_entry("ex5.1").algebra)]
        for _ in range(3):
            Q = _unipotent(rng)
            analyses.append(analyze(_entry("ex5.1").algebra, pullback_by(Q, standard_phi())))
        for an in analyses:
            assert 7 + len(an.fourteen_basis) == 21
            assert 1 + 7 + len(an.twentyseven_basis) == 35
        for n_case in range(2 * CASES):
            an = rng.choice(analyses)
            if n_case % 2 == 0:
                a = rand_form(rng, 7, 2, 0.2)
                p = project_forms(an, a)
                assert p.seven + p.fourteen == a
                q = project_forms(an, p.seven)
                assert q.seven == p.seven and not q.fourteen
                assert not wedge(p.fourteen, an.psi)
                counts["projection2"] += 1
            else:
                a = rand_form(rng, 7, 3, 0.15)
                p = project_forms(an, a)
                assert p.one + p.seven + p.twentyseven == a
                q = project_forms(an, p.seven)
                assert q.seven == p.seven and not q.one and not q.twentyseven
                assert not wedge(p.twentyseven, an.phi) and not wedge(p.twentyseven, an.psi)
                counts["projection3"] += 1

        # b is symmetric and cubic in phi
        for _ in range(CASES):
            phi = rand_form(rng, 7, 3, 0.3)
            lam = rand_fraction(rng) or Fraction(1)
            B = b_map(phi)
            assert all(B[i][j] == B[j][i] for i in range(7) for j in range(7))
            assert b_map(phi * lam) == _scaled(B, lam ** 3)
            counts["b"] += 1

        assert all(v >= CASES for v in counts.values()), counts


def test_criterion_10_metric_scaling(report):
    """criterion 10: metric(l^3 phi) = l^2 metric(phi) and volume(l^3 phi) = l^7 volume(phi)"""
    with report:
        rng = random.Random(5)
        forms_ = [standard_phi(), pullback_by(_unipotent(rng), standard_phi())]
        for phi in forms_:
            base = metric_volume(phi)
            for lam in (Fraction(2), Fraction(1, 3), Fraction(5)):
                mv = metric_volume(phi * lam ** 3)
                assert mv.ring == "exact"
                assert mv.metric == _scaled(base.metric, lam ** 2)
                assert mv.volume_scale == base.volume_scale * lam ** 7
