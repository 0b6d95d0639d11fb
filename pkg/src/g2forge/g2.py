"""G2-structures on seven-dimensional Lie algebras.

A 3-form phi determines the symmetric map

    b(X, Y) = 1/6 * coefficient of e^{1..7} in i_X phi ^ i_Y phi ^ phi,

and phi is a G2-form exactly when b is definite.  With B the matrix of b,
the volume scale is |det B|^(1/9), the orientation is sign(det B) and the
metric is B / (sign * scale).  Everything downstream (Hodge star, type
decompositions, torsion) is computed by solving the linear membership
conditions that define each piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exterior import (
    AltForm,
    Hodge,
    basis_vector,
    index_basis,
    interior,
    subspace_basis,
    top_pairing,
    wedge,
)
from .liealg import LieAlgebra
from .scalars import (
    FLOAT_TOL,
    IncompatibleRingError,
    Polynomial,
    definiteness,
    det,
    is_zero,
    rational_root,
    solve_linear,
)

DIM = 7
STANDARD_PHI_TERMS = {"127": 1, "347": 1, "567": 1, "135": 1, "146": -1, "236": -1, "245": -1}


class NotG2Error(ValueError):
    """The 3-form does not have definite b."""


class RingLimitation(TypeError):
    """The requested decision cannot be made in the polynomial ring."""


class TorsionError(ArithmeticError):
    pass


def standard_phi(dim: int = DIM) -> AltForm:
    terms = {tuple(int(ch) - 1 for ch in k): v for k, v in STANDARD_PHI_TERMS.items()}
    return AltForm(dim, 3, terms)


def _check_phi(phi: AltForm):
    if phi.dim != DIM or phi.degree != 3:
        raise ValueError("a G2 form is a 3-form on a 7-dimensional space")


def b_entry(phi: AltForm, i: int, j: int):
    """b(e_i, e_j) for 0-based indices; works over any coefficient ring."""
    _check_phi(phi)
    a = interior(basis_vector(DIM, i), phi)
    b = a if i == j else interior(basis_vector(DIM, j), phi)
    return top_pairing(wedge(a, b), phi) / 6


def b_map(phi: AltForm, algebra: LieAlgebra | None = None) -> list[list]:
    """The 7x7 matrix of b.  ``algebra`` is accepted for symmetry with the other operations; b is purely algebraic."""
    _check_phi(phi)
    contractions = [interior(basis_vector(DIM, i), phi) for i in range(DIM)]
    B = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i, DIM):
            v = top_pairing(wedge(contractions[i], contractions[j]), phi) / 6
            B[i][j] = B[j][i] = v
    return B


@dataclass(frozen=True)
class G2Check:
    definite: bool
    sign: int | None


def is_g2(phi: AltForm, tol: float = FLOAT_TOL) -> G2Check:
    B = b_map(phi)
    if any(isinstance(x, Polynomial) for row in B for x in row):
        if any(isinstance(B[i][i], Polynomial) and B[i][i].is_zero() for i in range(DIM)):
            return G2Check(False, None)
        if all(not isinstance(x, Polynomial) or x.is_constant() for row in B for x in row):
            B = [[x.constant_value() if isinstance(x, Polynomial) else x for x in row] for row in B]
        else:
            raise RingLimitation("definiteness of a polynomial b-matrix is undecidable here")
    s = definiteness(B, tol)
    return G2Check(s != 0, s or None)


@dataclass(frozen=True)
class MetricVolume:
    metric: list
    volume_scale: object
    orientation_sign: int
    ring: str


def metric_volume(phi: AltForm, ring: str | None = None, tol: float = FLOAT_TOL) -> MetricVolume:
    """Metric, volume scale and orientation of a G2 form.

    The result is exact when |det B| is the ninth power of a rational;
    ``ring="float"`` forces the float path.
    """
    B = b_map(phi)
    if any(isinstance(x, Polynomial) for row in B for x in row):
        raise RingLimitation("metric extraction needs numeric coefficients")
    floaty = any(isinstance(x, float) for row in B for x in row)
    if definiteness(B, tol) == 0:
        raise NotG2Error("b is indefinite: phi does not define a G2-structure")
    D = det(B)
    sign = 1 if D > 0 else -1
    v = None
    if not floaty and ring != "float":
        v = rational_root(abs(Fraction(D)), 9)
    if v is not None:
        metric = [[x / (sign * v) for x in row] for row in B]
        return MetricVolume(metric, v, sign, "exact")
    if ring == "exact":
        raise RingLimitation("|det b| is not a ninth power of a rational")
    vf = abs(float(D)) ** (1.0 / 9.0)
    metric = [[float(x) / (sign * vf) for x in row] for row in B]
    return MetricVolume(metric, vf, sign, "float")


def _to_float_form(a: AltForm) -> AltForm:
    return AltForm._raw(a.dim, a.degree, {k: float(v) for k, v in a.terms.items()})


def forms_close(a: AltForm, b: AltForm, tol: float | None) -> bool:
    diff = a - b
    if tol is None:
        return diff.is_zero()
    return all(abs(v) <= tol for v in diff.terms.values())


@dataclass(frozen=True)
class TwoFormParts:
    vector: list
    seven: AltForm
    fourteen: AltForm


@dataclass(frozen=True)
class ThreeFormParts:
    scalar: object
    one_form: AltForm
    one: AltForm
    seven: AltForm
    twentyseven: AltForm


@dataclass(frozen=True)
class TorsionForms:
    tau0: object
    tau1: AltForm
    tau2: AltForm
    tau3: AltForm

    def as_dict(self):
        return {"tau0": self.tau0, "tau1": self.tau1, "tau2": self.tau2, "tau3": self.tau3}


@dataclass(frozen=True)
class G2Class:
    torsion_free: bool
    closed: bool
    coclosed: bool
    lcc: bool
    lcp: bool
    lee: AltForm | None


class G2Analysis:
    """A 3-form on a 7-dimensional Lie algebra together with its induced data."""

    def __init__(self, algebra: LieAlgebra, phi: AltForm, ring: str | None = None, tol: float = FLOAT_TOL):
        _check_phi(phi)
        if algebra.dim != DIM:
            raise ValueError("G2-structures live on 7-dimensional algebras")
        self.algebra = algebra
        self.tolerance = tol
        mv = metric_volume(phi, ring=ring, tol=tol)
        self.ring = mv.ring
        self.phi = phi if self.ring == "exact" else _to_float_form(phi)
        self.bmat = b_map(phi)
        self.metric = mv.metric
        self.volume_scale = mv.volume_scale
        self.orientation_sign = mv.orientation_sign
        self.hodge = Hodge(self.metric, self.volume_scale, self.orientation_sign)

    @property
    def tol(self) -> float | None:
        return None if self.ring == "exact" else self.tolerance

    def _solve(self, A, b):
        return solve_linear(A, b, self.tol)

    def star(self, a: AltForm) -> AltForm:
        if self.ring == "float":
            a = _to_float_form(a)
        return self.hodge(a)

    def d(self, a: AltForm) -> AltForm:
        return self.algebra.d(a)

    @cached_property
    def psi(self) -> AltForm:
        """The 4-form *phi."""
        return self.star(self.phi)

    @cached_property
    def dphi(self) -> AltForm:
        return self.d(self.phi)

    @cached_property
    def dpsi(self) -> AltForm:
        return self.d(self.psi)

    def volume_form(self) -> AltForm:
        return self.hodge.volume()

    # -- type decompositions -------------------------------------------------
    @cached_property
    def _seven_two_forms(self) -> list[AltForm]:
        return [interior(basis_vector(DIM, i), self.phi) for i in range(DIM)]

    @cached_property
    def _seven_three_forms(self) -> list[AltForm]:
        sub = subspace_basis(DIM, 1)
        return [self.star(wedge(self.phi, a)) for a in sub]

    @cached_property
    def twentyseven_basis(self) -> list[AltForm]:
        """Basis of {g : g ^ phi = 0 = g ^ *phi} in Lambda^3."""
        cols = [(wedge(m, self.phi), wedge(m, self.psi)) for m in subspace_basis(DIM, 3)]
        rows = _stack_rows(cols, [6, 7])
        from .scalars import nullspace

        return [AltForm.from_coords(DIM, 3, v) for v in nullspace(rows, 35, self.tol)]

    @cached_property
    def fourteen_basis(self) -> list[AltForm]:
        """Basis of {k : k ^ *phi = 0} in Lambda^2."""
        cols = [(wedge(m, self.psi),) for m in subspace_basis(DIM, 2)]
        rows = _stack_rows(cols, [6])
        from .scalars import nullspace

        return [AltForm.from_coords(DIM, 2, v) for v in nullspace(rows, 21, self.tol)]

    def project(self, a: AltForm):
        return project_forms(self, a)


def _stack_rows(cols: list[tuple], degrees: list[int]) -> list[list]:
    """Coordinate rows of a linear map given by the images of basis vectors.

    Each entry of ``cols`` is a tuple of forms whose degrees follow ``degrees``.
    """
    rows = []
    for block, deg in enumerate(degrees):
        for idx in index_basis(DIM, deg):
            rows.append([col[block].terms.get(idx, Fraction(0)) for col in cols])
    return rows


def _stack_vector(forms: tuple, degrees: list[int]) -> list:
    out = []
    for f, deg in zip(forms, degrees):
        out.extend(f.terms.get(idx, Fraction(0)) for idx in index_basis(DIM, deg))
    return out


def analyze(algebra: LieAlgebra, phi: AltForm | None = None, ring: str | None = None, tol: float = FLOAT_TOL) -> G2Analysis:
    return G2Analysis(algebra, standard_phi() if phi is None else phi, ring=ring, tol=tol)


def project_forms(an: G2Analysis, a: AltForm):
    """Type components of a 2-form (7 + 14) or a 3-form (1 + 7 + 27)."""
    if a.dim != DIM:
        raise ValueError("form must live in dimension 7")
    if an.ring == "float":
        a = _to_float_form(a)
    if a.degree == 2:
        cols = [(wedge(k, an.psi),) for k in an._seven_two_forms]
        sol = an._solve(_stack_rows(cols, [6]), _stack_vector((wedge(a, an.psi),), [6]))
        if not sol.feasible:
            raise ArithmeticError("2-form decomposition system is inconsistent")
        X = list(sol.particular)
        seven = interior(X, an.phi)
        return TwoFormParts(X, seven, a - seven)
    if a.degree == 3:
        cols = [(wedge(an.phi, an.phi), wedge(an.phi, an.psi))]
        cols += [(wedge(s, an.phi), wedge(s, an.psi)) for s in an._seven_three_forms]
        rhs = _stack_vector((wedge(a, an.phi), wedge(a, an.psi)), [6, 7])
        sol = an._solve(_stack_rows(cols, [6, 7]), rhs)
        if not sol.feasible:
            raise ArithmeticError("3-form decomposition system is inconsistent")
        f, *alpha = sol.particular
        alpha_form = AltForm(DIM, 1, {(i,): c for i, c in enumerate(alpha)})
        one = an.phi * f
        seven = an.star(wedge(an.phi, alpha_form))
        return ThreeFormParts(f, alpha_form, one, seven, a - one - seven)
    raise ValueError("type decompositions are implemented for 2- and 3-forms")


def torsion_forms(an: G2Analysis) -> TorsionForms:
    """Solve dphi = t0 *phi + 3 t1^phi + *t3, d*phi = 4 t1^*phi + t2^phi with t2 in L2_14, t3 in L3_27."""
    phi, psi = an.phi, an.psi
    z4 = AltForm.zero(DIM, 4)
    z5 = AltForm.zero(DIM, 5)
    z6 = AltForm.zero(DIM, 6)
    z7 = AltForm.zero(DIM, 7)
    degrees = [4, 5, 6, 6, 7]
    cols = [(psi, z5, z6, z6, z7)]
    for a in subspace_basis(DIM, 1):
        cols.append((wedge(a, phi) * 3, wedge(a, psi) * 4, z6, z6, z7))
    for k in subspace_basis(DIM, 2):
        cols.append((z4, wedge(k, phi), wedge(k, psi), z6, z7))
    for g in subspace_basis(DIM, 3):
        cols.append((an.star(g), z5, z6, wedge(g, phi), wedge(g, psi)))
    rows = _stack_rows(cols, degrees)
    rhs = _stack_vector((an.dphi, an.dpsi, z6, z6, z7), degrees)
    sol = an._solve(rows, rhs)
    if not sol.feasible:
        raise TorsionError("torsion equations are inconsistent")
    x = sol.particular
    tau0 = x[0]
    tau1 = AltForm.from_coords(DIM, 1, x[1:8])
    tau2 = AltForm.from_coords(DIM, 2, x[8:29])
    tau3 = AltForm.from_coords(DIM, 3, x[29:64])
    return TorsionForms(tau0, tau1, tau2, tau3)


def reassemble(an: G2Analysis, t: TorsionForms) -> tuple[AltForm, AltForm]:
    """(dphi, d*phi) rebuilt from torsion forms."""
    dphi = an.psi * t.tau0 + wedge(t.tau1, an.phi) * 3 + an.star(t.tau3)
    dpsi = wedge(t.tau1, an.psi) * 4 + wedge(t.tau2, an.phi)
    return dphi, dpsi


def lee_form(an: G2Analysis) -> AltForm:
    """theta = -1/4 * (*dphi ^ phi)."""
    return an.star(wedge(an.star(an.dphi), an.phi)) * Fraction(-1, 4)


def lee_form_by_solve(an: G2Analysis) -> AltForm | None:
    """The 1-form theta with dphi = theta ^ phi, or None when there is none."""
    cols = [(wedge(a, an.phi),) for a in subspace_basis(DIM, 1)]
    sol = an._solve(_stack_rows(cols, [4]), _stack_vector((an.dphi,), [4]))
    if not sol.feasible:
        return None
    return AltForm.from_coords(DIM, 1, sol.particular)


def classify(an: G2Analysis) -> G2Class:
    tol = an.tol
    zero4 = AltForm.zero(DIM, 4)
    zero5 = AltForm.zero(DIM, 5)
    closed = forms_close(an.dphi, zero4, tol)
    coclosed = forms_close(an.dpsi, zero5, tol)
    theta = lee_form(an)
    lcc = forms_close(an.dphi, wedge(theta, an.phi), tol) and forms_close(
        an.d(theta), AltForm.zero(DIM, 2), tol
    )
    lcp = False
    if lcc:
        t = torsion_forms(an)
        lcp = forms_close(t.tau2, AltForm.zero(DIM, 2), tol)
    return G2Class(
        torsion_free=closed and coclosed,
        closed=closed,
        coclosed=coclosed,
        lcc=lcc,
        lcp=lcp,
        lee=theta if lcc else None,
    )


def lcc_subcomplex_check(an: G2Analysis) -> bool:
    """Whether d maps <phi> + L3_27 into L4_7 + L4_27, tested on a basis."""
    targets = [wedge(a, an.phi) for a in subspace_basis(DIM, 1)]
    targets += [an.star(g) for g in an.twentyseven_basis]
    rows = _stack_rows([(t,) for t in targets], [4])
    for src in [an.phi] + an.twentyseven_basis:
        rhs = _stack_vector((an.d(src),), [4])
        if not an._solve(rows, rhs).feasible:
            return False
    return True


def dv_reconstruction_holds(an: G2Analysis) -> bool:
    """1/6 i_{e_i}phi ^ i_{e_j}phi ^ phi = g_ij * sign * scale * e^{1..7} for all pairs."""
    vol = an.orientation_sign * an.volume_scale
    for i in range(DIM):
        for j in range(DIM):
            lhs = an.bmat[i][j]
            rhs = an.metric[i][j] * vol
            if an.ring == "exact":
                if not is_zero(lhs - rhs):
                    return False
            elif abs(float(lhs) - rhs) > an.tolerance * max(1.0, abs(rhs)):
                return False
    return True


def vector_norm_squared(an: G2Analysis, X: Sequence):
    return sum((X[i] * an.metric[i][j] * X[j] for i in range(DIM) for j in range(DIM)), Fraction(0))


def sqrt_exact(q) -> object:
    """Exact square root of a non-negative rational when it exists, else a float."""
    if isinstance(q, float):
        return math.sqrt(q)
    r = rational_root(Fraction(q), 2)
    return r if r is not None else math.sqrt(q)


__all__ = [
    "G2Analysis",
    "G2Check",
    "G2Class",
    "IncompatibleRingError",
    "MetricVolume",
    "NotG2Error",
    "RingLimitation",
    "ThreeFormParts",
    "TorsionForms",
    "TwoFormParts",
    "analyze",
    "b_entry",
    "b_map",
    "classify",
    "dv_reconstruction_holds",
    "forms_close",
    "is_g2",
    "lcc_subcomplex_check",
    "lee_form",
    "lee_form_by_solve",
    "metric_volume",
    "project_forms",
    "reassemble",
    "standard_phi",
    "torsion_forms",
]
