"""SU(3)-structures on six-dimensional Lie algebras and their G2 extensions.

A pair (omega, psi) is validated through the stable-form invariant of psi:
K(X) is the vector v with i_v e^{1..6} = i_X psi ^ psi, and
lambda = tr(K^2) / 6.  For lambda < 0 the almost complex structure is
J = +-K / sqrt(-lambda), the sign fixed by requiring omega(X, JX) > 0, and
psi_hat(X, Y, Z) = psi(JX, JY, JZ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exterior import AltForm, basis_vector, endo_action, interior, pullback, wedge
from .g2 import G2Analysis, sqrt_exact, vector_norm_squared
from .liealg import (
    Derivation,
    Extension,
    LieAlgebra,
    change_basis,
    matrices_equal,
    rank_one_extension,
)
from .scalars import definiteness, identity, is_zero, matmul, nullspace, rational_root

DIM = 6


class SU3Rejected(ValueError):
    """Carries ``criterion``, the first invariant that failed."""

    def __init__(self, criterion: str, detail: str = ""):
        self.criterion = criterion
        super().__init__(f"not an SU(3)-structure: {criterion}" + (f" ({detail})" if detail else ""))


class SplitError(ValueError):
    pass


def standard_pair(dim: int = DIM) -> tuple[AltForm, AltForm]:
    omega = AltForm(dim, 2, {(0, 1): 1, (2, 3): 1, (4, 5): 1})
    psi = AltForm(dim, 3, {(0, 2, 4): 1, (0, 3, 5): -1, (1, 2, 5): -1, (1, 3, 4): -1})
    return omega, psi


def _five_form_to_vector(beta: AltForm) -> list:
    # i_{e_i} e^{1..6} = (-1)^i e^{1..i^..6} (0-based i)
    out = []
    for i in range(DIM):
        idx = tuple(k for k in range(DIM) if k != i)
        c = beta.terms.get(idx, Fraction(0))
        out.append(-c if i % 2 else c)
    return out


def stability_operator(psi: AltForm) -> list[list]:
    """K_psi relative to the volume e^{1..6}; column j is K(e_j)."""
    cols = [_five_form_to_vector(wedge(interior(basis_vector(DIM, j), psi), psi)) for j in range(DIM)]
    return [[cols[j][i] for j in range(DIM)] for i in range(DIM)]


def stability_invariant(psi: AltForm):
    K = stability_operator(psi)
    K2 = matmul(K, K)
    return sum((K2[i][i] for i in range(DIM)), Fraction(0)) / 6


def pullback_by(J: Sequence[Sequence], a: AltForm) -> AltForm:
    """(J^* a)(X, ..) = a(JX, ..)."""
    return pullback(J, a)


@dataclass(frozen=True)
class SU3Pair:
    algebra: LieAlgebra
    omega: AltForm
    psi: AltForm
    psi_hat: AltForm
    J: tuple
    ring: str = "exact"

    @property
    def metric(self) -> list[list]:
        """g(X, Y) = omega(X, JY)."""
        return _compatible_metric(self.omega, self.J)


def _compatible_metric(omega: AltForm, J) -> list[list]:
    out = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            Jej = [J[r][j] for r in range(DIM)]
            row.append(interior(Jej, interior(basis_vector(DIM, i), omega)).terms.get((), Fraction(0)))
        out.append(row)
    return out


def validate_su3(h: LieAlgebra, omega: AltForm, psi: AltForm) -> SU3Pair:
    if h.dim != DIM or omega.dim != DIM or psi.dim != DIM:
        raise SU3Rejected("dimension", "SU(3)-structures live in dimension 6")
    if omega.degree != 2 or psi.degree != 3:
        raise SU3Rejected("degrees", "expected a 2-form and a 3-form")
    if wedge(omega, psi):
        raise SU3Rejected("omega^psi=0")
    omega3 = wedge(wedge(omega, omega), omega)
    vol = omega3.top_coefficient()
    if is_zero(vol):
        raise SU3Rejected("omega^3!=0")
    lam = stability_invariant(psi)
    if not lam < 0:
        raise SU3Rejected("lambda(psi)<0", f"lambda = {lam}")
    K = stability_operator(psi)
    root = rational_root(-lam, 2) if not isinstance(lam, float) else None
    ring = "exact"
    if root is None:
        root = math.sqrt(float(-lam))
        ring = "float"
    J = [[x / root for x in row] for row in K]
    g = _compatible_metric(omega, J)
    s = definiteness(g)
    if s == 0:
        raise SU3Rejected("omega-compatibility", "omega(., J.) is not definite")
    if s < 0:
        J = [[-x for x in row] for row in J]
        g = [[-x for x in row] for row in g]
    JJ = matmul(J, J)
    minus_id = [[-x for x in row] for row in identity(DIM)]
    if ring == "exact" and not matrices_equal(JJ, minus_id):
        raise SU3Rejected("J^2=-Id")
    if ring == "exact" and pullback_by(J, omega) != omega:
        raise SU3Rejected("omega(J.,J.)=omega")
    psi_hat = pullback_by(J, psi)
    lhs = omega3
    rhs = wedge(psi, psi_hat) * Fraction(3, 2)
    if ring == "exact":
        if lhs != rhs:
            raise SU3Rejected("omega^3=3/2 psi^psi_hat")
    elif abs(float(lhs.top_coefficient()) - float(rhs.top_coefficient())) > 1e-9:
        raise SU3Rejected("omega^3=3/2 psi^psi_hat")
    return SU3Pair(h, omega, psi, psi_hat, tuple(tuple(r) for r in J), ring)


@dataclass(frozen=True)
class SU3Class:
    half_flat: bool
    coupled_constant: object
    symplectic_half_flat: bool

    @property
    def coupled(self) -> bool:
        return self.coupled_constant is not None and not is_zero(self.coupled_constant)


def proportionality(a: AltForm, b: AltForm):
    """The scalar c with a = c b, or None."""
    if not b:
        return Fraction(0) if not a else None
    k = next(iter(b.terms))
    c = a.terms.get(k, Fraction(0)) / b.terms[k]
    return c if a == b * c else None


def classify_su3(pair: SU3Pair) -> SU3Class:
    h = pair.algebra
    domega = h.d(pair.omega)
    dpsi = h.d(pair.psi)
    half_flat = not wedge(domega, pair.omega) and not dpsi
    c = proportionality(domega, pair.psi) if half_flat else None
    return SU3Class(half_flat, c if half_flat else None, half_flat and c is not None and is_zero(c))


# -- bridges to G2 -----------------------------------------------------------

@dataclass(frozen=True)
class Prediction:
    """What the eigen-equations of D predict for phi = omega ^ eta + psi."""

    lee: AltForm | None
    closed: bool | None
    exact: bool | None
    witness: AltForm | None
    first_kind: bool | None
    a: object = None
    mu: object = None


@dataclass(frozen=True)
class G2FromSU3:
    extension: Extension
    phi: AltForm
    coupling: object
    prediction: Prediction


def g2_from_su3(pair: SU3Pair, D: Derivation | Sequence[Sequence]) -> G2FromSU3:
    """Extension h x_D R with phi = omega ^ eta + psi and the eigenvalue predictions."""
    h = pair.algebra
    if not isinstance(D, Derivation):
        D = Derivation(h, D)
    ext = rank_one_extension(h, D)
    n = ext.total.dim
    eta = ext.eta
    omega7 = ext.lift(pair.omega)
    psi7 = ext.lift(pair.psi)
    phi = wedge(omega7, eta) + psi7
    cls = classify_su3(pair)
    c = cls.coupled_constant
    if not cls.coupled:
        return G2FromSU3(ext, phi, c, Prediction(None, None, None, None, None))
    ratio = proportionality(endo_action(D.map, pair.psi), pair.psi)
    if ratio is None:
        return G2FromSU3(ext, phi, c, Prediction(None, None, None, None, None))
    a = -ratio - c
    lee = eta * a
    mu = proportionality(endo_action(D.map, pair.omega), pair.omega)
    if mu is None or mu == -c:
        return G2FromSU3(ext, phi, c, Prediction(lee, is_zero(a), None, None, None, a, mu))
    witness = omega7 / c
    return G2FromSU3(ext, phi, c, Prediction(lee, is_zero(a), True, witness, is_zero(mu), a, mu))


@dataclass(frozen=True)
class SplitResult:
    ideal: LieAlgebra
    pair: SU3Pair
    derivation: Derivation
    coupling: object
    mu: object
    epsilon: int
    basis: tuple
    norm: object


def split_exact_lcc(
    g: LieAlgebra,
    phi: AltForm,
    theta: AltForm,
    X: Sequence,
    epsilon: int | None = None,
) -> SplitResult:
    """Split g = ker(theta) + <X> for an exact structure phi = d_theta(i_X phi).

    ``epsilon`` picks the unit vector epsilon X / |X|; by default it is
    chosen so the coupling constant has the sign of -theta(X).
    """
    n = g.dim
    X = list(X)
    theta_X = sum((theta.terms.get((i,), Fraction(0)) * X[i] for i in range(n)), Fraction(0))
    if is_zero(theta_X):
        raise SplitError("precondition failed: theta(X) = 0")
    sigma = interior(X, phi)
    if g.d(sigma) - wedge(theta, sigma) != phi:
        raise SplitError("phi is not d_theta(i_X phi)")
    an = G2Analysis(g, phi)
    norm2 = vector_norm_squared(an, X)
    norm = sqrt_exact(norm2)
    if epsilon is None:
        # c = epsilon / |X| carries the sign of -theta(X)
        epsilon = 1 if theta_X < 0 else -1
    theta_row = [[theta.terms.get((i,), Fraction(0)) for i in range(n)]]
    hbasis = nullspace(theta_row, n)
    for b in hbasis:
        ip = sum((b[i] * an.metric[i][j] * X[j] for i in range(n) for j in range(n)), Fraction(0))
        if not is_zero(ip):
            raise SplitError("ker(theta) is not orthogonal to X")
    Q = [[hbasis[c][r] if c < n - 1 else X[r] for c in range(n)] for r in range(n)]
    g2 = change_basis(g, Q)
    phi2 = pullback(Q, phi)
    keep = range(n - 1)
    ideal_diffs = []
    D = [[Fraction(0)] * (n - 1) for _ in range(n - 1)]
    for k in range(n - 1):
        de = g2.differentials[k]
        ideal_diffs.append(AltForm(n - 1, 2, de.restrict(keep).terms))
        for (i, j), v in de.terms.items():
            if j == n - 1:
                D[k][i] = D[k][i] + v
    if g2.differentials[n - 1]:
        raise SplitError("the complement is not a one-dimensional quotient")
    ideal = LieAlgebra(ideal_diffs)
    xi = [Fraction(0)] * (n - 1) + [Fraction(1)]
    sigma2 = interior(xi, phi2)
    c = epsilon / norm
    omega = AltForm(n - 1, 2, sigma2.restrict(keep).terms) * c
    psi = AltForm(n - 1, 3, phi2.restrict(keep).terms)
    pair = validate_su3(ideal, omega, psi)
    der = Derivation(ideal, D)
    mu = -(1 + theta_X)
    return SplitResult(ideal, pair, der, c, mu, epsilon, tuple(tuple(r) for r in Q), norm)


__all__ = [
    "G2FromSU3",
    "Prediction",
    "SU3Class",
    "SU3Pair",
    "SU3Rejected",
    "SplitError",
    "SplitResult",
    "classify_su3",
    "g2_from_su3",
    "proportionality",
    "split_exact_lcc",
    "stability_invariant",
    "stability_operator",
    "standard_pair",
    "validate_su3",
]
