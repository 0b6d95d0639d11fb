"""Twisted differential d_theta = d - theta ^ ., its cohomology, exactness
and the first/second kind distinction for LCC G2-structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exterior import AltForm, index_basis, interior, subspace_basis, wedge
from .liealg import LieAlgebra
from .scalars import is_zero, rank, solve_linear


class NotClosedError(ValueError):
    pass


def _check_theta(g: LieAlgebra, theta: AltForm):
    if theta.degree != 1 or theta.dim != g.dim:
        raise ValueError("theta must be a 1-form on the algebra")
    if g.d(theta):
        raise NotClosedError(f"theta is not closed: d theta = {g.d(theta)}")


def d_theta(g: LieAlgebra, theta: AltForm, a: AltForm) -> AltForm:
    _check_theta(g, theta)
    return g.d(a) - wedge(theta, a)


def d_theta_matrix(g: LieAlgebra, theta: AltForm, k: int) -> list[list]:
    src = index_basis(g.dim, k)
    dst = index_basis(g.dim, k + 1)
    cols = [g.d(m) - wedge(theta, m) for m in subspace_basis(g.dim, k)]
    return [[col.terms.get(J, Fraction(0)) for col in cols] for J in dst] if src and dst else []


@dataclass(frozen=True)
class CohomologyTable:
    theta: AltForm
    dims: tuple
    representatives: tuple = field(compare=False)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))


def lichnerowicz_cohomology(g: LieAlgebra, theta: AltForm) -> CohomologyTable:
    """dim H^k_theta for k = 0..n by exact rank-nullity, with representative cocycles.

    Representatives are the kernel basis vectors (deterministic pivot order)
    that are independent modulo the image of the previous differential.
    """
    _check_theta(g, theta)
    n = g.dim
    mats = [d_theta_matrix(g, theta, k) for k in range(n)]
    ranks = [rank(M) if M else 0 for M in mats] + [0]
    dims = []
    reps = []
    for k in range(n + 1):
        size = comb(n, k)
        ker = size - ranks[k]
        im = ranks[k - 1] if k > 0 else 0
        dims.append(ker - im)
        reps.append(tuple(_representatives(g, theta, mats, k, size, ker - im)))
    return CohomologyTable(theta, tuple(dims), tuple(reps))


def _representatives(g, theta, mats, k, size, count) -> list[AltForm]:
    if count == 0:
        return []
    from .scalars import nullspace

    kernel = nullspace(mats[k], size) if k < g.dim else [
        tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)
    ]
    image = []
    if k > 0:
        prev = mats[k - 1]
        image = [[row[j] for row in prev] for j in range(len(prev[0]))]
    chosen: list = []
    current_rank = rank(image) if image else 0
    for v in kernel:
        trial = image + [list(x) for x in chosen] + [list(v)]
        r = rank(trial)
        if r > current_rank:
            chosen.append(v)
            current_rank = r
        if len(chosen) == count:
            break
    return [AltForm.from_coords(g.dim, k, v) for v in chosen]


@dataclass(frozen=True)
class ExactnessResult:
    feasible: bool
    sigma: AltForm | None
    rank: int
    nullity: int = 0

    def __bool__(self):
        return self.feasible


def solve_exact(g: LieAlgebra, phi: AltForm, theta: AltForm) -> ExactnessResult:
    """A 2-form sigma with d_theta sigma = phi, or the infeasible verdict."""
    _check_theta(g, theta)
    k = phi.degree - 1
    M = d_theta_matrix(g, theta, k)
    rhs = [phi.terms.get(J, Fraction(0)) for J in index_basis(g.dim, k + 1)]
    sol = solve_linear(M, rhs)
    if not sol.feasible:
        return ExactnessResult(False, None, sol.rank)
    return ExactnessResult(True, AltForm.from_coords(g.dim, k, sol.particular), sol.rank, len(sol.nullspace))


def _lie_derivative_columns(g: LieAlgebra, phi: AltForm) -> list[AltForm]:
    n = g.dim
    cols = []
    for i in range(n):
        X = [Fraction(int(i == j)) for j in range(n)]
        cols.append(g.lie_derivative(X, phi))
    return cols


def automorphism_algebra(g: LieAlgebra, phi: AltForm) -> list[tuple]:
    """Basis of {X : L_X phi = 0} (left-invariant infinitesimal automorphisms)."""
    from .scalars import nullspace

    n = g.dim
    cols = _lie_derivative_columns(g, phi)
    rows = [[c.terms.get(J, Fraction(0)) for c in cols] for J in index_basis(n, phi.degree)]
    rows = [r for r in rows if any(r)]
    return nullspace(rows, n)


def evaluate(theta: AltForm, X: Sequence):
    return sum((theta.terms.get((i,), Fraction(0)) * X[i] for i in range(theta.dim)), Fraction(0))


@dataclass(frozen=True)
class KindVerdict:
    kind: str
    automorphism_basis: tuple
    ell_theta_image: str
    witness: tuple | None


def kind(g: LieAlgebra, phi: AltForm, theta: AltForm) -> KindVerdict:
    """First kind iff theta is non-zero on some infinitesimal automorphism."""
    basis = automorphism_algebra(g, phi)
    for X in basis:
        t = evaluate(theta, X)
        if not is_zero(t):
            w = tuple(-x / t for x in X)
            return KindVerdict("first", tuple(basis), "R", w)
    return KindVerdict("second", tuple(basis), "0", None)


@dataclass(frozen=True)
class FirstKindResult:
    exact_type7: bool
    vector: tuple | None
    theta_x: object
    first_kind: bool
    first_kind_vector: tuple | None


def _type7_system(g: LieAlgebra, phi: AltForm, theta: AltForm, fix_t=None):
    # unknowns (X_1..X_n, t): L_X phi - t phi = phi and theta(X) - t = 0
    n = g.dim
    cols = _lie_derivative_columns(g, phi)
    rows, rhs = [], []
    for J in index_basis(n, phi.degree):
        rows.append([c.terms.get(J, Fraction(0)) for c in cols] + [-phi.terms.get(J, Fraction(0))])
        rhs.append(phi.terms.get(J, Fraction(0)))
    rows.append([theta.terms.get((i,), Fraction(0)) for i in range(n)] + [Fraction(-1)])
    rhs.append(Fraction(0))
    if fix_t is not None:
        rows.append([Fraction(0)] * n + [Fraction(1)])
        rhs.append(Fraction(fix_t))
    return solve_linear(rows, rhs)


def first_kind_solve(g: LieAlgebra, phi: AltForm, theta: AltForm) -> FirstKindResult:
    """Solve L_X phi = (theta(X) + 1) phi, i.e. phi = d_theta(i_X phi).

    Reports a solution if any, and separately whether one exists with
    theta(X) = -1.
    """
    _check_theta(g, theta)
    n = g.dim
    sol = _type7_system(g, phi, theta)
    if not sol.feasible:
        return FirstKindResult(False, None, None, False, None)
    X = tuple(sol.particular[:n])
    sol1 = _type7_system(g, phi, theta, fix_t=-1)
    fk = tuple(sol1.particular[:n]) if sol1.feasible else None
    return FirstKindResult(True, X, sol.particular[n], sol1.feasible, fk)


def solve_exact_type7(g: LieAlgebra, phi: AltForm, theta: AltForm) -> ExactnessResult:
    """Exactness restricted to primitives of the form sigma = i_X phi."""
    r = first_kind_solve(g, phi, theta)
    if not r.exact_type7:
        return ExactnessResult(False, None, 0)
    return ExactnessResult(True, interior(list(r.vector), phi), 0)


__all__ = [
    "CohomologyTable",
    "ExactnessResult",
    "FirstKindResult",
    "KindVerdict",
    "NotClosedError",
    "automorphism_algebra",
    "d_theta",
    "d_theta_matrix",
    "evaluate",
    "first_kind_solve",
    "kind",
    "lichnerowicz_cohomology",
    "solve_exact",
    "solve_exact_type7",
]
