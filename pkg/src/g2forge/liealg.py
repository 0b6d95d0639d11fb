"""Lie algebras given by structure equations (d e^1, ..., d e^n).

The convention is d e^k = -sum_{i<j} c^k_ij e^{ij} with [e_i, e_j] =
sum_k c^k_ij e_k, so that for left-invariant forms
d a(X, Y) = -a([X, Y]).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exterior import AltForm, DimensionMismatch, endo_action, index_basis, interior, wedge
from .scalars import (
    identity,
    inverse,
    is_zero,
    leading_minors,
    matmul,
    normalize,
    rank,
    solve_linear,
    transpose,
)


class JacobiError(ValueError):
    """Structure equations violate d^2 = 0.  ``index`` is the 1-based k with d(d e^k) != 0."""

    def __init__(self, index: int, residual: AltForm):
        self.index = index
        self.residual = residual
        super().__init__(f"Jacobi identity fails: d(d e^{index}) = {residual} != 0")


class NotADerivation(ValueError):
    pass


class MetricError(ValueError):
    pass


class LieAlgebra:
    """Finite-dimensional real Lie algebra stored through its dual differentials."""

    def __init__(self, differentials: Sequence[AltForm], name: str | None = None, check: bool = True):
        differentials = list(differentials)
        n = len(differentials)
        if not differentials:
            raise ValueError("a Lie algebra needs at least one basis element")
        for k, de in enumerate(differentials):
            if de.dim != n:
                raise DimensionMismatch(f"d e^{k + 1} lives in dimension {de.dim}, expected {n}")
            if de.degree != 2 and de:
                raise ValueError(f"d e^{k + 1} must be a 2-form")
        self.dim = n
        self.differentials = tuple(
            de if de.degree == 2 else AltForm.zero(n, 2) for de in differentials
        )
        self.name = name
        self._dcache: dict = {}
        if check:
            for k in range(n):
                res = self.d(self.differentials[k])
                if res:
                    raise JacobiError(k + 1, res)

    def __repr__(self):
        from .exterior import render

        body = ", ".join(render(de) for de in self.differentials)
        return f"LieAlgebra(({body}))" if not self.name else f"LieAlgebra[{self.name}](({body}))"

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.differentials == other.differentials

    __hash__ = None  # type: ignore[assignment]

    # -- Chevalley-Eilenberg differential ------------------------------------
    def _d_monomial(self, idx: tuple) -> AltForm:
        hit = self._dcache.get(idx)
        if hit is not None:
            return hit
        n = self.dim
        out = AltForm.zero(n, len(idx) + 1)
        for p, i in enumerate(idx):
            de = self.differentials[i]
            if not de:
                continue
            left = AltForm._raw(n, p, {idx[:p]: Fraction(1)})
            right = AltForm._raw(n, len(idx) - p - 1, {idx[p + 1:]: Fraction(1)})
            term = wedge(wedge(left, de), right)
            out = out + term if p % 2 == 0 else out - term
        self._dcache[idx] = out
        return out

    def d(self, g: AltForm) -> AltForm:
        if g.dim != self.dim:
            raise DimensionMismatch("form does not live on this algebra")
        out = AltForm.zero(self.dim, g.degree + 1)
        for idx, c in g.terms.items():
            dm = self._d_monomial(idx)
            if dm:
                out = out + dm * c
        return out

    def d_matrix(self, k: int) -> list[list]:
        """Matrix of d: Lambda^k -> Lambda^{k+1} in the lexicographic monomial bases."""
        src = index_basis(self.dim, k)
        dst = index_basis(self.dim, k + 1)
        cols = [self._d_monomial(I) for I in src]
        return [[col.terms.get(J, Fraction(0)) for col in cols] for J in dst]

    def lie_derivative(self, X: Sequence, g: AltForm) -> AltForm:
        """Cartan formula L_X = i_X d + d i_X."""
        if len(X) != self.dim:
            raise DimensionMismatch("vector does not live on this algebra")
        out = interior(X, self.d(g)) if g.degree < self.dim else AltForm.zero(self.dim, g.degree)
        if g.degree > 0:
            out = out + self.d(interior(X, g))
        return out

    # -- brackets ------------------------------------------------------------
    @cached_property
    def structure_constants(self) -> list:
        """c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k (0-based)."""
        n = self.dim
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k, de in enumerate(self.differentials):
            for (i, j), v in de.terms.items():
                c[i][j][k] = -v
                c[j][i][k] = v
        return c

    def bracket(self, X: Sequence, Y: Sequence) -> list:
        n = self.dim
        c = self.structure_constants
        out = [Fraction(0)] * n
        for i in range(n):
            if is_zero(X[i]):
                continue
            for j in range(n):
                if is_zero(Y[j]):
                    continue
                f = X[i] * Y[j]
                for k in range(n):
                    if c[i][j][k]:
                        out[k] = out[k] + f * c[i][j][k]
        return out

    def ad(self, i: int) -> list[list]:
        """Matrix of ad_{e_i}; column j holds [e_i, e_j]."""
        c = self.structure_constants
        n = self.dim
        return [[c[i][j][k] for j in range(n)] for k in range(n)]

    def ad_vector(self, X: Sequence) -> list[list]:
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for i, x in enumerate(X):
            if is_zero(x):
                continue
            A = self.ad(i)
            for r in range(n):
                for s in range(n):
                    if A[r][s]:
                        out[r][s] = out[r][s] + x * A[r][s]
        return out

    # -- derivations ---------------------------------------------------------
    def is_derivation(self, A: Sequence[Sequence]) -> bool:
        """Dual Leibniz test A*(d e^k) = d(A* e^k) for every k."""
        n = self.dim
        if len(A) != n or any(len(r) != n for r in A):
            raise DimensionMismatch("endomorphism does not match the algebra")
        for k in range(n):
            ek = AltForm._raw(n, 1, {(k,): Fraction(1)})
            if endo_action(A, self.differentials[k]) != self.d(endo_action(A, ek)):
                return False
        return True

    def derivation_constraints(self) -> list[list]:
        """Rows of the homogeneous linear system whose solutions (row-major A) are derivations."""
        n = self.dim
        rows = []
        blocks = []
        for a in range(n):
            for b in range(n):
                E = [[Fraction(0)] * n for _ in range(n)]
                E[a][b] = Fraction(1)
                blocks.append(
                    [endo_action(E, self.differentials[k]) - self.d(endo_action(E, AltForm._raw(n, 1, {(k,): Fraction(1)}))) for k in range(n)]
                )
        pairs = index_basis(n, 2)
        for k in range(n):
            for J in pairs:
                row = [blk[k].terms.get(J, Fraction(0)) for blk in blocks]
                if any(row):
                    rows.append(row)
        return rows

    # -- series and predicates -----------------------------------------------
    def _span_brackets(self, A: list, B: list) -> list:
        vecs = [self.bracket(a, b) for a in A for b in B]
        return _row_basis(vecs, self.dim)

    @cached_property
    def lower_central_series(self) -> list[int]:
        n = self.dim
        current = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        full = current
        dims = [n]
        while current:
            nxt = self._span_brackets(full, current)
            if len(nxt) == len(current):
                break
            dims.append(len(nxt))
            current = nxt
        return dims

    @cached_property
    def derived_series(self) -> list[int]:
        n = self.dim
        current = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        dims = [n]
        while current:
            nxt = self._span_brackets(current, current)
            if len(nxt) == len(current):
                break
            dims.append(len(nxt))
            current = nxt
        return dims

    @property
    def is_nilpotent(self) -> bool:
        return self.lower_central_series[-1] == 0

    @property
    def is_solvable(self) -> bool:
        return self.derived_series[-1] == 0

    @cached_property
    def ad_traces(self) -> list:
        return [sum((self.ad(i)[j][j] for j in range(self.dim)), Fraction(0)) for i in range(self.dim)]

    @property
    def is_unimodular(self) -> bool:
        return all(t == 0 for t in self.ad_traces)

    def predicates(self) -> dict:
        return {
            "nilpotent": self.is_nilpotent,
            "solvable": self.is_solvable,
            "unimodular": self.is_unimodular,
            "ad_traces": list(self.ad_traces),
        }


def _row_basis(vecs: list, n: int) -> list:
    rows = [list(v) for v in vecs if any(not is_zero(x) for x in v)]
    if not rows:
        return []
    from .scalars import _rref

    _rref(rows, n)
    return [r for r in rows if any(not is_zero(x) for x in r)]


def from_structure_constants(dim: int, differentials: Sequence[AltForm], name: str | None = None) -> LieAlgebra:
    if len(differentials) != dim:
        raise ValueError(f"expected {dim} differentials, got {len(differentials)}")
    return LieAlgebra(differentials, name=name)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([AltForm.zero(n, 2) for _ in range(n)], name=f"R{n}")


def change_basis(g: LieAlgebra, Q: Sequence[Sequence]) -> LieAlgebra:
    """The same algebra written in the basis whose vectors are the columns of ``Q``."""
    from .exterior import pullback

    Qinv = inverse(Q)
    n = g.dim
    new = []
    for k in range(n):
        form = AltForm.zero(n, 2)
        for l in range(n):
            if Qinv[k][l]:
                form = form + g.differentials[l] * Qinv[k][l]
        new.append(pullback(Q, form))
    return LieAlgebra(new)


# -- derivations and extensions ----------------------------------------------

@dataclass(frozen=True)
class Derivation:
    base: LieAlgebra
    map: tuple

    def __init__(self, base: LieAlgebra, matrix: Sequence[Sequence], check: bool = True):
        M = tuple(tuple(normalize(x) for x in row) for row in matrix)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "map", M)
        if check and not base.is_derivation(M):
            raise NotADerivation("endomorphism violates the Leibniz rule")

    @property
    def matrix(self) -> list[list]:
        return [list(r) for r in self.map]

    def __mul__(self, c):
        return Derivation(self.base, [[x * c for x in row] for row in self.map], check=False)

    __rmul__ = __mul__


def diagonal(entries: Sequence) -> list[list]:
    n = len(entries)
    return [[normalize(entries[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def endo_from_images(images: dict, n: int) -> list[list]:
    """Matrix from a dict {j: {i: coeff}} meaning D(e_j) = sum_i coeff e_i (0-based)."""
    M = [[Fraction(0)] * n for _ in range(n)]
    for j, img in images.items():
        for i, c in img.items():
            M[i][j] = normalize(c)
    return M


@dataclass(frozen=True)
class Extension:
    base: LieAlgebra
    derivation: Derivation
    total: LieAlgebra

    @property
    def eta_index(self) -> int:
        """1-based index of the extending coframe element."""
        return self.total.dim

    @property
    def eta(self) -> AltForm:
        n = self.total.dim
        return AltForm._raw(n, 1, {(n - 1,): Fraction(1)})

    def lift(self, g: AltForm) -> AltForm:
        """A form on the base viewed on the extension."""
        return AltForm(self.total.dim, g.degree, g.terms)


def rank_one_extension(h: LieAlgebra, D: Derivation | Sequence[Sequence], check: bool = True) -> Extension:
    """h x_D R: d e^k = d_h e^k + D* e^k ^ eta for k <= n, and d eta = 0.

    With ``check=False`` neither the Leibniz rule nor d^2 = 0 is enforced.
    """
    if not isinstance(D, Derivation):
        D = Derivation(h, D, check=check)
    elif check and D.base is not h and not h.is_derivation(D.map):
        raise NotADerivation("endomorphism violates the Leibniz rule")
    n = h.dim
    m = n + 1
    eta = AltForm._raw(m, 1, {(n,): Fraction(1)})
    diffs = []
    for k in range(n):
        base = AltForm(m, 2, h.differentials[k].terms)
        ek = AltForm._raw(n, 1, {(k,): Fraction(1)})
        Dek = AltForm(m, 1, endo_action(D.map, ek).terms)
        diffs.append(base + wedge(Dek, eta))
    diffs.append(AltForm.zero(m, 2))
    return Extension(h, D, LieAlgebra(diffs, check=check))


def extension_d_formula(ext: Extension, g: AltForm) -> AltForm:
    """d_h g + (-1)^{k+1} D*g ^ eta for a k-form g on the base, lifted to the extension."""
    k = g.degree
    dh = ext.lift(ext.base.d(g))
    Dg = ext.lift(endo_action(ext.derivation.map, g))
    term = wedge(Dg, ext.eta)
    return dh + term if k % 2 == 1 else dh - term


# -- Riemannian geometry -----------------------------------------------------

@dataclass(frozen=True)
class MetricData:
    algebra: LieAlgebra
    gram: tuple

    def __init__(self, algebra: LieAlgebra, gram: Sequence[Sequence]):
        G = tuple(tuple(normalize(x) for x in row) for row in gram)
        n = algebra.dim
        if len(G) != n or any(len(r) != n for r in G):
            raise DimensionMismatch("Gram matrix does not match the algebra")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise MetricError("Gram matrix is not symmetric")
        if not all(m > 0 for m in leading_minors(G)):
            raise MetricError("Gram matrix is not positive definite")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "gram", G)

    @classmethod
    def euclidean(cls, algebra: LieAlgebra) -> "MetricData":
        return cls(algebra, identity(algebra.dim))

    def inner(self, X, Y):
        n = len(X)
        return sum((X[i] * self.gram[i][j] * Y[j] for i in range(n) for j in range(n) if X[i] and Y[j]), Fraction(0))


def levi_civita(g: LieAlgebra, m: MetricData) -> list:
    """Gamma[i][j] = coordinates of nabla_{e_i} e_j via the Koszul formula."""
    n = g.dim
    c = g.structure_constants
    G = [list(r) for r in m.gram]
    Ginv = inverse(G)
    # <[e_a, e_b], e_z>
    br = [[[sum((c[a][b][k] * G[k][z] for k in range(n)), Fraction(0)) for z in range(n)] for b in range(n)] for a in range(n)]
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            low = [(br[i][j][z] - br[j][z][i] + br[z][i][j]) / 2 for z in range(n)]
            row.append([sum((Ginv[l][z] * low[z] for z in range(n)), Fraction(0)) for l in range(n)])
        gamma.append(row)
    return gamma


def _nabla(gamma, i: int, V: list) -> list:
    n = len(V)
    out = [Fraction(0)] * n
    for j, v in enumerate(V):
        if v:
            for l in range(n):
                out[l] += v * gamma[i][j][l]
    return out


def riemann(g: LieAlgebra, m: MetricData) -> list:
    """R[i][j][k] = R(e_i, e_j) e_k with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]."""
    n = g.dim
    gamma = levi_civita(g, m)
    c = g.structure_constants
    R = []
    for i in range(n):
        Ri = []
        for j in range(n):
            Rij = []
            for k in range(n):
                a = _nabla(gamma, i, gamma[j][k])
                b = _nabla(gamma, j, gamma[i][k])
                v = [a[l] - b[l] for l in range(n)]
                for q in range(n):
                    if c[i][j][q]:
                        t = gamma[q][k]
                        for l in range(n):
                            v[l] -= c[i][j][q] * t[l]
                Rij.append(v)
            Ri.append(Rij)
        R.append(Ri)
    return R


def ricci_operator(g: LieAlgebra, m: MetricData) -> list[list]:
    """Matrix of the Ricci endomorphism; column j is Ric(e_j)."""
    n = g.dim
    R = riemann(g, m)
    # Ric(Y, Z) = tr(X -> R(X, Y) Z)
    ric = [[sum((R[x][y][z][x] for x in range(n)), Fraction(0)) for z in range(n)] for y in range(n)]
    Ginv = inverse([list(r) for r in m.gram])
    return matmul(Ginv, ric)


def scalar_curvature(g: LieAlgebra, m: MetricData):
    """Scalar curvature from brackets alone:

    s = -1/4 sum |[e_i, e_j]|^2 - 1/2 sum B(e_i, e_i) - |H|^2

    over an orthonormal frame, written with the inverse Gram matrix; B is
    the Killing form and <H, X> = tr ad_X.
    """
    n = g.dim
    G = [list(r) for r in m.gram]
    Ginv = inverse(G)
    c = g.structure_constants
    ip = lambda u, v: sum((u[a] * G[a][b] * v[b] for a in range(n) for b in range(n) if u[a] and v[b]), Fraction(0))
    s1 = Fraction(0)
    for a in range(n):
        for b in range(n):
            for cc in range(n):
                for dd in range(n):
                    w = Ginv[a][cc] * Ginv[b][dd]
                    if w:
                        s1 += w * ip(c[a][b], c[cc][dd])
    ads = [g.ad(i) for i in range(n)]
    killing = [[sum((matmul(ads[a], ads[b])[k][k] for k in range(n)), Fraction(0)) for b in range(n)] for a in range(n)]
    s2 = sum((Ginv[a][b] * killing[a][b] for a in range(n) for b in range(n)), Fraction(0))
    tr = g.ad_traces
    s3 = sum((Ginv[a][b] * tr[a] * tr[b] for a in range(n) for b in range(n)), Fraction(0))
    return -s1 / 4 - s2 / 2 - s3


@dataclass(frozen=True)
class NilsolitonSolution:
    lam: Fraction
    derivation: tuple
    free_directions: tuple = ()

    def admits(self, lam) -> bool:
        """Whether ``lam`` occurs in the affine solution set."""
        if lam == self.lam:
            return True
        return any(v[0] != 0 for v in self.free_directions)


def nilsoliton_check(h: LieAlgebra, m: MetricData) -> NilsolitonSolution | None:
    """Solve Ric = lam Id + D with D a derivation; None when no such pair exists.

    Unknowns are ordered (lam, D row-major).
    """
    n = h.dim
    ric = ricci_operator(h, m)
    N = n * n + 1
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * N
            row[0] = Fraction(int(i == j))
            row[1 + i * n + j] = Fraction(1)
            rows.append(row)
            rhs.append(ric[i][j])
    for drow in h.derivation_constraints():
        rows.append([Fraction(0)] + drow)
        rhs.append(Fraction(0))
    sol = solve_linear(rows, rhs)
    if not sol.feasible:
        return None
    x = sol.particular
    D = tuple(tuple(x[1 + i * n + j] for j in range(n)) for i in range(n))
    return NilsolitonSolution(x[0], D, sol.nullspace)


def matrices_equal(A, B) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(is_zero(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def is_metric_symmetric(op: Sequence[Sequence], m: MetricData) -> bool:
    """g(op X, Y) = g(X, op Y), i.e. G op is symmetric."""
    G = [list(r) for r in m.gram]
    M = matmul(G, [list(r) for r in op])
    return matrices_equal(M, transpose(M))


__all__ = [
    "Derivation",
    "Extension",
    "JacobiError",
    "LieAlgebra",
    "MetricData",
    "MetricError",
    "NilsolitonSolution",
    "NotADerivation",
    "abelian",
    "change_basis",
    "diagonal",
    "endo_from_images",
    "extension_d_formula",
    "from_structure_constants",
    "is_metric_symmetric",
    "levi_civita",
    "matrices_equal",
    "nilsoliton_check",
    "rank_one_extension",
    "ricci_operator",
    "riemann",
    "scalar_curvature",
]
