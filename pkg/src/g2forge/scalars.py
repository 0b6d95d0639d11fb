"""Coefficient rings and exact linear algebra.

Three coefficient rings are used throughout the package:

* rationals, represented by :class:`fractions.Fraction` (ints are accepted
  and promoted),
* sparse multivariate polynomials over the rationals (:class:`Polynomial`),
* IEEE doubles (plain ``float``), used only when a metric normalisation is
  irrational.

Rationals promote to either of the other two rings.  Combining a
polynomial with a float raises :class:`IncompatibleRingError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

MAX_DEGREE = 8
FLOAT_TOL = 1e-9


class IncompatibleRingError(TypeError):
    """Raised when a polynomial meets a float."""


class DegreeBoundError(ArithmeticError):
    """Raised when a polynomial product exceeds the configured degree bound."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not a rational: {x!r}")


class Polynomial:
    """Sparse polynomial with rational coefficients.

    ``variables`` is a sorted tuple of names; ``terms`` maps exponent tuples
    (aligned with ``variables``) to non-zero Fractions.  Operands with
    different variable sets are aligned on the union of their names.
    """

    __slots__ = ("variables", "terms", "max_degree")

    def __init__(self, variables: Iterable[str] = (), terms=None, max_degree: int = MAX_DEGREE):
        variables = tuple(variables)
        if list(variables) != sorted(set(variables)):
            raise ValueError("variables must be distinct and sorted by name")
        self.variables = variables
        self.max_degree = max_degree
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise ValueError("exponent vector does not match variable count")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        if clean and max(sum(e) for e in clean) > max_degree:
            raise DegreeBoundError(f"total degree exceeds {max_degree}")
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms, max_degree=MAX_DEGREE):
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p.max_degree = max_degree
        return p

    @classmethod
    def var(cls, name: str, max_degree: int = MAX_DEGREE) -> "Polynomial":
        return cls._raw((name,), {(1,): Fraction(1)}, max_degree)

    @classmethod
    def gens(cls, names: Iterable[str], max_degree: int = MAX_DEGREE) -> list["Polynomial"]:
        """Generators sharing one variable tuple, returned in the order of ``names``."""
        names = list(names)
        variables = tuple(sorted(set(names)))
        pos = {v: i for i, v in enumerate(variables)}
        out = []
        for name in names:
            exps = [0] * len(variables)
            exps[pos[name]] = 1
            out.append(cls._raw(variables, {tuple(exps): Fraction(1)}, max_degree))
        return out

    @classmethod
    def constant(cls, c, variables: tuple = (), max_degree: int = MAX_DEGREE) -> "Polynomial":
        c = _as_fraction(c)
        terms = {(0,) * len(variables): c} if c else {}
        return cls._raw(tuple(variables), terms, max_degree)

    # -- structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def _reindexed(self, variables: tuple) -> dict:
        if variables == self.variables:
            return self.terms
        pos = [variables.index(v) for v in self.variables]
        out = {}
        n = len(variables)
        for exps, c in self.terms.items():
            new = [0] * n
            for p, e in zip(pos, exps):
                new[p] = e
            out[tuple(new)] = c
        return out

    def _coerce(self, other):
        """Return (variables, self_terms, other_terms) on a common variable tuple."""
        if isinstance(other, Polynomial):
            if other.variables == self.variables:
                return self.variables, self.terms, other.terms
            variables = tuple(sorted(set(self.variables) | set(other.variables)))
            return variables, self._reindexed(variables), other._reindexed(variables)
        if isinstance(other, float):
            raise IncompatibleRingError("cannot combine a polynomial with a float")
        c = _as_fraction(other)
        return self.variables, self.terms, ({(0,) * len(self.variables): c} if c else {})

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        try:
            variables, a, b = self._coerce(other)
        except TypeError as exc:
            if isinstance(exc, IncompatibleRingError):
                raise
            return NotImplemented
        out = dict(a)
        for exps, c in b.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Polynomial._raw(variables, out, self.max_degree)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()}, self.max_degree)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, float):
                raise IncompatibleRingError("cannot combine a polynomial with a float")
            try:
                c = _as_fraction(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial._raw(self.variables, {}, self.max_degree)
            return Polynomial._raw(self.variables, {e: v * c for e, v in self.terms.items()}, self.max_degree)
        variables, a, b = self._coerce(other)
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        out = {e: c for e, c in out.items() if c}
        if out and max(map(sum, out)) > self.max_degree:
            raise DegreeBoundError(f"total degree exceeds {self.max_degree}")
        return Polynomial._raw(variables, out, self.max_degree)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Polynomial, float)):
            if isinstance(other, float):
                raise IncompatibleRingError("cannot combine a polynomial with a float")
            if other.is_constant() and other:
                return self * (1 / other.constant_value())
            raise ZeroDivisionError("polynomial division is only defined by non-zero constants")
        c = _as_fraction(other)
        return self * (1 / c)

    def __pow__(self, n: int):
        out = Polynomial.constant(1, self.variables, self.max_degree)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, float):
            return False
        try:
            _, a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return a == b

    __hash__ = None  # type: ignore[assignment]

    # -- evaluation / display ------------------------------------------------
    def evaluate(self, values: dict):
        total = 0
        for exps, c in self.terms.items():
            term = c
            for name, e in zip(self.variables, exps):
                if e:
                    term = term * values[name] ** e
            total = total + term
        return total

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))
        parts = []
        for exps, c in items:
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.variables, exps) if e
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


# -- ring operations ---------------------------------------------------------

def ring_of(x) -> str:
    if isinstance(x, Polynomial):
        return "polynomial"
    if isinstance(x, float):
        return "float"
    if isinstance(x, (int, Fraction)) or isinstance(x, _RationalABC):
        return "rational"
    raise TypeError(f"unsupported scalar {x!r}")


def is_zero(x) -> bool:
    if isinstance(x, Polynomial):
        return not x.terms
    return x == 0


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def exact_eq(a, b) -> bool:
    if ring_of(a) == "float" or ring_of(b) == "float":
        if "polynomial" in (ring_of(a), ring_of(b)):
            raise IncompatibleRingError("cannot compare a polynomial with a float")
    return is_zero(a - b)


def normalize(x):
    """Canonical representative: ints become Fractions, constant polynomials stay polynomials."""
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def rational_root(q: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a non-negative rational, or None when irrational."""
    q = _as_fraction(q)
    num = integer_root(q.numerator, k)
    den = integer_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


# -- linear algebra ----------------------------------------------------------

Matrix = list


def _is_float_system(rows) -> bool:
    return any(isinstance(x, float) for row in rows for x in row)


def _pivot_zero(x, tol) -> bool:
    if tol is None:
        return is_zero(x)
    return abs(x) <= tol


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set of ``A x = b``.

    When ``feasible`` is False, ``particular`` is None and
    ``inconsistent_row`` indexes an equation of the reduced system reading
    ``0 = nonzero``.
    """

    feasible: bool
    particular: tuple | None
    nullspace: tuple = ()
    rank: int = 0
    pivots: tuple = ()
    inconsistent_row: int | None = None
    residual: tuple = field(default=(), compare=False)

    def __bool__(self):
        return self.feasible


def _rref(rows, ncols, rhs=None, tol=None):
    """In-place Gauss-Jordan elimination.

    Exact mode pivots on the first non-zero entry scanning columns left to
    right and rows top to bottom.  Float mode (``tol`` set) takes the
    largest-magnitude entry of the column, ties broken by row index.
    """
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        if tol is None:
            p = next((i for i in range(r, m) if not is_zero(rows[i][c])), None)
        else:
            best = max(range(r, m), key=lambda i: (abs(rows[i][c]), -i))
            p = best if abs(rows[best][c]) > tol else None
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            if rhs is not None:
                rhs[r], rhs[p] = rhs[p], rhs[r]
        inv = 1 / rows[r][c]
        row = rows[r]
        for j in range(c, ncols):
            if not is_zero(row[j]):
                row[j] = row[j] * inv
        if rhs is not None and not is_zero(rhs[r]):
            rhs[r] = rhs[r] * inv
        for i in range(m):
            if i == r:
                continue
            f = rows[i][c]
            if is_zero(f):
                continue
            target = rows[i]
            for j in range(c, ncols):
                if not is_zero(row[j]):
                    target[j] = target[j] - f * row[j]
            if tol is not None:
                target[c] = 0.0
            if rhs is not None and not is_zero(rhs[r]):
                rhs[i] = rhs[i] - f * rhs[r]
        pivots.append(c)
        r += 1
    return pivots


def _prepare(A):
    rows = [[normalize(x) for x in row] for row in A]
    for row in rows:
        for x in row:
            if isinstance(x, Polynomial):
                if not x.is_constant():
                    raise IncompatibleRingError(
                        "coefficient matrix must be rational; polynomial data belongs on the right-hand side"
                    )
    rows = [[x.constant_value() if isinstance(x, Polynomial) else x for x in row] for row in rows]
    return rows


def solve_linear(A: Sequence[Sequence], b: Sequence, tol: float | None = None) -> LinearSolution:
    """Full solution set of ``A x = b``.

    ``A`` must be rational (or float); ``b`` may carry polynomial entries, in
    which case the unknowns are solved as polynomials in those parameters.
    Infeasible systems return a ``LinearSolution`` with ``feasible=False``.
    """
    rows = _prepare(A)
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    if len(b) != m:
        raise ValueError("right-hand side length does not match row count")
    rhs = [normalize(x) for x in b]
    if tol is None and (_is_float_system(rows) or any(isinstance(x, float) for x in rhs)):
        tol = FLOAT_TOL
    pivots = _rref(rows, ncols, rhs, tol)
    rank = len(pivots)
    for i in range(rank, m):
        if not _pivot_zero(rhs[i], tol):
            return LinearSolution(False, None, (), rank, tuple(pivots), i)
    zero = 0.0 if tol is not None else Fraction(0)
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = rhs[r]
    pivset = set(pivots)
    null = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = 1.0 if tol is not None else Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        null.append(tuple(v))
    return LinearSolution(True, tuple(x), tuple(null), rank, tuple(pivots))


def nullspace(A: Sequence[Sequence], ncols: int | None = None, tol: float | None = None) -> list[tuple]:
    if not A:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    return list(solve_linear(A, [0] * len(A), tol).nullspace)


def rank(A: Sequence[Sequence], tol: float | None = None) -> int:
    if not A or not A[0]:
        return 0
    rows = _prepare(A)
    if tol is None and _is_float_system(rows):
        tol = FLOAT_TOL
    return len(_rref(rows, len(rows[0]), None, tol))


def det(A: Sequence[Sequence]):
    """Determinant by elimination; exact on rationals and polynomials."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    rows = [[normalize(x) for x in row] for row in A]
    if any(isinstance(x, Polynomial) for row in rows for x in row):
        return _det_expand(rows)
    floaty = _is_float_system(rows)
    sign = 1
    result = 1.0 if floaty else Fraction(1)
    for c in range(n):
        if floaty:
            p = max(range(c, n), key=lambda i: abs(rows[i][c]))
            if rows[p][c] == 0:
                return 0.0
        else:
            p = next((i for i in range(c, n) if rows[i][c] != 0), None)
            if p is None:
                return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        piv = rows[c][c]
        result *= piv
        for i in range(c + 1, n):
            f = rows[i][c] / piv
            if f:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return sign * result


def _det_expand(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if is_zero(rows[0][j]):
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det_expand(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def inverse(A: Sequence[Sequence]) -> list[list]:
    n = len(A)
    rows = _prepare(A)
    floaty = _is_float_system(rows)
    one, zero = (1.0, 0.0) if floaty else (Fraction(1), Fraction(0))
    aug = [row + [one if i == j else zero for j in range(n)] for i, row in enumerate(rows)]
    pivots = _rref(aug, 2 * n, None, FLOAT_TOL if floaty else None)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in aug]


def identity(n: int, one=Fraction(1)) -> list[list]:
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    inner = len(B)
    return [
        [sum((A[i][k] * B[k][j] for k in range(inner)), Fraction(0)) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def matvec(A, v) -> list:
    return [sum((A[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(A))]


def transpose(A) -> list[list]:
    return [list(col) for col in zip(*A)]


def leading_minors(A) -> list:
    return [det([row[:k] for row in A[:k]]) for k in range(1, len(A) + 1)]


def definiteness(A, tol: float = FLOAT_TOL) -> int:
    """+1 for positive definite, -1 for negative definite, 0 otherwise.

    Decided from the signs of the leading principal minors; exact on
    rationals, with margin ``tol`` on floats.
    """
    minors = leading_minors(A)
    floaty = _is_float_system(A)

    def pos(x):
        return x > tol if floaty else x > 0

    if all(pos(m) for m in minors):
        return 1
    if all(pos(m if k % 2 == 0 else -m) for k, m in enumerate(minors, start=1)):
        return -1
    return 0
