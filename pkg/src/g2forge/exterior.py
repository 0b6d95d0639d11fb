"""Sparse alternating forms on a real vector space of dimension at most 9.

A k-form is stored as a map from strictly increasing 0-based index tuples
to coefficients.  Rendering and parsing use the 1-based digit-string
notation ``e127`` for e^1 ^ e^2 ^ e^7.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .scalars import det, inverse, is_zero, normalize

MAX_DIM = 9


class DimensionMismatch(ValueError):
    pass


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the permutation sorting the concatenation of two disjoint increasing tuples."""
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return -1 if inversions & 1 else 1


def sort_with_sign(indices: Sequence[int]) -> tuple[int, tuple] | tuple[int, None]:
    """Sort indices, returning (sign, sorted) or (0, None) on a repeated index."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class AltForm:
    """Alternating ``degree``-form on an ``dim``-dimensional space."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[tuple, object] | None = None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"ambient dimension must lie in 1..{MAX_DIM}")
        if degree < 0:
            raise ValueError("degree must be non-negative")
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"multi-index {idx} has wrong length for degree {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"multi-index {idx} out of range")
            sign, key = sort_with_sign(idx)
            if not sign:
                continue
            c = normalize(c)
            prev = clean.get(key)
            val = sign * c if prev is None else prev + sign * c
            if is_zero(val):
                clean.pop(key, None)
            else:
                clean[key] = val
        self.dim = dim
        self.degree = degree
        self.terms = clean

    @classmethod
    def _raw(cls, dim, degree, terms):
        f = object.__new__(cls)
        f.dim = dim
        f.degree = degree
        f.terms = terms
        return f

    @classmethod
    def zero(cls, dim: int, degree: int) -> "AltForm":
        return cls._raw(dim, degree, {})

    @classmethod
    def scalar(cls, dim: int, c) -> "AltForm":
        c = normalize(c)
        return cls._raw(dim, 0, {} if is_zero(c) else {(): c})

    @classmethod
    def one_form(cls, coords: Sequence) -> "AltForm":
        return cls(len(coords), 1, {(i,): c for i, c in enumerate(coords)})

    @classmethod
    def from_coords(cls, dim: int, degree: int, coords: Sequence) -> "AltForm":
        terms = {}
        for idx, c in zip(combinations(range(dim), degree), coords):
            c = normalize(c)
            if not is_zero(c):
                terms[idx] = c
        return cls._raw(dim, degree, terms)

    # -- queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, indices: Sequence[int]):
        sign, key = sort_with_sign(indices)
        if not sign:
            return Fraction(0)
        return sign * self.terms.get(key, Fraction(0))

    def coords(self) -> list:
        return [self.terms.get(idx, Fraction(0)) for idx in combinations(range(self.dim), self.degree)]

    def top_coefficient(self):
        """Coefficient of e^{1...n}; zero unless this is a top-degree form."""
        if self.degree != self.dim:
            return Fraction(0)
        return self.terms.get(tuple(range(self.dim)), Fraction(0))

    def map_coefficients(self, fn) -> "AltForm":
        return AltForm(self.dim, self.degree, {k: fn(v) for k, v in self.terms.items()})

    def restrict(self, keep: Iterable[int]) -> "AltForm":
        """Drop every term involving an index outside ``keep`` (same ambient space)."""
        keep = set(keep)
        return AltForm._raw(
            self.dim, self.degree, {k: v for k, v in self.terms.items() if keep.issuperset(k)}
        )

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "AltForm"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"ambient dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        if not isinstance(other, AltForm):
            if is_zero(other):
                return self
            return NotImplemented
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out[k] + v if k in out else v
            if is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return AltForm._raw(self.dim, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return AltForm._raw(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, AltForm):
            return NotImplemented
        c = normalize(c)
        if is_zero(c):
            return AltForm.zero(self.dim, self.degree)
        out = {}
        for k, v in self.terms.items():
            p = v * c
            if not is_zero(p):
                out[k] = p
        return AltForm._raw(self.dim, self.degree, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / normalize(c))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, AltForm):
            if self.dim != other.dim or self.degree != other.degree:
                return False
            if self.terms.keys() != other.terms.keys():
                return False
            return all(is_zero(v - other.terms[k]) for k, v in self.terms.items())
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"AltForm({self.dim}, {self.degree}, {render(self)!r})"

    def __str__(self):
        return render(self)


# -- constructors ------------------------------------------------------------

def e(dim: int, label: str | int, coeff=1) -> AltForm:
    """Monomial c * e^{label} from a 1-based digit label, e.g. ``e(7, "127")``."""
    digits = [int(ch) - 1 for ch in str(label)]
    return AltForm(dim, len(digits), {tuple(digits): coeff})


def basis_vector(dim: int, i: int, one=Fraction(1)) -> list:
    """Coordinates of the 0-based basis vector e_i."""
    v = [one * 0] * dim
    v[i] = one
    return v


def subspace_basis(n: int, k: int) -> list[AltForm]:
    """Monomial basis of the k-forms on an n-space, lexicographically ordered."""
    if not 0 <= k <= n:
        raise ValueError("degree out of range")
    return [AltForm._raw(n, k, {idx: Fraction(1)}) for idx in combinations(range(n), k)]


@lru_cache(maxsize=None)
def index_basis(n: int, k: int) -> tuple:
    return tuple(combinations(range(n), k))


# -- products ----------------------------------------------------------------

def wedge(a: AltForm, b: AltForm) -> AltForm:
    a._check(b)
    deg = a.degree + b.degree
    if deg > a.dim:
        return AltForm.zero(a.dim, deg)
    out: dict = {}
    for I, x in a.terms.items():
        sI = set(I)
        for J, y in b.terms.items():
            if sI.intersection(J):
                continue
            key = tuple(sorted(I + J))
            p = x * y
            if _merge_sign(I, J) < 0:
                p = -p
            if key in out:
                s = out[key] + p
                if is_zero(s):
                    del out[key]
                else:
                    out[key] = s
            elif not is_zero(p):
                out[key] = p
    return AltForm._raw(a.dim, deg, out)


def wedge_all(forms: Iterable[AltForm]) -> AltForm:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def interior(X: Sequence, a: AltForm) -> AltForm:
    """Contraction of ``a`` with the vector of coordinates ``X``."""
    if len(X) != a.dim:
        raise DimensionMismatch("vector and form live in different dimensions")
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    out: dict = {}
    for I, c in a.terms.items():
        for p, i in enumerate(I):
            x = X[i]
            if is_zero(x):
                continue
            key = I[:p] + I[p + 1:]
            term = c * x
            if p & 1:
                term = -term
            s = out[key] + term if key in out else term
            if is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return AltForm._raw(a.dim, a.degree - 1, out)


def endo_action(A: Sequence[Sequence], g: AltForm) -> AltForm:
    """Derivation action A*g(X_1..X_k) = sum_i g(X_1, .., A X_i, .., X_k).

    ``A`` is a square matrix whose column j is the image of e_j, so that
    A* e^i = sum_j A[i][j] e^j.
    """
    if len(A) != g.dim:
        raise DimensionMismatch("endomorphism and form live in different dimensions")
    out: dict = {}
    for I, c in g.terms.items():
        for p, i in enumerate(I):
            row = A[i]
            rest = I[:p] + I[p + 1:]
            for j, a in enumerate(row):
                if is_zero(a) or (j != i and j in rest):
                    continue
                sign, key = sort_with_sign(I[:p] + (j,) + I[p + 1:])
                term = c * a
                if sign < 0:
                    term = -term
                s = out[key] + term if key in out else term
                if is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
    return AltForm._raw(g.dim, g.degree, out)


def pullback(P: Sequence[Sequence], a: AltForm) -> AltForm:
    """Pull back along the linear map with matrix ``P`` (target dim x source dim).

    Column j of ``P`` is the image of the j-th source basis vector, so
    P^* e^k = sum_j P[k][j] f^j.
    """
    if len(P) != a.dim:
        raise DimensionMismatch("map target does not match the form")
    m = len(P[0])
    images = [AltForm(m, 1, {(j,): P[k][j] for j in range(m)}) for k in range(a.dim)]
    total = AltForm.zero(m, a.degree)
    for I, c in a.terms.items():
        term = AltForm.scalar(m, c)
        for i in I:
            term = wedge(term, images[i])
        total = total + term
    return total


# -- metric data -------------------------------------------------------------

def _is_identity(M) -> bool:
    n = len(M)
    return all(M[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


class Hodge:
    """Hodge star for a fixed metric and volume form ``sign * scale * e^{1..n}``.

    ``e^K ^ *b = <e^K, b> dV`` determines the coefficient of e^{K^c} in *b;
    the induced inner product on k-forms is the k x k minor of the inverse
    metric.
    """

    def __init__(self, metric: Sequence[Sequence], volume_scale=1, orientation_sign: int = 1):
        self.n = len(metric)
        self.metric = [list(r) for r in metric]
        if not _is_identity(self.metric):
            self.inv = inverse(self.metric)
            self.euclidean = False
        else:
            self.inv = self.metric
            self.euclidean = True
        self.volume_scale = normalize(volume_scale)
        self.orientation_sign = orientation_sign
        self._minors: dict = {}

    def gram(self, k: int) -> dict:
        """Inner products <e^K, e^L> on k-forms, keyed by (K, L), non-zero entries only."""
        if k not in self._minors:
            table = {}
            basis = index_basis(self.n, k)
            if self.euclidean:
                for K in basis:
                    table.setdefault(K, {})[K] = Fraction(1)
            else:
                for K in basis:
                    row = {}
                    for L in basis:
                        v = det([[self.inv[i][j] for j in L] for i in K]) if k else Fraction(1)
                        if not is_zero(v):
                            row[L] = v
                    table[K] = row
            self._minors[k] = table
        return self._minors[k]

    def inner(self, a: AltForm, b: AltForm):
        table = self.gram(a.degree)
        total = Fraction(0)
        for K, x in a.terms.items():
            row = table.get(K, {})
            for L, y in b.terms.items():
                g = row.get(L)
                if g is not None:
                    total = total + g * x * y
        return total

    def volume(self) -> AltForm:
        return AltForm(self.n, self.n, {tuple(range(self.n)): self.orientation_sign * self.volume_scale})

    def __call__(self, b: AltForm) -> AltForm:
        if b.dim != self.n:
            raise DimensionMismatch("form does not match metric dimension")
        k = b.degree
        table = self.gram(k)
        full = set(range(self.n))
        vol = self.orientation_sign * self.volume_scale
        out: dict = {}
        for K in index_basis(self.n, k):
            row = table.get(K, {})
            val = Fraction(0)
            for L, y in b.terms.items():
                g = row.get(L)
                if g is not None:
                    val = val + g * y
            if is_zero(val):
                continue
            comp = tuple(sorted(full - set(K)))
            val = val * vol
            if _merge_sign(K, comp) < 0:
                val = -val
            out[comp] = val
        return AltForm._raw(self.n, self.n - k, out)


def hodge_star(a: AltForm, metric, volume_scale=1, orientation_sign: int = 1) -> AltForm:
    return Hodge(metric, volume_scale, orientation_sign)(a)


# -- rendering ---------------------------------------------------------------

def _fmt_coeff(c) -> str:
    from .scalars import Polynomial

    if isinstance(c, Polynomial):
        return f"({c})"
    if isinstance(c, float):
        s = f"{c:.12g}"
        return f"({s})" if "e" in s or "inf" in s or "nan" in s else s
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_monomial(idx: tuple) -> str:
    return "e" + "".join(str(i + 1) for i in idx) if idx else "1"


def render(a: AltForm) -> str:
    """Signed sum in the notation ``1/2e17+e23-e24``; the zero form renders as ``0``."""
    from .scalars import Polynomial

    if not a.terms:
        return "0"
    parts = []
    for idx in sorted(a.terms):
        c = a.terms[idx]
        mono = render_monomial(idx)
        if isinstance(c, Polynomial):
            body = f"({c})" + ("" if not idx else mono)
            parts.append(("+", body))
            continue
        neg = c < 0
        mag = -c if neg else c
        if mag == 1 and idx:
            body = mono
        else:
            body = _fmt_coeff(mag) + (mono if idx else "")
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def top_pairing(a: AltForm, b: AltForm):
    """Coefficient of e^{1..n} in a ^ b, without building the full product."""
    a._check(b)
    n = a.dim
    if a.degree + b.degree != n:
        return Fraction(0)
    full = frozenset(range(n))
    total = Fraction(0)
    for I, x in a.terms.items():
        J = tuple(sorted(full.difference(I)))
        y = b.terms.get(J)
        if y is None:
            continue
        p = x * y
        total = total - p if _merge_sign(I, J) < 0 else total + p
    return total
