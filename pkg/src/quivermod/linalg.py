"""Exact linear algebra over the rationals and prime fields.

Scalars are plain Python values: :class:`fractions.Fraction` over ``Q`` and
``int`` residues in ``range(p)`` over ``F_p``.  A field object coerces and
reduces them, so matrix code only ever uses ``+ - *`` followed by
``field(...)`` plus ``field.inv`` for division.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd, isqrt, lcm
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, QuivermodError

__all__ = [
    "Field", "Rationals", "PrimeField", "QQ", "GF", "field_from_name",
    "Matrix", "Subspace", "BinaryForm",
    "rank", "kernel_basis", "image_basis", "char_poly", "rational_eigenvalues",
    "binary_form_gcd", "subspace_intersect", "subspace_sum", "preimage",
    "enumerate_subspaces", "count_subspaces", "gaussian_binomial",
    "rational_roots", "poly_gcd", "random_matrix", "random_invertible",
]


# ---------------------------------------------------------------- fields


class Field:
    characteristic: int = 0
    finite: bool = False

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def div(self, a, b):
        return self(a * self.inv(b))

    def parse(self, text):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(Field):
    characteristic = 0
    finite = False

    def __call__(self, x):
        if type(x) is Fraction:
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, float):
            raise TypeError("floating point scalars are not accepted; use exact values")
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def parse(self, text):
        text = str(text).strip()
        if "mod" in text:
            raise QuivermodError(f"prime-field scalar {text!r} in a rational document")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise QuivermodError(f"cannot parse rational scalar {text!r}") from exc

    def format(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return "QQ"

    @property
    def name(self) -> str:
        return "Q"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and 2 <= self.p < 2**31 and _is_prime(self.p)):
            raise QuivermodError(f"{self.p!r} is not a prime below 2^31")

    @property
    def characteristic(self):
        return self.p

    finite = True

    def __call__(self, x):
        if type(x) is int:
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, float):
            raise TypeError("floating point scalars are not accepted; use exact values")
        return int(x) % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def parse(self, text):
        text = str(text).strip()
        if "mod" in text:
            value, _, modulus = text.partition("mod")
            if int(modulus) != self.p:
                raise QuivermodError(f"scalar {text!r} is not in F_{self.p}")
            text = value
        try:
            return self(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise QuivermodError(f"cannot parse F_{self.p} scalar {text!r}") from exc

    def format(self, x) -> str:
        return f"{x % self.p} mod {self.p}"

    def elements(self) -> range:
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def name(self) -> str:
        return f"F{self.p}"


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name) -> Field:
    """Parse ``"Q"``, ``"rationals"``, ``"F7"``, ``"GF(7)"`` or ``7``."""
    if isinstance(name, int) and not isinstance(name, bool):
        return GF(name)
    text = str(name).strip()
    if text.lower() in {"q", "qq", "rationals", "rational"}:
        return QQ
    for prefix in ("GF(", "gf(", "F_", "F", "f"):
        if text.startswith(prefix):
            digits = text[len(prefix):].rstrip(")")
            if digits.isdigit():
                return GF(int(digits))
    raise QuivermodError(f"unknown field {name!r}")


# ---------------------------------------------------------------- matrices


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, data: Iterable[Iterable] = (), rows: int | None = None,
                 cols: int | None = None):
        entries = tuple(tuple(field(x) for x in row) for row in data)
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if len(entries) != rows:
            if entries or rows and cols:
                raise DimensionMismatch(f"expected {rows} rows, got {len(entries)}")
            entries = tuple(() for _ in range(rows))
        for r in entries:
            if len(r) != cols:
                raise DimensionMismatch(f"row length {len(r)} does not match {cols} columns")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def _raw(cls, field, entries, rows, cols):
        m = cls.__new__(cls)
        m.field, m.entries, m.rows, m.cols = field, entries, rows, cols
        return m

    # constructors
    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls._raw(field, tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def scalar(cls, field, n, c):
        c = field(c)
        z = field.zero
        return cls._raw(field, tuple(tuple(c if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int | None = None):
        columns = list(columns)
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls(field, [[col[i] for col in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def diag(cls, field, values):
        values = list(values)
        n = len(values)
        return cls(field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    # basic protocol
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x).replace(" mod ", "%") for x in r)
                         for r in self.entries)
        return f"Matrix<{self.rows}x{self.cols} {self.field!r}>[{body}]"

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[self.field.format(x) for x in r] for r in self.entries]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def row(self, i) -> tuple:
        return self.entries[i]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic
    def _check_same(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise DimensionMismatch(f"field mismatch {self.field!r} vs {other.field!r}")
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        f = self.field
        return Matrix._raw(f, tuple(tuple(f(a + b) for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)),
                           self.rows, self.cols)

    def __sub__(self, other):
        self._check_same(other)
        f = self.field
        return Matrix._raw(f, tuple(tuple(f(a - b) for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)),
                           self.rows, self.cols)

    def __neg__(self):
        f = self.field
        return Matrix._raw(f, tuple(tuple(f(-a) for a in r) for r in self.entries), self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        f = self.field
        c = f(c)
        return Matrix._raw(f, tuple(tuple(f(c * a) for a in r) for r in self.entries), self.rows, self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise DimensionMismatch(f"field mismatch {self.field!r} vs {other.field!r}")
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        if self.cols == 0:
            return Matrix.zeros(f, self.rows, other.cols)
        ocols = list(zip(*other.entries))
        if not ocols:
            return Matrix.zeros(f, self.rows, other.cols)
        if isinstance(f, Rationals):
            return Matrix._raw(f, _rational_product(self.entries, ocols), self.rows, other.cols)
        return Matrix._raw(f, tuple(tuple(f(sum(a * b for a, b in zip(r, c))) for c in ocols)
                                    for r in self.entries), self.rows, other.cols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        f = self.field
        return tuple(f(sum(a * b for a, b in zip(r, v))) for r in self.entries)

    def __pow__(self, k: int):
        if not self.is_square() or k < 0:
            raise DimensionMismatch("matrix power needs a square matrix and k >= 0")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        if self.rows == 0:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix._raw(self.field, tuple(zip(*self.entries)), self.cols, self.rows)

    def transpose(self) -> "Matrix":
        return self.T

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
                           len(rows), len(cols))

    def trace(self):
        if not self.is_square():
            raise DimensionMismatch("trace of a non-square matrix")
        return self.field(sum(self.entries[i][i] for i in range(self.rows)))

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot columns."""
        f = self.field
        m = [list(r) for r in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f(x * inv) for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    u = m[i][c]
                    m[i] = [f(a - u * b) for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix._raw(f, tuple(tuple(row) for row in m), self.rows, self.cols), tuple(pivots)

    def rank(self) -> int:
        if isinstance(self.field, Rationals):
            return _integer_rank(self.entries, self.cols)
        return len(self.rref()[1])

    def det(self):
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        if isinstance(self.field, Rationals):
            return _integer_det(self.entries, self.rows)
        f = self.field
        m = [list(r) for r in self.entries]
        n = self.rows
        d = f.one
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return f.zero
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = f(-d)
            d = f(d * m[c][c])
            inv = f.inv(m[c][c])
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    u = f(m[i][c] * inv)
                    m[i] = [f(a - u * b) for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        if isinstance(self.field, Rationals):
            return Matrix._raw(self.field, _integer_inverse(self.entries, n), n, n)
        aug = hstack(self, Matrix.identity(self.field, n))
        r, piv = aug.rref()
        if piv[:n] != tuple(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return r.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def kernel_vectors(self) -> list[tuple]:
        r, pivots = self.rref()
        f = self.field
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f(-r.entries[i][fc])
            basis.append(tuple(v))
        return basis

    def char_poly(self) -> tuple:
        return char_poly(self)

    def with_field(self, field: Field) -> "Matrix":
        return Matrix(field, self.entries, self.rows, self.cols)


def _scaled(vec) -> tuple[list[int], int]:
    den = lcm(*(x.denominator for x in vec))
    return [x.numerator * (den // x.denominator) for x in vec], den


def _rational_product(rows, cols) -> tuple:
    """Row-by-column products with one Fraction built per entry."""
    srows = [_scaled(r) for r in rows]
    scols = [_scaled(c) for c in cols]
    return tuple(
        tuple(Fraction(sum(a * b for a, b in zip(r, c) if a), rd * cd) for c, cd in scols)
        for r, rd in srows)


def _integer_inverse(entries, n: int) -> tuple:
    """Fraction-free Gauss-Jordan on ``[A | I]`` with rows of ``A`` cleared of denominators."""
    m, dens = [], []
    for i, row in enumerate(entries):
        ints, den = _scaled(row)
        m.append(ints + [1 if j == i else 0 for j in range(n)])
        dens.append(den)
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        pk = m[k]
        p = pk[k]
        for i in range(n):
            if i == k:
                continue
            ri = m[i]
            u = ri[k]
            m[i] = [(p * a - u * b) // prev for a, b in zip(ri, pk)]
        prev = p
    # left block is now prev * I; undo the row scaling on the columns of the inverse
    return tuple(tuple(Fraction(m[i][n + j] * dens[j], prev) for j in range(n)) for i in range(n))


def _integer_rank(entries, ncols: int) -> int:
    """Rank of a rational matrix by fraction-free elimination on row-scaled integers."""
    rows = []
    for row in entries:
        den = lcm(*(x.denominator for x in row)) if row else 1
        ints = [x.numerator * (den // x.denominator) for x in row]
        if any(ints):
            rows.append(ints)
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pc = prow[c]
        for i in range(rank + 1, len(rows)):
            a = rows[i][c]
            if a:
                g = gcd(pc, a)
                u, w = pc // g, a // g
                r = [x * u - y * w for x, y in zip(rows[i], prow)]
                content = gcd(*r)
                if content > 1:
                    r = [x // content for x in r]
                rows[i] = r
        rank += 1
        if rank == len(rows):
            break
    return rank


def _integer_det(entries, n: int) -> Fraction:
    """Bareiss elimination on the row-scaled integer matrix."""
    scale = 1
    m = []
    for row in entries:
        den = lcm(*(x.denominator for x in row)) if row else 1
        scale *= den
        m.append([x.numerator * (den // x.denominator) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    det = m[n - 1][n - 1] if n else 1
    return Fraction(sign * det, scale)


def hstack(*ms: Matrix) -> Matrix:
    ms = [m for m in ms]
    rows = ms[0].rows
    field = ms[0].field
    if any(m.rows != rows for m in ms):
        raise DimensionMismatch("hstack needs equal row counts")
    return Matrix._raw(field, tuple(tuple(x for m in ms for x in m.entries[i]) for i in range(rows)),
                       rows, sum(m.cols for m in ms))


def vstack(*ms: Matrix) -> Matrix:
    cols = ms[0].cols
    field = ms[0].field
    if any(m.cols != cols for m in ms):
        raise DimensionMismatch("vstack needs equal column counts")
    return Matrix._raw(field, tuple(r for m in ms for r in m.entries), sum(m.rows for m in ms), cols)


def block_diag(*ms: Matrix) -> Matrix:
    field = ms[0].field
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = [[field.zero] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m.entries[i][j]
        r0 += m.rows
        c0 += m.cols
    return Matrix._raw(field, tuple(tuple(r) for r in out), rows, cols)


def rank(m: Matrix) -> int:
    return m.rank()


def char_poly(m: Matrix) -> tuple:
    """Coefficients ``(a_0, ..., a_{n-1})`` of ``det(t I - M)``, low degree first.

    Hessenberg reduction followed by the standard three-term recurrence;
    division-free in the recurrence, so it works over any field.
    """
    if not m.is_square():
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    h = [list(r) for r in m.entries]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != 0), None)
        if piv is None:
            continue
        if piv != k:
            h[piv], h[k] = h[k], h[piv]
            for row in h:
                row[piv], row[k] = row[k], row[piv]
        inv = f.inv(h[k][k - 1])
        for i in range(k + 1, n):
            u = f(h[i][k - 1] * inv)
            if u == 0:
                continue
            h[i] = [f(a - u * b) for a, b in zip(h[i], h[k])]
            for row in h:
                row[k] = f(row[k] + u * row[i])
    # polys[k] = char poly of the leading k x k block, low degree first
    polys = [[f.one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        new = [f.zero] + list(prev)
        hkk = h[k - 1][k - 1]
        for d, c in enumerate(prev):
            new[d] = f(new[d] - hkk * c)
        sub = f.one
        for i in range(k - 1, 0, -1):
            sub = f(sub * h[i][i - 1])
            coef = f(h[i - 1][k - 1] * sub)
            if coef != 0:
                for d, c in enumerate(polys[i - 1]):
                    new[d] = f(new[d] - coef * c)
        polys.append(new)
    return tuple(polys[n][:n])


# ---------------------------------------------------------------- univariate polynomials over Q


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = _trim(r)
    return q, r


def poly_monic(p: Sequence) -> list:
    p = _trim([Fraction(x) for x in p])
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def _poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(poly: Sequence) -> list[Fraction]:
    """All rational roots of a nonzero polynomial (low degree first), with multiplicity."""
    p = _trim([Fraction(x) for x in poly])
    if not p:
        raise QuivermodError("the zero polynomial has every root")
    roots: list[Fraction] = []
    while p and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return sorted(roots)
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    candidates = sorted({Fraction(s * a, b) for a in _divisors(ints[0]) for b in _divisors(ints[-1])
                         for s in (1, -1)})
    for c in candidates:
        while len(p) > 1 and _poly_eval(p, c) == 0:
            roots.append(c)
            p, _ = poly_divmod(p, [-c, 1])
    return sorted(roots)


def rational_eigenvalues(m: Matrix) -> tuple[list[Fraction], bool]:
    """Rational eigenvalues of ``m`` with multiplicity, and whether they exhaust the spectrum."""
    if not m.is_square():
        raise DimensionMismatch("eigenvalues of a non-square matrix")
    if m.field != QQ:
        raise QuivermodError("rational_eigenvalues needs a matrix over Q")
    poly = list(char_poly(m)) + [Fraction(1)]
    roots = rational_roots(poly)
    return roots, len(roots) == m.rows


# ---------------------------------------------------------------- binary forms


@dataclass(frozen=True)
class BinaryForm:
    """``sum_k coefficients[k] * l0^(degree-k) * l1^k`` over Q."""

    degree: int
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if len(coeffs) != self.degree + 1:
            raise DimensionMismatch("binary form needs degree + 1 coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __call__(self, l0, l1):
        d = self.degree
        return sum(c * Fraction(l0) ** (d - k) * Fraction(l1) ** k for k, c in enumerate(self.coefficients))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, tuple(out))

    def divides(self, other: "BinaryForm") -> bool:
        """Exact divisibility, checked on both affine charts."""
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        if self.degree > other.degree:
            return False
        e_self, e_other = l1_valuation(self), l1_valuation(other)
        if e_self > e_other:
            return False
        _, r = poly_divmod(dehomogenize(other), dehomogenize(self))
        return not r

    def __str__(self):
        terms = []
        d = self.degree
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "*".join(x for x in (_power("l0", d - k), _power("l1", k)) if x)
            terms.append(f"{c}" + (f"*{mono}" if mono else "") if c != 1 or not mono else mono)
        return " + ".join(terms) if terms else "0"


def _power(var, e):
    return "" if e == 0 else var if e == 1 else f"{var}^{e}"


def l1_valuation(form: BinaryForm) -> int:
    return next(k for k, c in enumerate(form.coefficients) if c != 0)


def dehomogenize(form: BinaryForm) -> list:
    """``form(l0, 1)`` as a polynomial in l0, low degree first."""
    d = form.degree
    return _trim([form.coefficients[d - j] for j in range(d + 1)])


def binary_form_gcd(forms: Sequence[BinaryForm]) -> BinaryForm:
    """Monic GCD of binary forms.

    The univariate GCD on the chart ``l1 = 1`` misses powers of ``l1``; those
    are tracked separately through the ``l1``-adic valuation of each form.
    """
    forms = list(forms)
    if not forms:
        raise DimensionMismatch("binary_form_gcd needs at least one form")
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise QuivermodError("all minors vanish")
    e = min(l1_valuation(f) for f in nonzero)
    g: list = []
    for f in nonzero:
        g = poly_gcd(g, dehomogenize(f)) if g else poly_monic(dehomogenize(f))
    dg = len(g) - 1
    degree = dg + e
    coeffs = [Fraction(0)] * (degree + 1)
    for j, c in enumerate(g):
        coeffs[dg - j + e] = c
    return BinaryForm(degree, tuple(coeffs))


# ---------------------------------------------------------------- subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``field^ambient_dim`` stored as its canonical RREF basis.

    ``basis`` holds the rows of the reduced row echelon form of any spanning
    set, so two spanning sets of the same space give equal objects.  The
    :attr:`matrix` view returns them as columns (reduced column echelon form).
    """

    field: Field
    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not vectors:
            return cls(field, ambient_dim, ())
        r, piv = Matrix(field, vectors, len(vectors), ambient_dim).rref()
        return cls(field, ambient_dim, r.entries[:len(piv)])

    @classmethod
    def zero(cls, field, n) -> "Subspace":
        return cls(field, n, ())

    @classmethod
    def full(cls, field, n) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Matrix:
        """Basis vectors as columns (``ambient_dim x dim``)."""
        return Matrix.from_columns(self.field, self.basis, self.ambient_dim)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(b) if x != 0) for b in self.basis)

    def coordinates(self, v: Sequence):
        """Coordinates of ``v`` in :attr:`basis`, or ``None`` if ``v`` is not in the span."""
        f = self.field
        coords = tuple(f(v[p]) for p in self.pivots)
        recon = [f.zero] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c != 0:
                recon = [f(x + c * y) for x, y in zip(recon, b)]
        if tuple(f(x) for x in v) != tuple(recon):
            return None
        return coords

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v):
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    __le__ = issubspace

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def complement_basis(self) -> list[tuple]:
        """Standard basis vectors completing :attr:`basis` to a basis of the ambient space."""
        f = self.field
        piv = set(self.pivots)
        return [tuple(f.one if i == j else f.zero for i in range(self.ambient_dim))
                for j in range(self.ambient_dim) if j not in piv]

    def annihilator(self) -> Matrix:
        """Rows spanning the linear forms that vanish on the subspace."""
        kv = Matrix(self.field, self.basis, self.dim, self.ambient_dim).kernel_vectors() if self.basis \
            else Matrix.identity(self.field, self.ambient_dim).entries
        return Matrix(self.field, kv, len(kv), self.ambient_dim)

    def image(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise DimensionMismatch(f"{m.shape} matrix on ambient dimension {self.ambient_dim}")
        return Subspace.span(self.field, m.rows, [m.apply(b) for b in self.basis])


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim or a.field != b.field:
        raise DimensionMismatch(f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def kernel_basis(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.cols, m.kernel_vectors())


def image_basis(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.rows, m.columns())


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.field, a.ambient_dim, a.basis + b.basis)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.field, a.ambient_dim)
    # v in A and B  <=>  v in A and annihilator(B) v = 0
    ann = b.annihilator()
    if ann.rows == 0:
        return a
    restricted = ann @ a.matrix
    coeffs = restricted.kernel_vectors()
    am = a.matrix
    return Subspace.span(a.field, a.ambient_dim, [am.apply(c) for c in coeffs])


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """``{v : m v in s}``."""
    if m.rows != s.ambient_dim or m.field != s.field:
        raise DimensionMismatch(f"{m.shape} matrix against a subspace of {s.ambient_dim}-space")
    ann = s.annihilator()
    if ann.rows == 0:
        return Subspace.full(m.field, m.cols)
    return kernel_basis(ann @ m)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(q: int, n: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


@lru_cache(maxsize=256)
def _subspace_table(p: int, n: int) -> tuple:
    field = GF(p)
    out = []
    for k in range(n + 1):
        for piv in combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
            for values in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(piv):
                    rows[r][c] = 1
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                out.append(Subspace(field, n, tuple(tuple(r) for r in rows)))
    return tuple(out)


def enumerate_subspaces(field: Field, n: int) -> tuple:
    """Every subspace of ``F_p^n``: by dimension, then pivot set, then free entries (lexicographic)."""
    if not field.finite:
        raise QuivermodError("subspaces can only be enumerated over a prime field")
    return _subspace_table(field.p, n)


# ---------------------------------------------------------------- random helpers


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random, lo: int = -3, hi: int = 3) -> Matrix:
    return Matrix(field, [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], rows, cols)


def random_invertible(field: Field, n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> Matrix:
    while True:
        m = random_matrix(field, n, n, rng, lo, hi)
        if m.rank() == n:
            return m
