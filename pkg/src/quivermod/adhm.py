"""ADHM data, colength-n ideals in two variables and the associated monads.

An ADHM datum is ``(B1, B2, i, j)`` with ``B1, B2`` square of size ``n``,
``i`` of shape ``n x r`` and ``j`` of shape ``r x n``.  For ``r = 1`` a stable
solution of ``[B1, B2] + i j = 0`` is the same as a colength-``n`` ideal of
``Q[x, y]`` with ``x, y`` acting as ``B1, B2`` on the quotient and ``i(1)``
the class of 1.

Staircases are partitions: part ``k`` counts the standard monomials
``x^a y^k``, so ``[1, 1]`` is ``{1, y}`` (the ideal ``(x, y^2)``) and
``[2, 1]`` is ``{1, x, y}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, IrrationalSpectrum, PreconditionFailed, QuivermodError
from .linalg import (Field, Matrix, QQ, Subspace, hstack, kernel_basis, random_invertible, random_matrix,
                     rational_roots, char_poly, vstack)
from .partitions import check_partition

__all__ = [
    "AdhmData", "IdealBasis", "PolyMatrix", "adhm_residual", "adhm_is_stable", "adhm_act",
    "rank_one_j_check", "ideal_from_adhm", "adhm_from_monomial_ideal", "adhm_roundtrip",
    "staircase_monomials", "hilbert_chow", "monad_matrices", "monad_product",
    "monad_pointwise_check", "monad_fiber_ranks", "monad_degeneracy_points", "chern_metadata", "monad_middle_dimension", "points_datum",
    "random_adhm", "monomials_up_to",
]


@dataclass(frozen=True)
class AdhmData:
    field: Field
    n: int
    r: int
    B1: Matrix
    B2: Matrix
    i: Matrix
    j: Matrix

    def __post_init__(self):
        shapes = {"B1": (self.n, self.n), "B2": (self.n, self.n), "i": (self.n, self.r), "j": (self.r, self.n)}
        for name, shape in shapes.items():
            m = getattr(self, name)
            if not isinstance(m, Matrix):
                m = Matrix(self.field, m, *shape)
                object.__setattr__(self, name, m)
            if m.shape != shape:
                raise DimensionMismatch(f"{name} has shape {m.shape}, expected {shape}")
            if m.field != self.field:
                raise DimensionMismatch(f"{name} is over {m.field!r}, expected {self.field!r}")

    @classmethod
    def build(cls, field: Field, B1, B2, i, j, n: int | None = None, r: int | None = None) -> "AdhmData":
        if n is None:
            n = len(B1)
        if r is None:
            r = len(j) if j else (len(i[0]) if i else 0)
        return cls(field, n, r, Matrix(field, B1, n, n), Matrix(field, B2, n, n),
                   Matrix(field, i, n, r), Matrix(field, j, r, n))


def adhm_residual(d: AdhmData) -> Matrix:
    return d.B1 @ d.B2 - d.B2 @ d.B1 + d.i @ d.j


def _krylov(d: AdhmData) -> Subspace:
    field, n = d.field, d.n
    space = Subspace.span(field, n, d.i.columns())
    frontier = list(space.basis)
    while frontier:
        new = []
        for v in frontier:
            for b in (d.B1, d.B2):
                w = b.apply(v)
                if not space.contains(w):
                    space = Subspace.span(field, n, space.basis + (w,))
                    new.append(w)
        frontier = new
    return space


def adhm_is_stable(d: AdhmData) -> tuple[bool, Subspace | None]:
    """Stable iff the columns of ``i`` generate ``Q^n`` under ``B1, B2``; else the proper closure."""
    closure = _krylov(d)
    if closure.dim == d.n:
        return True, None
    return False, closure


def adhm_act(g: Matrix, d: AdhmData) -> AdhmData:
    if g.shape != (d.n, d.n):
        raise DimensionMismatch(f"group element must be {d.n}x{d.n}")
    try:
        ginv = g.inverse()
    except ZeroDivisionError:
        raise QuivermodError("singular group element") from None
    return AdhmData(d.field, d.n, d.r, g @ d.B1 @ ginv, g @ d.B2 @ ginv, g @ d.i, d.j @ ginv)


def _require_solution(d: AdhmData):
    if not adhm_residual(d).is_zero():
        raise PreconditionFailed("ADHM relation does not hold")
    if not adhm_is_stable(d)[0]:
        raise PreconditionFailed("ADHM datum is not stable")


def rank_one_j_check(d: AdhmData) -> bool:
    """For ``r = 1`` stable solutions ``j`` always vanishes; returns ``j == 0``."""
    if d.r != 1:
        raise PreconditionFailed("rank_one_j_check needs r = 1")
    _require_solution(d)
    ok = d.j.is_zero()
    assert ok, "stable rank-one solution with nonzero j"
    return ok


# ---------------------------------------------------------------- ideals


def monomials_up_to(degree: int) -> list[tuple[int, int]]:
    """Exponent pairs ``(a, b)`` of ``x^a y^b``: by degree, then decreasing power of x."""
    return [(t - b, b) for t in range(degree + 1) for b in range(t + 1)]


def staircase_monomials(parts: Sequence[int]) -> list[tuple[int, int]]:
    parts = check_partition(parts)
    cells = {(a, b) for b, length in enumerate(parts) for a in range(length)}
    total = sum(parts)
    return [m for m in monomials_up_to(total) if m in cells]


def _eval_monomial(b1: Matrix, b2: Matrix, v, mono) -> tuple:
    a, b = mono
    for _ in range(b):
        v = b2.apply(v)
    for _ in range(a):
        v = b1.apply(v)
    return v


Poly = Mapping[tuple[int, int], object]


@dataclass(frozen=True)
class IdealBasis:
    """``Q[x, y] / I`` with its standard monomials, multiplication operators and class of 1."""

    field: Field
    standard_monomials: tuple
    Mx: Matrix
    My: Matrix
    one: tuple

    @property
    def colength(self) -> int:
        return len(self.standard_monomials)

    def normal_form(self, poly: Poly) -> tuple:
        """Coordinates of the class of ``poly`` (a dict ``{(a, b): coeff}``)."""
        f = self.field
        acc = [f.zero] * self.colength
        for mono, c in poly.items():
            c = f(c)
            if c == 0:
                continue
            vec = _eval_monomial(self.Mx, self.My, self.one, mono)
            acc = [f(x + c * y) for x, y in zip(acc, vec)]
        return tuple(acc)

    def contains(self, poly: Poly) -> bool:
        return not any(self.normal_form(poly))

    def contains_monomial(self, mono) -> bool:
        return self.contains({tuple(mono): 1})

    def corners(self) -> list[tuple[int, int]]:
        std = set(self.standard_monomials)
        top = max((a + b for a, b in std), default=0) + 1
        out = []
        for m in monomials_up_to(top):
            if m in std:
                continue
            a, b = m
            if (a == 0 or (a - 1, b) in std) and (b == 0 or (a, b - 1) in std):
                out.append(m)
        return out

    def generators(self) -> list[dict]:
        """Reduced Groebner basis: each corner monomial minus its normal form."""
        gens = []
        for m in self.corners():
            coords = self.normal_form({m: 1})
            g = {m: self.field.one}
            for s, c in zip(self.standard_monomials, coords):
                if c != 0:
                    g[s] = self.field(-c)
            gens.append(g)
        return gens

    def canonical_key(self) -> tuple:
        return tuple(tuple(sorted(g.items())) for g in self.generators())


def ideal_from_adhm(d: AdhmData) -> IdealBasis:
    """Standard-monomial presentation of the ideal ``{p : p(B1, B2) i(1) = 0}``."""
    if d.r != 1:
        raise PreconditionFailed("ideal extraction needs r = 1")
    _require_solution(d)
    if not d.j.is_zero():
        raise PreconditionFailed("j must vanish")
    f = d.field
    v = d.i.column(0)
    chosen: list[tuple[int, int]] = []
    vectors: list[tuple] = []
    span = Subspace.zero(f, d.n)
    degree = 0
    while len(chosen) < d.n:
        added = False
        for mono in [(degree - b, b) for b in range(degree + 1)]:
            w = _eval_monomial(d.B1, d.B2, v, mono)
            if not span.contains(w):
                chosen.append(mono)
                vectors.append(w)
                span = Subspace.span(f, d.n, vectors)
                added = True
        if not added:
            raise PreconditionFailed("class of 1 is not cyclic")
        degree += 1
    p = Matrix.from_columns(f, vectors, d.n) if vectors else Matrix.zeros(f, 0, 0)
    pinv = p.inverse()
    one = tuple(f.one if k == 0 else f.zero for k in range(d.n))
    return IdealBasis(f, tuple(chosen), pinv @ d.B1 @ p, pinv @ d.B2 @ p, one)


def adhm_from_monomial_ideal(parts: Sequence[int], field: Field = QQ) -> AdhmData:
    std = staircase_monomials(parts)
    n = len(std)
    index = {m: k for k, m in enumerate(std)}

    def mult(shift):
        rows = [[0] * n for _ in range(n)]
        for m, k in index.items():
            target = (m[0] + shift[0], m[1] + shift[1])
            if target in index:
                rows[index[target]][k] = 1
        return Matrix(field, rows, n, n)

    i = Matrix(field, [[1 if m == (0, 0) else 0] for m in std], n, 1)
    return AdhmData(field, n, 1, mult((1, 0)), mult((0, 1)), i, Matrix.zeros(field, 1, n))


def adhm_roundtrip(parts: Sequence[int], data: AdhmData | None = None) -> bool:
    """Membership of every monomial of degree <= colength survives the round trip.

    ``data`` may be any datum claimed to represent the staircase (for instance a
    conjugate of the canonical one); by default the canonical datum is used.
    """
    std = set(staircase_monomials(parts))
    d = data if data is not None else adhm_from_monomial_ideal(parts)
    ideal = ideal_from_adhm(d)
    return all(ideal.contains_monomial(m) == (m not in std) for m in monomials_up_to(sum(parts)))


def _sub_block(m: Matrix) -> Matrix:
    return m.submatrix(range(1, m.rows), range(1, m.cols))


def _joint_spectrum(b1: Matrix, b2: Matrix) -> list[tuple]:
    n = b1.rows
    if n == 0:
        return []
    f = b1.field
    roots1 = rational_roots(list(char_poly(b1)) + [Fraction(1)])
    for l1 in dict.fromkeys(roots1):
        eig = kernel_basis(b1 - Matrix.scalar(f, n, l1))
        basis = eig.matrix
        # B2 preserves the eigenspace; write it in the eigenspace basis
        restricted = Matrix.from_columns(f, [eig.coordinates(b2.apply(c)) for c in eig.basis], eig.dim)
        roots2 = rational_roots(list(char_poly(restricted)) + [Fraction(1)])
        if not roots2:
            continue
        l2 = roots2[0]
        coeffs = kernel_basis(restricted - Matrix.scalar(f, eig.dim, l2)).basis[0]
        u = basis.apply(coeffs)
        span_u = Subspace.span(f, n, [u])
        p = Matrix.from_columns(f, [u] + span_u.complement_basis(), n)
        pinv = p.inverse()
        rest = _joint_spectrum(_sub_block(pinv @ b1 @ p), _sub_block(pinv @ b2 @ p))
        return [(Fraction(l1), Fraction(l2))] + rest
    raise IrrationalSpectrum("joint spectrum is not rational")


def hilbert_chow(d: AdhmData) -> list[tuple]:
    """Joint eigenvalues of the commuting pair ``(B1, B2)`` as a sorted multiset."""
    if d.field != QQ:
        raise QuivermodError("hilbert_chow works over Q")
    _require_solution(d)
    if not (d.B1 @ d.B2 - d.B2 @ d.B1).is_zero():
        raise PreconditionFailed("B1 and B2 do not commute")
    return sorted(_joint_spectrum(d.B1, d.B2))


def points_datum(points: Sequence[tuple], field: Field = QQ) -> AdhmData:
    """Reduced ideal of distinct points: diagonal operators, ``i = (1, ..., 1)``."""
    pts = [tuple(p) for p in points]
    if len(set(pts)) != len(pts):
        raise QuivermodError("points must be distinct")
    n = len(pts)
    return AdhmData(field, n, 1, Matrix.diag(field, [p[0] for p in pts]), Matrix.diag(field, [p[1] for p in pts]),
                    Matrix(field, [[1] for _ in range(n)], n, 1), Matrix.zeros(field, 1, n))


def random_adhm(rng: random.Random, n: int, r: int, field: Field = QQ, lo: int = -3, hi: int = 3) -> AdhmData:
    return AdhmData(field, n, r, random_matrix(field, n, n, rng, lo, hi), random_matrix(field, n, n, rng, lo, hi),
                    random_matrix(field, n, r, rng, lo, hi), random_matrix(field, r, n, rng, lo, hi))


# ---------------------------------------------------------------- monads


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix with polynomial entries in ``x0, x1, x2``: ``{exponents: coefficient matrix}``."""

    rows: int
    cols: int
    terms: tuple  # ((exponent tuple, Matrix), ...) sorted, zero matrices dropped

    @classmethod
    def from_dict(cls, rows: int, cols: int, terms: Mapping) -> "PolyMatrix":
        kept = tuple(sorted((tuple(e), m) for e, m in terms.items() if not m.is_zero()))
        for _, m in kept:
            if m.shape != (rows, cols):
                raise DimensionMismatch("coefficient shape mismatch")
        return cls(rows, cols, kept)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("cannot multiply polynomial matrices")
        out: dict = {}
        for e1, m1 in self.terms:
            for e2, m2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                term = m1 @ m2
                out[e] = out[e] + term if e in out else term
        return PolyMatrix.from_dict(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, field: Field, point: Sequence) -> Matrix:
        acc = Matrix.zeros(field, self.rows, self.cols)
        for e, m in self.terms:
            c = field.one
            for x, k in zip(point, e):
                c = field(c * field(x) ** k)
            acc = acc + m * c
        return acc


X0, X1, X2 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def monad_matrices(d: AdhmData) -> tuple[PolyMatrix, PolyMatrix]:
    """``a = (B1 x0 - x1; B2 x0 - x2; j x0)`` and ``b = (-(B2 x0 - x2), B1 x0 - x1, i x0)``."""
    f, n, r = d.field, d.n, d.r
    eye, zn, zrn, znr = Matrix.identity(f, n), Matrix.zeros(f, n, n), Matrix.zeros(f, r, n), Matrix.zeros(f, n, r)
    a = PolyMatrix.from_dict(2 * n + r, n, {
        X0: vstack(d.B1, d.B2, d.j),
        X1: vstack(-eye, zn, zrn),
        X2: vstack(zn, -eye, zrn),
    })
    b = PolyMatrix.from_dict(n, 2 * n + r, {
        X0: hstack(-d.B2, d.B1, d.i),
        X1: hstack(zn, -eye, znr),
        X2: hstack(eye, zn, znr),
    })
    return a, b


def monad_product(d: AdhmData) -> PolyMatrix:
    a, b = monad_matrices(d)
    return b @ a


def monad_fiber_ranks(d: AdhmData, point: Sequence) -> tuple[int, int]:
    """``(rank a_p, rank b_p)`` at a point of the projective plane."""
    pt = tuple(point)
    if len(pt) != 3 or not any(pt):
        raise QuivermodError(f"{pt} is not a point of the projective plane")
    a, b = monad_matrices(d)
    return a.evaluate(d.field, pt).rank(), b.evaluate(d.field, pt).rank()


def monad_pointwise_check(d: AdhmData, points: Sequence[Sequence]) -> tuple[bool, tuple | None]:
    """``b_p`` surjective at every sample point; returns the first failure.

    ``a`` is injective as a map of sheaves because ``a_p`` has rank ``n`` on
    the line ``x0 = 0``.  Its fibers may still drop rank at finitely many
    points, namely where the sheaf fails to be locally free (the support of
    ``C^2 / I`` for an ideal); see :func:`monad_degeneracy_points`.
    """
    if not adhm_residual(d).is_zero():
        raise PreconditionFailed("ADHM relation does not hold")
    for pt in points:
        if monad_fiber_ranks(d, pt)[1] != d.n:
            return False, tuple(pt)
    return True, None


def monad_degeneracy_points(d: AdhmData, points: Sequence[Sequence]) -> list[tuple]:
    """Sample points where ``a_p`` is not injective."""
    return [tuple(pt) for pt in points if monad_fiber_ranks(d, pt)[0] != d.n]


def chern_metadata(d: AdhmData) -> tuple[int, int, int]:
    """``(rank, c1, c2)`` of the sheaf encoded by the monad."""
    return (d.r, 0, d.n)


def monad_middle_dimension(d: AdhmData) -> int:
    return 2 * d.n + d.r
