"""Kronecker pencils as globally generated bundles on the projective line.

A pencil ``(b0, b1)`` of ``n x m`` matrices defines the sheaf map
``O(-1)^m -> O^n`` given by ``l0 b0 + l1 b1``; when it is injective on every
fiber its cokernel ``E`` is a bundle of rank ``n - m`` and degree ``m``.

``h_s = h^0(E(-s))`` is the kernel dimension of
``T_s : (Q^m)^s -> (Q^n)^(s-1)``, the map ``H^1(O(-1-s))^m -> H^1(O(-s))^n``
in the monomial basis ``x0^-i x1^-(s+1-i)``: block row ``k`` is
``w_k = b1 v_k + b0 v_(k+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm
from typing import Sequence

from .errors import DimensionMismatch, QuivermodError
from .linalg import (
    QQ, BinaryForm, Matrix, _integer_det, _integer_rank, binary_form_gcd, block_diag, dehomogenize,
    l1_valuation, rational_roots,
)
from .quiver import Representation

__all__ = [
    "KroneckerPencil", "InjectivityResult", "minor_forms", "pencil_fiberwise_injective",
    "cohomology_table", "splitting_type", "pencil_from_splitting", "pencil_act",
    "pencil_coordinate_change", "line_bundle_table", "grassmannian_stable",
]


@dataclass(frozen=True)
class KroneckerPencil:
    b0: Matrix
    b1: Matrix

    def __post_init__(self):
        if self.b0.shape != self.b1.shape:
            raise DimensionMismatch(f"pencil matrices have shapes {self.b0.shape} and {self.b1.shape}")
        if self.b0.field != QQ or self.b1.field != QQ:
            raise QuivermodError("pencils are over Q")

    @classmethod
    def build(cls, b0, b1, n: int, m: int) -> "KroneckerPencil":
        return cls(Matrix(QQ, b0, n, m), Matrix(QQ, b1, n, m))

    @property
    def n(self) -> int:
        return self.b0.rows

    @property
    def m(self) -> int:
        return self.b0.cols

    def at(self, l0, l1) -> Matrix:
        return self.b0 * l0 + self.b1 * l1

    def integer_entries(self) -> tuple[list[list[int]], list[list[int]]]:
        """``b0, b1`` times a common denominator; ranks and minor GCDs are unchanged."""
        den = lcm(1, *(x.denominator for b in (self.b0, self.b1) for row in b.entries for x in row))
        return tuple([[x.numerator * (den // x.denominator) for x in row] for row in b.entries]
                     for b in (self.b0, self.b1))


@lru_cache(maxsize=None)
def _vandermonde_inverse(k: int) -> Matrix:
    return Matrix(QQ, [[Fraction(t) ** e for e in range(k)] for t in range(k)], k, k).inverse()


def _interpolate(values: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of the degree < len(values) polynomial through ``(t, values[t])``."""
    return list(_vandermonde_inverse(len(values)).apply(values))


def minor_forms(p: KroneckerPencil):
    """Maximal minors of ``l0 b0 + l1 b1`` as binary forms of degree ``m``, by row subset."""
    m = p.m
    b0, b1 = p.integer_entries()
    den = lcm(1, *(x.denominator for b in (p.b0, p.b1) for row in b.entries for x in row))
    scale = Fraction(1, den ** m)
    # f(1, t) at t = 0..m determines the form
    at_t = [[[x + t * y for x, y in zip(r0, r1)] for r0, r1 in zip(b0, b1)] for t in range(m + 1)]
    for rows in combinations(range(p.n), m):
        vals = [_integer_det([mt[r] for r in rows], m) * scale for mt in at_t]
        yield rows, BinaryForm(m, tuple(_interpolate(vals)))


@dataclass(frozen=True)
class InjectivityResult:
    injective: bool
    fiber: tuple | None = None  # failing point [l0 : l1], first nonzero coordinate 1
    factor: BinaryForm | None = None  # GCD of the minors when not injective

    def __bool__(self):
        return self.injective


def _normalize_point(l0, l1) -> tuple:
    l0, l1 = Fraction(l0), Fraction(l1)
    if l0 != 0:
        return (Fraction(1), l1 / l0)
    return (Fraction(0), Fraction(1))


def pencil_fiberwise_injective(p: KroneckerPencil) -> InjectivityResult:
    """Injective on every fiber iff the maximal minors have a constant GCD."""
    if p.m > p.n:
        raise QuivermodError(f"pencil with m = {p.m} > n = {p.n} cannot be injective")
    if p.m == 0:
        return InjectivityResult(True)
    forms = []
    g = None
    for _, form in minor_forms(p):
        if form.is_zero():
            continue
        forms.append(form)
        g = binary_form_gcd([g, form]) if g is not None else binary_form_gcd([form])
        if g.degree == 0:
            return InjectivityResult(True)
    if g is None:
        return InjectivityResult(False, None, BinaryForm(0, (0,)))
    if l1_valuation(g) > 0:
        return InjectivityResult(False, (Fraction(1), Fraction(0)), g)
    roots = rational_roots(dehomogenize(g))
    if roots:
        return InjectivityResult(False, _normalize_point(roots[0], 1), g)
    return InjectivityResult(False, None, g)


def _t_rows(b0, b1, n: int, m: int, s: int) -> list[list]:
    cols = m * s
    out = [[0] * cols for _ in range(n * (s - 1))]
    for k in range(s - 1):
        for r in range(n):
            row = out[k * n + r]
            row[k * m:(k + 1) * m] = b1[r]
            row[(k + 1) * m:(k + 2) * m] = b0[r]
    return out


def _t_matrix(p: KroneckerPencil, s: int) -> Matrix:
    return Matrix(QQ, _t_rows(p.b0.entries, p.b1.entries, p.n, p.m, s), p.n * (s - 1), p.m * s)


def _require_injective(p: KroneckerPencil):
    res = pencil_fiberwise_injective(p)
    if not res.injective:
        where = f"at [{res.fiber[0]}:{res.fiber[1]}]" if res.fiber else \
            f"at an irrational fiber (factor {res.factor})"
        raise QuivermodError(f"pencil is not fiberwise injective {where}")


def _generic_rank(b0, b1, n: int, m: int) -> int:
    # a nonzero r x r minor has at most r roots among the points [1:t]
    best = 0
    for t in range(m + 1):
        best = max(best, _integer_rank([[x + t * y for x, y in zip(r0, r1)] for r0, r1 in zip(b0, b1)], m))
        if best == m:
            break
    return best


def cohomology_table(p: KroneckerPencil, max_s: int | None = None) -> tuple[int, ...]:
    """``(h_0, ..., h_max_s)`` with ``h_0 = n``, ``h_1 = m``; default ``max_s = m + 1``.

    With generic rank ``m`` the cokernel is a bundle plus torsion, and the
    torsion length is a floor for every ``h_s`` with ``s >= 1``.  The bundle
    part is globally generated of degree at most ``m``, so injectivity on
    every fiber holds exactly when ``h_(m+1) = 0``.
    """
    if p.m > p.n:
        raise QuivermodError(f"pencil with m = {p.m} > n = {p.n} cannot be injective")
    if max_s is None:
        max_s = p.m + 1
    b0, b1 = p.integer_entries()
    if p.m and _generic_rank(b0, b1, p.n, p.m) < p.m:
        _require_injective(p)
    table = [p.n]
    for s in range(1, max(max_s, p.m + 1) + 1):
        if s == 1 or table[-1] == 0:
            # h^0(E(-s)) embeds into h^0(E(-s+1)), so zeros persist
            table.append(p.m if s == 1 else 0)
        else:
            table.append(p.m * s - _integer_rank(_t_rows(b0, b1, p.n, p.m, s), p.m * s))
    if table[p.m + 1] != 0:
        _require_injective(p)
        raise QuivermodError(f"torsion in the cokernel but no failing fiber found (table {table})")
    return tuple(table[:max_s + 1])


def line_bundle_table(degrees: Sequence[int], max_s: int) -> tuple[int, ...]:
    """``h^0`` of ``O(d_1) + ... + O(d_r)`` twisted by ``O(-s)``."""
    return tuple(sum(max(d - s + 1, 0) for d in degrees) for s in range(max_s + 1))


def splitting_type(p: KroneckerPencil) -> tuple[int, ...]:
    table = cohomology_table(p)
    at_least = [table[s] - table[s + 1] for s in range(len(table) - 1)] + [0]  # #{d_i >= s}
    if any(a < b for a, b in zip(at_least, at_least[1:])) or table[-1] != 0:
        raise QuivermodError(f"inconsistent cohomology table {table}")
    degrees = []
    for e in range(len(at_least) - 1):
        degrees += [e] * (at_least[e] - at_least[e + 1])
    degrees.sort(reverse=True)
    if len(degrees) != p.n - p.m or sum(degrees) != p.m:
        raise QuivermodError(f"inconsistent cohomology table {table}")
    return tuple(degrees)


def pencil_from_splitting(degrees: Sequence[int]) -> KroneckerPencil:
    """Block sum of multiplication by ``x0, x1`` from ``H^0(O(e-1))`` to ``H^0(O(e))``."""
    degrees = sorted((int(d) for d in degrees), reverse=True)
    if any(d < 0 for d in degrees):
        raise QuivermodError("splitting degrees must be non-negative")
    b0_blocks, b1_blocks = [], []
    for e in degrees:
        b0_blocks.append(Matrix(QQ, [[1 if r == c else 0 for c in range(e)] for r in range(e + 1)], e + 1, e))
        b1_blocks.append(Matrix(QQ, [[1 if r == c + 1 else 0 for c in range(e)] for r in range(e + 1)], e + 1, e))
    if not degrees:
        return KroneckerPencil(Matrix.zeros(QQ, 0, 0), Matrix.zeros(QQ, 0, 0))
    return KroneckerPencil(block_diag(*b0_blocks), block_diag(*b1_blocks))


def pencil_act(g: Matrix, h: Matrix, p: KroneckerPencil) -> KroneckerPencil:
    hinv = h.inverse()
    return KroneckerPencil(g @ p.b0 @ hinv, g @ p.b1 @ hinv)


def pencil_coordinate_change(p: KroneckerPencil, a, b, c, d) -> KroneckerPencil:
    if Fraction(a) * d - Fraction(b) * c == 0:
        raise QuivermodError("coordinate change is singular")
    return KroneckerPencil(p.b0 * a + p.b1 * b, p.b0 * c + p.b1 * d)


def grassmannian_stable(v: Representation) -> bool:
    """``K_n`` representation of dims ``(d, 1)``: stable iff the stacked ``n x d`` matrix has rank ``d``."""
    q = v.quiver
    if q.vertex_count != 2 or any((a.source, a.target) != (0, 1) for a in q.arrows):
        raise QuivermodError("expected a Kronecker quiver with arrows 0 -> 1")
    if v.dims[1] != 1:
        raise DimensionMismatch(f"expected dims (d, 1), got {v.dims}")
    d = v.dims[0]
    rows = [v.map(a.id).row(0) for a in q.arrows]
    return Matrix(v.field, rows, len(rows), d).rank() == d
