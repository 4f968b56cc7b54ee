"""Doubled and framed quivers, moment maps and Nakajima-type stability.

Conventions
-----------
* In a double quiver each arrow ``a`` gets a partner ``a*`` with reversed ends.
* A framed quiver on ``n`` vertices adds vertices ``n..2n-1``; vertex ``n + i``
  is the framing of ``i`` and the framing arrow is ``b{i}: i -> n + i``.  In
  the doubled framed quiver ``b{i}*`` points back.
* Moment map at vertex ``i``:
  ``sum_{t(a)=i} f_a f_a* - sum_{s(a)=i} f_a* f_a``, minus ``f_b{i}* f_b{i}``
  when framed.
* For the Jordan quiver the ADHM letters are ``B1 = f_a``, ``B2 = f_a*``,
  ``i = -f_b0*`` and ``j = f_b0``; with these the framed moment map equals
  ``[B1, B2] + i j``.
* The framed ``A_n`` model uses vertices ``0..n-1`` (dims ``alpha_1..alpha_n``),
  arrows ``a{k}: k -> k-1`` and a single framing of dimension ``alpha_0`` at
  vertex 0.  The flag is ``F_0 = Q^alpha_0`` and
  ``F_i = Im(f_b0 f_a1 ... f_a(i-1))``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, DimensionMismatch, PreconditionFailed, QuivermodError
from .forms import dot
from .linalg import Field, Matrix, QQ, Subspace, image_basis, kernel_basis, random_invertible, random_matrix
from .quiver import Arrow, GroupElement, Quiver, Representation, reduce_mod_p
from .stability import (DEFAULT_BUDGET, SEMISTABLE, STABLE, UNSTABLE, StabilityVerdict, enumerate_subreps,
                        generated_subrep, largest_subrep_within)

__all__ = [
    "double_quiver", "frame_quiver", "framed_double_quiver", "hat_quiver", "an_quiver",
    "DoubledRepresentation", "FramedRepresentation", "DoubledFramedRepresentation",
    "Flag", "PreprojectiveCheck", "SpringerData",
    "hat_transform", "hat_inverse", "symplectic_form", "moment_map", "framed_moment_map",
    "check_deformed_preprojective", "check_framed_preprojective",
    "framed_semistable_positive", "framed_semistable_negative", "nakajima_general_stability",
    "an_flag_from_framed", "springer_data", "lambda_from_zeta", "partition_nu", "jordan_type",
    "dominates", "kraft_procesi_hypothesis", "flag_dimension", "framed_an_from_flag",
    "random_framed_an_fixture",
]


def _star(a: str) -> str:
    return a + "*"


def double_quiver(q: Quiver) -> Quiver:
    arrows = []
    for a in q.arrows:
        arrows.append(a)
        arrows.append(Arrow(_star(a.id), a.target, a.source))
    return Quiver(q.vertex_count, arrows)


def frame_quiver(q: Quiver) -> Quiver:
    n = q.vertex_count
    return Quiver(2 * n, list(q.arrows) + [Arrow(f"b{i}", i, n + i) for i in range(n)])


def framed_double_quiver(q: Quiver) -> Quiver:
    n = q.vertex_count
    arrows = list(double_quiver(q).arrows)
    for i in range(n):
        arrows.append(Arrow(f"b{i}", i, n + i))
        arrows.append(Arrow(f"b{i}*", n + i, i))
    return Quiver(2 * n, arrows)


def an_quiver(n: int) -> Quiver:
    """``n`` vertices with arrows ``a{k}: k -> k-1``."""
    return Quiver(n, [(f"a{k}", k, k - 1) for k in range(1, n)])


# ---------------------------------------------------------------- wrappers


def _fill_empty_framing(field, dims, framing_dims, maps, starred: bool) -> dict:
    """Framing maps at vertices with zero framing may be omitted."""
    maps = dict(maps)
    for i, (d, w) in enumerate(zip(dims, framing_dims)):
        if w == 0:
            maps.setdefault(f"b{i}", Matrix.zeros(field, 0, d))
            if starred:
                maps.setdefault(f"b{i}*", Matrix.zeros(field, d, 0))
    return maps


@dataclass(frozen=True)
class DoubledRepresentation:
    base: Quiver
    rep: Representation

    def __post_init__(self):
        if self.rep.quiver != double_quiver(self.base):
            raise DimensionMismatch("representation is not over the double of the base quiver")

    @classmethod
    def build(cls, base: Quiver, field: Field, dims: Sequence[int], maps) -> "DoubledRepresentation":
        return cls(base, Representation(double_quiver(base), field, dims, maps))

    @property
    def field(self):
        return self.rep.field

    @property
    def dims(self):
        return self.rep.dims

    def f(self, a: str) -> Matrix:
        return self.rep.map(a)

    def fstar(self, a: str) -> Matrix:
        return self.rep.map(_star(a))


@dataclass(frozen=True)
class FramedRepresentation:
    base: Quiver
    rep: Representation

    def __post_init__(self):
        if self.rep.quiver != frame_quiver(self.base):
            raise DimensionMismatch("representation is not over the framing of the base quiver")

    @classmethod
    def build(cls, base, field, dims, framing_dims, maps) -> "FramedRepresentation":
        maps = _fill_empty_framing(field, dims, framing_dims, maps, starred=False)
        return cls(base, Representation(frame_quiver(base), field, tuple(dims) + tuple(framing_dims), maps))

    @property
    def field(self):
        return self.rep.field

    @property
    def dims(self):
        return self.rep.dims[:self.base.vertex_count]

    @property
    def framing_dims(self):
        return self.rep.dims[self.base.vertex_count:]

    def map(self, key: str) -> Matrix:
        return self.rep.map(key)


@dataclass(frozen=True)
class DoubledFramedRepresentation:
    base: Quiver
    rep: Representation

    def __post_init__(self):
        if self.rep.quiver != framed_double_quiver(self.base):
            raise DimensionMismatch("representation is not over the doubled framed base quiver")

    @classmethod
    def build(cls, base, field, dims, framing_dims, maps) -> "DoubledFramedRepresentation":
        maps = _fill_empty_framing(field, dims, framing_dims, maps, starred=True)
        return cls(base, Representation(framed_double_quiver(base), field,
                                        tuple(dims) + tuple(framing_dims), maps))

    @property
    def field(self):
        return self.rep.field

    @property
    def dims(self):
        return self.rep.dims[:self.base.vertex_count]

    @property
    def framing_dims(self):
        return self.rep.dims[self.base.vertex_count:]

    def map(self, key: str) -> Matrix:
        return self.rep.map(key)

    def doubled(self) -> DoubledRepresentation:
        keys = double_quiver(self.base).arrow_ids
        return DoubledRepresentation.build(self.base, self.field, self.dims, {k: self.rep.map(k) for k in keys})

    def framed(self) -> FramedRepresentation:
        keys = frame_quiver(self.base).arrow_ids
        return FramedRepresentation.build(self.base, self.field, self.dims, self.framing_dims,
                                          {k: self.rep.map(k) for k in keys})

    def with_field(self, field: Field) -> "DoubledFramedRepresentation":
        return DoubledFramedRepresentation(self.base, Representation(
            self.rep.quiver, field, self.rep.dims, {k: m.with_field(field) for k, m in self.rep.maps.items()}))


# ---------------------------------------------------------------- hat transform


def hat_quiver(q: Quiver, framing_dims: Sequence[int], doubled: bool = False) -> Quiver:
    """Base (or doubled) arrows plus one arrow ``r{i}_{k}: i -> inf`` per framing row."""
    n = q.vertex_count
    arrows = list((double_quiver(q) if doubled else q).arrows)
    for i in range(n):
        for k in range(framing_dims[i]):
            arrows.append(Arrow(f"r{i}_{k}", i, n))
            if doubled:
                arrows.append(Arrow(f"c{i}_{k}", n, i))
    return Quiver(n + 1, arrows)


def hat_transform(v) -> Representation:
    """Split framing maps into rows (and, for doubled data, starred maps into columns)."""
    doubled = isinstance(v, DoubledFramedRepresentation)
    if not doubled and not isinstance(v, FramedRepresentation):
        raise QuivermodError("hat_transform expects a framed representation")
    q, f = v.base, v.field
    n = q.vertex_count
    hq = hat_quiver(q, v.framing_dims, doubled)
    base_keys = (double_quiver(q) if doubled else q).arrow_ids
    maps = {k: v.map(k) for k in base_keys}
    for i in range(n):
        b = v.map(f"b{i}")
        for k in range(v.framing_dims[i]):
            maps[f"r{i}_{k}"] = Matrix(f, [b.row(k)], 1, v.dims[i])
            if doubled:
                c = v.map(f"b{i}*")
                maps[f"c{i}_{k}"] = Matrix(f, [[x] for x in c.column(k)], v.dims[i], 1)
    return Representation(hq, f, tuple(v.dims) + (1,), maps)


def hat_inverse(hat: Representation, base: Quiver, framing_dims: Sequence[int]):
    n = base.vertex_count
    doubled = hat.quiver == hat_quiver(base, framing_dims, True)
    if not doubled and hat.quiver != hat_quiver(base, framing_dims):
        raise DimensionMismatch("representation is not over the hat quiver of this base and framing")
    f = hat.field
    dims = hat.dims[:n]
    base_keys = (double_quiver(base) if doubled else base).arrow_ids
    maps = {k: hat.map(k) for k in base_keys}
    for i in range(n):
        rows = [hat.map(f"r{i}_{k}").row(0) for k in range(framing_dims[i])]
        maps[f"b{i}"] = Matrix(f, rows, framing_dims[i], dims[i])
        if doubled:
            cols = [hat.map(f"c{i}_{k}").column(0) for k in range(framing_dims[i])]
            maps[f"b{i}*"] = Matrix.from_columns(f, cols, dims[i]) if cols else Matrix.zeros(f, dims[i], 0)
    cls = DoubledFramedRepresentation if doubled else FramedRepresentation
    return cls.build(base, f, dims, framing_dims, maps)


# ---------------------------------------------------------------- symplectic structure


def symplectic_form(t1: DoubledRepresentation, t2: DoubledRepresentation):
    if t1.base != t2.base or t1.dims != t2.dims or t1.field != t2.field:
        raise DimensionMismatch("tangent vectors must share quiver, dimensions and field")
    f = t1.field
    total = f.zero
    for a in t1.base.arrow_ids:
        total = f(total + (t1.f(a) @ t2.fstar(a)).trace() - (t2.f(a) @ t1.fstar(a)).trace())
    return total


def _unframed_mu(base: Quiver, field: Field, dims, get) -> list[Matrix]:
    mu = [Matrix.zeros(field, d, d) for d in dims]
    for a in base.arrows:
        fa, fs = get(a.id), get(_star(a.id))
        mu[a.target] = mu[a.target] + fa @ fs
        mu[a.source] = mu[a.source] - fs @ fa
    return mu


def moment_map(v: DoubledRepresentation) -> tuple[Matrix, ...]:
    return tuple(_unframed_mu(v.base, v.field, v.dims, v.rep.map))


def framed_moment_map(v: DoubledFramedRepresentation) -> tuple[Matrix, ...]:
    mu = _unframed_mu(v.base, v.field, v.dims, v.rep.map)
    for i in range(v.base.vertex_count):
        mu[i] = mu[i] - v.map(f"b{i}*") @ v.map(f"b{i}")
    return tuple(mu)


@dataclass(frozen=True)
class PreprojectiveCheck:
    residuals: tuple
    holds: bool
    trace_obstruction: bool  # True when lambda . alpha != 0 forces an empty fiber


def _residuals(mu, lam, field):
    res = tuple(m - Matrix.scalar(field, m.rows, field(x)) for m, x in zip(mu, lam))
    return res, all(r.is_zero() for r in res)


def check_deformed_preprojective(v: DoubledRepresentation, lam: Sequence) -> PreprojectiveCheck:
    lam = v.base.check_vector(lam, "deformation parameter")
    f = v.field
    res, ok = _residuals(moment_map(v), lam, f)
    obstruction = f(dot([f(x) for x in lam], v.dims)) != 0
    return PreprojectiveCheck(res, ok, obstruction)


def check_framed_preprojective(v: DoubledFramedRepresentation, lam: Sequence) -> PreprojectiveCheck:
    """Residuals of the framed moment map; the framing term breaks the trace identity."""
    lam = v.base.check_vector(lam, "deformation parameter")
    res, ok = _residuals(framed_moment_map(v), lam, v.field)
    return PreprojectiveCheck(res, ok, False)


# ---------------------------------------------------------------- stability


def framed_semistable_positive(v: DoubledFramedRepresentation) -> StabilityVerdict:
    """Stable iff no nonzero subrepresentation of the double sits inside ``ker f_b``."""
    d = v.doubled()
    kernels = [kernel_basis(v.map(f"b{i}")) for i in range(v.base.vertex_count)]
    w = largest_subrep_within(d.rep, kernels)
    if w.is_zero():
        return StabilityVerdict(STABLE)
    return StabilityVerdict(UNSTABLE, w, sum(w.beta))


def framed_semistable_negative(v: DoubledFramedRepresentation) -> StabilityVerdict:
    """Stable iff the columns of the ``f_b*`` generate everything."""
    d = v.doubled()
    seeds = [v.map(f"b{i}*").columns() for i in range(v.base.vertex_count)]
    w = generated_subrep(d.rep, seeds)
    if w.beta == tuple(v.dims):
        return StabilityVerdict(STABLE)
    return StabilityVerdict(UNSTABLE, w, -sum(w.beta))


def nakajima_general_stability(v: DoubledFramedRepresentation, theta: Sequence[int], p: int | None = None,
                               budget: int = DEFAULT_BUDGET, jobs: int = 1) -> StabilityVerdict:
    """Decide the two subrepresentation inequalities by enumeration over ``F_p``.

    (1) ``W`` inside every ``ker f_b{i}`` forces ``theta . beta <= 0``;
    (2) ``W`` containing every ``Im f_b{i}*`` forces ``theta . beta <= theta . alpha``.
    Strict inequalities (for ``W != 0`` resp. ``W != V``) give stability.
    """
    theta = tuple(v.base.check_vector(theta, "stability parameter"))
    if not v.field.finite:
        if p is None:
            raise QuivermodError("a prime is required to enumerate subrepresentations of rational data")
        v = DoubledFramedRepresentation(v.base, reduce_mod_p(v.rep, p))
    elif p is not None and p != v.field.p:
        raise QuivermodError(f"representation is over F_{v.field.p}, not F_{p}")
    n = v.base.vertex_count
    alpha = tuple(v.dims)
    ta = dot(theta, alpha)
    kernels = [kernel_basis(v.map(f"b{i}")) for i in range(n)]
    images = [image_basis(v.map(f"b{i}*")) for i in range(n)]
    weak = None
    for w in enumerate_subreps(v.doubled().rep, budget, jobs):
        tb = dot(theta, w.beta)
        in_kernel = all(s.issubspace(k) for s, k in zip(w.subspaces, kernels))
        over_image = all(im.issubspace(s) for s, im in zip(w.subspaces, images))
        if in_kernel:
            if tb > 0:
                return StabilityVerdict(UNSTABLE, w, tb)
            if tb == 0 and not w.is_zero() and weak is None:
                weak = w
        if over_image:
            if tb > ta:
                return StabilityVerdict(UNSTABLE, w, tb)
            if tb == ta and w.beta != alpha and weak is None:
                weak = w
    if weak is not None:
        return StabilityVerdict(SEMISTABLE, weak, dot(theta, weak.beta))
    return StabilityVerdict(STABLE)


# ---------------------------------------------------------------- A_n flags and Springer data


@dataclass(frozen=True)
class Flag:
    """``subspaces[0] > subspaces[1] > ...`` inside a common ambient space."""

    subspaces: tuple

    def __post_init__(self):
        subs = tuple(self.subspaces)
        for big, small in zip(subs, subs[1:]):
            if not small.issubspace(big) or small.dim >= big.dim:
                raise QuivermodError("flag is not strictly decreasing")
        object.__setattr__(self, "subspaces", subs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)


def _an_parts(v):
    if not isinstance(v, (FramedRepresentation, DoubledFramedRepresentation)):
        raise QuivermodError("expected a framed A_n representation")
    n = v.base.vertex_count
    if v.base != an_quiver(n):
        raise QuivermodError("base quiver is not the A_n quiver a{k}: k -> k-1")
    if any(v.framing_dims[1:]):
        raise QuivermodError("the A_n model frames vertex 0 only")
    return n


def an_flag_from_framed(v) -> Flag:
    n = _an_parts(v)
    maps = [("b0", v.map("b0"))] + [(f"a{k}", v.map(f"a{k}")) for k in range(1, n)]
    for name, m in maps:
        if m.rank() != m.cols:
            raise PreconditionFailed(f"not stable: {name} is not injective")
    alpha0 = v.framing_dims[0]
    f = v.field
    spaces = [Subspace.full(f, alpha0)]
    comp = Matrix.identity(f, alpha0)
    for name, m in maps:
        comp = comp @ m
        spaces.append(image_basis(comp))
    return Flag(tuple(spaces))


def lambda_from_zeta(zeta: Sequence) -> tuple:
    zeta = list(zeta)
    if not zeta:
        return ()
    return tuple([-zeta[0]] + [zeta[k - 1] - zeta[k] for k in range(1, len(zeta))])


@dataclass(frozen=True)
class SpringerData:
    flag: Flag
    f: Matrix
    compatible: bool


def springer_data(v: DoubledFramedRepresentation, zeta: Sequence | None = None) -> SpringerData:
    """Flag, ``f = f_b0 f_b0*`` and whether ``(f - zeta_i)(V_i)`` lies in ``V_(i+1)``."""
    n = _an_parts(v)
    if not isinstance(v, DoubledFramedRepresentation):
        raise QuivermodError("springer_data needs doubled framed data")
    fld = v.field
    zeta = [fld(z) for z in (zeta if zeta is not None else [0] * n)]
    if len(zeta) != n:
        raise DimensionMismatch(f"expected {n} shifts, got {len(zeta)}")
    flag = an_flag_from_framed(v)
    lam = lambda_from_zeta(zeta)
    if fld(dot(lam, v.dims)) != 0:
        raise PreconditionFailed("lambda . alpha is nonzero")
    if not check_framed_preprojective(v, lam).holds:
        raise PreconditionFailed("data is not in the moment-map fiber over lambda")
    f = v.map("b0") @ v.map("b0*")
    spaces = flag.subspaces + (Subspace.zero(fld, flag.subspaces[0].ambient_dim),)
    shifts = [fld.zero] + zeta
    ok = True
    for i in range(n + 1):
        g = f - Matrix.scalar(fld, f.rows, shifts[i])
        if not spaces[i].image(g).issubspace(spaces[i + 1]):
            ok = False
            break
    return SpringerData(flag, f, ok)


def partition_nu(alpha: Sequence[int], alpha0: int) -> tuple[int, ...]:
    seq = [alpha0] + list(alpha)
    if any(a <= b for a, b in zip(seq, seq[1:])) or (alpha and alpha[-1] <= 0) or alpha0 <= 0:
        raise QuivermodError("need alpha_0 > alpha_1 > ... > alpha_n > 0")
    nu_hat = [a - b for a, b in zip(seq, seq[1:])] + [seq[-1]]
    return tuple(sum(1 for x in nu_hat if x >= i) for i in range(1, max(nu_hat) + 1))


def kraft_procesi_hypothesis(alpha: Sequence[int], alpha0: int) -> bool:
    seq = [alpha0] + list(alpha)
    nu_hat = [a - b for a, b in zip(seq, seq[1:])] + [seq[-1]]
    return all(x >= y for x, y in zip(nu_hat, nu_hat[1:]))


def jordan_type(m: Matrix) -> tuple[int, ...]:
    """Block sizes of a nilpotent matrix, largest first."""
    if not m.is_square():
        raise DimensionMismatch("jordan_type needs a square matrix")
    n = m.rows
    if not (m ** n).is_zero():
        raise QuivermodError("matrix is not nilpotent")
    ranks = [n]
    power = Matrix.identity(m.field, n)
    while ranks[-1] > 0:
        power = power @ m
        ranks.append(power.rank())
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]  # blocks of size >= k
    return tuple(sum(1 for c in at_least if c >= i) for i in range(1, (at_least[0] if at_least else 0) + 1))


def dominates(big: Sequence[int], small: Sequence[int]) -> bool:
    """Dominance order on partitions of the same integer."""
    if sum(big) != sum(small):
        return False
    width = max(len(big), len(small))
    b = list(big) + [0] * (width - len(big))
    s = list(small) + [0] * (width - len(small))
    tb = ts = 0
    for x, y in zip(b, s):
        tb += x
        ts += y
        if tb < ts:
            return False
    return True


def flag_dimension(alpha: Sequence[int], alpha0: int) -> int:
    seq = [alpha0] + list(alpha)
    return sum(seq[i] * (seq[i - 1] - seq[i]) for i in range(1, len(seq)))


def framed_an_from_flag(alpha: Sequence[int], alpha0: int, g: Matrix, fprime: Matrix,
                        zeta: Sequence | None = None) -> DoubledFramedRepresentation:
    """Doubled framed ``A_n`` data from a flag basis ``g`` and ``F' = g^-1 f g``.

    The leading ``alpha_i`` columns of ``g`` span ``V_i``; ``F'`` must preserve
    the coordinate flag with ``F'`` acting as ``zeta_i`` on ``V_i / V_(i+1)``
    and as zero on ``V_0 / V_1``.  The result lies over
    ``lambda_from_zeta(zeta)``.
    """
    n = len(alpha)
    fld = g.field
    zeta = [fld(z) for z in (zeta if zeta is not None else [0] * n)]
    dims = list(alpha)
    seq = [alpha0] + dims
    ginv = g.inverse()
    maps = {"b0": g.submatrix(range(alpha0), range(seq[1])),
            "b0*": fprime.submatrix(range(seq[1]), range(alpha0)) @ ginv}
    for k in range(1, n):
        # arrow a{k}: vertex k (space V_(k+1)) -> vertex k-1 (space V_k)
        src, dst = seq[k + 1], seq[k]
        maps[f"a{k}"] = Matrix(fld, [[1 if r == c else 0 for c in range(src)] for r in range(dst)], dst, src)
        shifted = fprime - Matrix.scalar(fld, alpha0, zeta[k - 1])
        maps[f"a{k}*"] = shifted.submatrix(range(src), range(dst))
    framing = [alpha0] + [0] * (n - 1)
    return DoubledFramedRepresentation.build(an_quiver(n), fld, dims, framing, maps)


def random_framed_an_fixture(alpha: Sequence[int], alpha0: int, rng: random.Random,
                             field: Field = QQ) -> DoubledFramedRepresentation:
    """Random stable data over ``lambda = 0``: random flag basis, random strictly upper ``F'``."""
    seq = [alpha0] + list(alpha)
    g = random_invertible(field, alpha0, rng)
    # coordinate c lies in V_i exactly when i <= depth[c]
    depth = [max(i for i in range(len(seq)) if c < seq[i]) for c in range(alpha0)]
    # F' sends V_i into V_(i+1): entry (r, c) may be nonzero only when depth[r] > depth[c]
    fprime = Matrix(field, [[rng.randint(-2, 2) if depth[r] > depth[c] else 0 for c in range(alpha0)]
                            for r in range(alpha0)], alpha0, alpha0)
    return framed_an_from_flag(alpha, alpha0, g, fprime)
