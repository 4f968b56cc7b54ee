"""King stability, subrepresentation search, one-parameter limits and filtrations.

Exhaustive procedures work over prime fields only, where every subspace of a
vertex space can be listed.  Over Q the closure-based helpers
(:func:`generated_subrep`, :func:`largest_subrep_within`) still give exact
certificates.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import gcd, prod
from typing import Iterator, Sequence

from .errors import BudgetExceeded, DimensionMismatch, NoLimit, NotInvariant, QuivermodError
from .forms import dot
from .linalg import Matrix, Subspace, count_subspaces, enumerate_subspaces, preimage, subspace_intersect
from .quiver import Representation, restrict_to_subspaces

__all__ = [
    "DEFAULT_BUDGET", "STABLE", "SEMISTABLE", "UNSTABLE", "SubrepWitness", "StabilityVerdict", "VertexGrading",
    "enumeration_size", "enumerate_subreps", "decide_theta_stability_exhaustive", "shift_theta",
    "generated_subrep", "largest_subrep_within", "hm_pairing", "character_pairing",
    "one_parameter_limit", "grading_for_filtration", "associated_graded",
    "is_simple_exhaustive", "is_semisimple_exhaustive",
]

DEFAULT_BUDGET = 10**7

STABLE = "stable"
SEMISTABLE = "semistable-not-stable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class SubrepWitness:
    subspaces: tuple
    beta: tuple = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        object.__setattr__(self, "beta", tuple(s.dim for s in self.subspaces))

    def is_zero(self) -> bool:
        return not any(self.beta)

    def is_full(self) -> bool:
        return all(s.is_full() for s in self.subspaces)

    def contains(self, other: "SubrepWitness") -> bool:
        return all(o.issubspace(s) for s, o in zip(self.subspaces, other.subspaces))


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    witness: SubrepWitness | None = None
    theta_beta: int | None = None

    @property
    def semistable(self) -> bool:
        return self.status != UNSTABLE

    @property
    def stable(self) -> bool:
        return self.status == STABLE


# ---------------------------------------------------------------- enumeration


def _require_prime(v: Representation):
    if not v.field.finite:
        raise QuivermodError("exhaustive search needs a representation over a prime field")


def enumeration_size(v: Representation) -> int:
    _require_prime(v)
    return prod(count_subspaces(v.field.p, d) for d in v.dims)


def _invariant(v: Representation, arrow, w_src: Subspace, w_dst: Subspace) -> bool:
    m = v.map(arrow.id)
    return all(w_dst.contains(m.apply(b)) for b in w_src.basis)


def _search(v: Representation, first_choices: Sequence[int]) -> list[tuple[int, ...]]:
    """Index tuples of invariant subspace choices, depth-first in vertex order."""
    n = v.quiver.vertex_count
    tables = [enumerate_subspaces(v.field, d) for d in v.dims]
    # arrows checked once both endpoints are fixed
    checks = [[a for a in v.quiver.arrows if max(a.source, a.target) == i] for i in range(n)]
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(i: int):
        if i == n:
            out.append(tuple(chosen))
            return
        options = first_choices if i == 0 else range(len(tables[i]))
        for idx in options:
            chosen.append(idx)
            ok = all(_invariant(v, a, tables[a.source][chosen[a.source]], tables[a.target][chosen[a.target]])
                     for a in checks[i])
            if ok:
                rec(i + 1)
            chosen.pop()

    if n == 0:
        return [()]
    rec(0)
    return out


def _search_chunk(args):
    v, chunk = args
    return _search(v, chunk)


def enumerate_subreps(v: Representation, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> Iterator[SubrepWitness]:
    """Every subrepresentation of ``v`` in canonical order.

    Order: the per-vertex subspace index tuple, lexicographically, where each
    vertex lists subspaces as :func:`enumerate_subspaces` does.  The order does
    not depend on ``jobs``.
    """
    size = enumeration_size(v)
    if size > budget:
        raise BudgetExceeded(size, budget)
    n = v.quiver.vertex_count
    tables = [enumerate_subspaces(v.field, d) for d in v.dims]
    if n == 0:
        results = [()]
    elif jobs and jobs > 1 and len(tables[0]) > 1:
        idx = list(range(len(tables[0])))
        step = max(1, -(-len(idx) // (4 * jobs)))
        chunks = [idx[k:k + step] for k in range(0, len(idx), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search_chunk, [(v, c) for c in chunks]))
        results = [t for part in parts for t in part]
    else:
        results = _search(v, range(len(tables[0])))
    for t in results:
        yield SubrepWitness(tuple(tables[i][k] for i, k in enumerate(t)))


def decide_theta_stability_exhaustive(v: Representation, theta: Sequence[int], budget: int = DEFAULT_BUDGET,
                                      jobs: int = 1) -> StabilityVerdict:
    """King's criterion decided by listing every subrepresentation over ``F_p``.

    Unstable verdicts carry the first subrepresentation maximizing ``theta . beta``;
    semistable-not-stable verdicts carry the first proper nonzero one with
    ``theta . beta = 0``.
    """
    _require_prime(v)
    theta = tuple(v.quiver.check_vector(theta, "stability parameter"))
    if not any(v.dims):
        raise QuivermodError("stability of the zero representation is not defined")
    if dot(theta, v.dims) != 0:
        raise QuivermodError("theta-alpha nonzero")
    best = None
    best_val = 0
    tie = None
    for w in enumerate_subreps(v, budget, jobs):
        if w.is_zero() or w.beta == v.dims:
            continue
        val = dot(theta, w.beta)
        if val > best_val:
            best, best_val = w, val
        elif val == 0 and tie is None:
            tie = w
    if best is not None:
        return StabilityVerdict(UNSTABLE, best, best_val)
    if tie is not None:
        return StabilityVerdict(SEMISTABLE, tie, 0)
    return StabilityVerdict(STABLE)


def shift_theta(theta: Sequence[int], alpha: Sequence[int]) -> tuple[tuple[int, ...], int, int]:
    """Rescale and shift ``theta`` so that it pairs to zero with ``alpha``.

    Returns ``(theta', c, k)`` with ``theta' = c * theta + k * (1, ..., 1)`` and
    ``c > 0`` minimal; ``c = 1`` whenever an integral shift suffices.
    """
    total = sum(alpha)
    if total == 0:
        raise QuivermodError("cannot shift against the zero dimension vector")
    ta = dot(theta, alpha)
    g = gcd(ta, total)
    c, k = total // g, -ta // g
    return tuple(c * t + k for t in theta), c, k


# ---------------------------------------------------------------- closures


def _witness_from(v: Representation, spaces) -> SubrepWitness:
    return SubrepWitness(tuple(spaces))


def generated_subrep(v: Representation, seeds: Sequence[Sequence]) -> SubrepWitness:
    """Smallest subrepresentation containing ``seeds[i]`` at each vertex ``i``."""
    if len(seeds) != v.quiver.vertex_count:
        raise DimensionMismatch("one seed list per vertex is required")
    w = [Subspace.span(v.field, v.dims[i], seeds[i]) for i in range(v.quiver.vertex_count)]
    changed = True
    while changed:
        changed = False
        for a in v.quiver.arrows:
            m = v.map(a.id)
            new = Subspace.span(v.field, v.dims[a.target],
                                w[a.target].basis + tuple(m.apply(b) for b in w[a.source].basis))
            if new.dim > w[a.target].dim:
                w[a.target] = new
                changed = True
    return _witness_from(v, w)


def largest_subrep_within(v: Representation, k: Sequence[Subspace]) -> SubrepWitness:
    """Largest subrepresentation ``W`` with ``W_i`` contained in ``k[i]``."""
    if len(k) != v.quiver.vertex_count:
        raise DimensionMismatch("one constraint subspace per vertex is required")
    w = list(k)
    for i, s in enumerate(w):
        if s.ambient_dim != v.dims[i]:
            raise DimensionMismatch(f"constraint at vertex {i} has the wrong ambient dimension")
    changed = True
    while changed:
        changed = False
        for a in v.quiver.arrows:
            new = subspace_intersect(w[a.source], preimage(v.map(a.id), w[a.target]))
            if new.dim < w[a.source].dim:
                w[a.source] = new
                changed = True
    return _witness_from(v, w)


# ---------------------------------------------------------------- one-parameter subgroups


def hm_pairing(theta: Sequence[int], filtration_dims: Sequence[Sequence[int]],
               alpha: Sequence[int] | None = None) -> int:
    """``-sum_k (n - k + 1) theta . beta_k`` for graded pieces ``beta_1..beta_n``."""
    pieces = [tuple(b) for b in filtration_dims]
    if not pieces:
        raise QuivermodError("empty filtration")
    total = tuple(sum(col) for col in zip(*pieces))
    if alpha is not None and total != tuple(alpha):
        raise QuivermodError(f"sum mismatch: pieces add to {total}, expected {tuple(alpha)}")
    if dot(theta, total) != 0:
        raise QuivermodError("sum mismatch: theta does not vanish on the total dimension vector")
    n = len(pieces)
    return -sum((n - k + 1) * dot(theta, b) for k, b in enumerate(pieces, start=1))


@dataclass(frozen=True)
class VertexGrading:
    """Integer weights per basis vector at each vertex.

    ``bases[i]`` holds the basis as columns (identity if omitted).  The
    associated subgroup acts by ``t**(-k)`` on a weight ``k`` vector.
    """

    weights: tuple
    bases: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in w) for w in self.weights))
        if self.bases is not None:
            object.__setattr__(self, "bases", tuple(self.bases))

    def basis(self, v: Representation, i: int) -> Matrix:
        if self.bases is None:
            return Matrix.identity(v.field, v.dims[i])
        return self.bases[i]


def character_pairing(theta: Sequence[int], grading: VertexGrading) -> int:
    """Exponent of ``t`` in ``prod_i det(lambda(t)_i)**(-theta_i)``."""
    return sum(t * sum(w) for t, w in zip(theta, grading.weights))


def _check_grading(v: Representation, g: VertexGrading):
    if len(g.weights) != v.quiver.vertex_count:
        raise DimensionMismatch("one weight list per vertex is required")
    for i, w in enumerate(g.weights):
        if len(w) != v.dims[i]:
            raise DimensionMismatch(f"vertex {i} has {v.dims[i]} basis vectors but {len(w)} weights")
        b = g.basis(v, i)
        if b.shape != (v.dims[i], v.dims[i]) or not b.is_invertible():
            raise DimensionMismatch(f"grading basis at vertex {i} is not an invertible {v.dims[i]}-square")


def one_parameter_limit(v: Representation, g: VertexGrading, coordinates: str = "original") -> Representation:
    """``lim_{t->0} lambda(t) . V``; raises :class:`NoLimit` when it does not exist.

    In the grading basis, the block from source weight ``l`` to target weight
    ``k`` scales by ``t**(l - k)``; blocks with ``k > l`` must vanish, blocks
    with ``k < l`` die in the limit and diagonal blocks survive.
    ``coordinates="grading"`` returns the limit in the grading basis.
    """
    _check_grading(v, g)
    if coordinates not in ("original", "grading"):
        raise QuivermodError(f"unknown coordinates {coordinates!r}")
    bases = [g.basis(v, i) for i in range(v.quiver.vertex_count)]
    invs = [b.inverse() for b in bases]
    f = v.field
    maps = {}
    for a in v.quiver.arrows:
        fp = invs[a.target] @ v.map(a.id) @ bases[a.source]
        wt, ws = g.weights[a.target], g.weights[a.source]
        rows = []
        for r in range(fp.rows):
            row = []
            for c in range(fp.cols):
                x = fp.entries[r][c]
                if wt[r] > ws[c] and x != 0:
                    raise NoLimit(a.id, ws[c], wt[r])
                row.append(x if wt[r] == ws[c] else f.zero)
            rows.append(row)
        lim = Matrix(f, rows, fp.rows, fp.cols)
        maps[a.id] = lim if coordinates == "grading" else bases[a.target] @ lim @ invs[a.source]
    return Representation(v.quiver, f, v.dims, maps)


def _normalize_filtration(v: Representation, filtration) -> list[tuple]:
    steps = []
    for item in filtration:
        spaces = item.subspaces if isinstance(item, SubrepWitness) else tuple(item)
        if len(spaces) != v.quiver.vertex_count:
            raise DimensionMismatch("filtration step needs one subspace per vertex")
        for i, s in enumerate(spaces):
            if s.ambient_dim != v.dims[i]:
                raise DimensionMismatch(f"filtration subspace at vertex {i} has the wrong ambient dimension")
        restrict_to_subspaces(v, spaces)  # raises NotInvariant
        steps.append(spaces)
    zero = tuple(Subspace.zero(v.field, d) for d in v.dims)
    full = tuple(Subspace.full(v.field, d) for d in v.dims)
    if not steps or steps[0] != zero:
        steps.insert(0, zero)
    if steps[-1] != full:
        steps.append(full)
    for lo, hi in zip(steps, steps[1:]):
        if not all(a.issubspace(b) for a, b in zip(lo, hi)) or lo == hi:
            raise QuivermodError("filtration is not strictly nested")
    return steps


def grading_for_filtration(v: Representation, filtration) -> VertexGrading:
    """Weight ``k`` on a complement of ``V_(k-1)`` inside ``V_k`` (adapted bases)."""
    steps = _normalize_filtration(v, filtration)
    weights, bases = [], []
    for i in range(v.quiver.vertex_count):
        cols: list = []
        wts: list[int] = []
        current = Subspace.zero(v.field, v.dims[i])
        for k, spaces in enumerate(steps[1:], start=1):
            for b in spaces[i].basis:
                if not current.contains(b):
                    cols.append(b)
                    wts.append(k)
                    current = Subspace.span(v.field, v.dims[i], cols)
        weights.append(tuple(wts))
        bases.append(Matrix.from_columns(v.field, cols, v.dims[i]) if cols
                     else Matrix.zeros(v.field, 0, 0))
    return VertexGrading(tuple(weights), tuple(bases))


def associated_graded(v: Representation, filtration) -> Representation:
    """Direct sum of the successive quotients, in adapted bases.

    Each map is block diagonal: block ``k`` is the map induced on
    ``V_k / V_(k-1)`` written in the adapted complement basis.
    """
    g = grading_for_filtration(v, filtration)
    f = v.field
    maps = {}
    for a in v.quiver.arrows:
        bs, bt = g.bases[a.source], g.bases[a.target]
        bt_inv = bt.inverse()
        ws, wt = g.weights[a.source], g.weights[a.target]
        rows = [[f.zero] * v.dims[a.source] for _ in range(v.dims[a.target])]
        m = v.map(a.id)
        for c in range(v.dims[a.source]):
            coords = bt_inv.apply(m.apply(bs.column(c)))
            for r in range(v.dims[a.target]):
                if wt[r] == ws[c]:
                    rows[r][c] = coords[r]
                elif wt[r] > ws[c] and coords[r] != 0:
                    raise NotInvariant(a.id)
        maps[a.id] = Matrix(f, rows, v.dims[a.target], v.dims[a.source])
    return Representation(v.quiver, f, v.dims, maps)


# ---------------------------------------------------------------- simplicity


def _projective_vectors(p: int, d: int) -> Iterator[tuple]:
    """Nonzero vectors of ``F_p^d`` with first nonzero coordinate 1."""
    from itertools import product
    for lead in range(d):
        for tail in product(range(p), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + tail


def is_simple_exhaustive(v: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    _require_prime(v)
    p = v.field.p
    size = sum((p**d - 1) // (p - 1) for d in v.dims)
    if size > budget:
        raise BudgetExceeded(size, budget)
    if not any(v.dims):
        return False
    n = v.quiver.vertex_count
    for i in range(n):
        for vec in _projective_vectors(p, v.dims[i]):
            seeds = [[] for _ in range(n)]
            seeds[i] = [vec]
            if generated_subrep(v, seeds).beta != v.dims:
                return False
    return True


def is_semisimple_exhaustive(v: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    subreps = list(enumerate_subreps(v, budget))
    for w in subreps:
        if not any(
            all(subspace_intersect(a, b).is_zero() and a.dim + b.dim == a.ambient_dim
                for a, b in zip(w.subspaces, u.subspaces))
            for u in subreps
        ):
            return False
    return True
