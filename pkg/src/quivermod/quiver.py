"""Quivers, representations, paths, morphisms and the base-change group action."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import BadPrime, DimensionMismatch, NotInvariant, QuivermodError
from .linalg import Field, GF, Matrix, QQ, Subspace, block_diag, random_invertible, random_matrix

__all__ = [
    "Arrow", "Quiver", "Path", "Representation", "RepMorphism", "GroupElement",
    "evaluate_path", "is_morphism", "direct_sum", "opposite", "restrict_to_subspaces",
    "inclusion_morphism", "quotient_representation", "act", "reduce_mod_p",
    "random_representation",
]


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


class Quiver:
    """A finite multidigraph with named arrows; loops and parallel arrows allowed."""

    __slots__ = ("vertex_count", "arrows", "_by_id")

    def __init__(self, vertex_count: int, arrows: Iterable = ()):
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
        if vertex_count < 0:
            raise QuivermodError("negative vertex count")
        by_id = {}
        for a in arrows:
            if not (0 <= a.source < vertex_count and 0 <= a.target < vertex_count):
                raise QuivermodError(f"arrow {a.id!r} has an endpoint out of range")
            if a.id in by_id:
                raise QuivermodError(f"duplicate arrow id {a.id!r}")
            by_id[a.id] = a
        self.vertex_count = vertex_count
        self.arrows = arrows
        self._by_id = by_id

    # common quivers
    @classmethod
    def jordan(cls) -> "Quiver":
        return cls(1, [("a", 0, 0)])

    @classmethod
    def a_n(cls, n: int) -> "Quiver":
        """Linear quiver 0 -> 1 -> ... -> n-1 with arrows a1, ..., a(n-1)."""
        return cls(n, [(f"a{k}", k - 1, k) for k in range(1, n)])

    @classmethod
    def kronecker(cls, n: int) -> "Quiver":
        """n parallel arrows a1..an from vertex 0 to vertex 1."""
        return cls(2, [(f"a{k}", 0, 1) for k in range(1, n + 1)])

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise QuivermodError(f"unknown arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._by_id

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def out_arrows(self, i: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == i]

    def in_arrows(self, i: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == i]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, [Arrow(a.id, a.target, a.source) for a in self.arrows])

    def path(self, arrow_ids: Sequence[str]) -> "Path":
        """Path through ``arrow_ids`` in application order (first arrow applied first)."""
        ids = tuple(arrow_ids)
        if not ids:
            raise QuivermodError("use Path.trivial for the empty path")
        arrs = [self.arrow(x) for x in ids]
        for prev, nxt in zip(arrs, arrs[1:]):
            if nxt.source != prev.target:
                raise QuivermodError(f"path not composable at {prev.id!r} -> {nxt.id!r}")
        return Path(ids, arrs[0].source, arrs[-1].target)

    def check_vector(self, vec: Sequence, what: str = "dimension vector") -> tuple:
        vec = tuple(vec)
        if len(vec) != self.vertex_count:
            raise DimensionMismatch(f"{what} of length {len(vec)} for {self.vertex_count} vertices")
        return vec

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertex_count == other.vertex_count \
            and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertex_count, self.arrows))

    def __reduce__(self):
        return (Quiver, (self.vertex_count, self.arrows))

    def __repr__(self):
        arrows = ", ".join(f"{a.id}:{a.source}->{a.target}" for a in self.arrows)
        return f"Quiver({self.vertex_count}; {arrows})"


@dataclass(frozen=True)
class Path:
    """Arrows in application order; an empty tuple is the trivial path at ``source``."""

    arrows: tuple
    source: int
    target: int

    @classmethod
    def trivial(cls, vertex: int) -> "Path":
        return cls((), vertex, vertex)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __len__(self):
        return len(self.arrows)

    def compose(self, first: "Path") -> "Path":
        """``self`` after ``first``."""
        if first.target != self.source:
            raise QuivermodError("paths are not composable")
        return Path(first.arrows + self.arrows, first.source, self.target)

    __mul__ = compose


def _as_matrix(field: Field, m, rows: int, cols: int) -> Matrix:
    if isinstance(m, Matrix):
        if m.field != field:
            m = m.with_field(field)
    else:
        m = Matrix(field, m, rows, cols)
    if m.shape != (rows, cols):
        raise DimensionMismatch(f"expected a {rows}x{cols} matrix, got {m.rows}x{m.cols}")
    return m


class Representation:
    """Matrices ``maps[a]`` of shape ``dims[target] x dims[source]`` for every arrow."""

    __slots__ = ("quiver", "field", "dims", "_maps")

    def __init__(self, quiver: Quiver, field: Field, dims: Sequence[int], maps: Mapping):
        dims = tuple(int(d) for d in quiver.check_vector(dims))
        if any(d < 0 for d in dims):
            raise DimensionMismatch("negative dimension")
        extra = set(maps) - set(quiver.arrow_ids)
        if extra:
            raise QuivermodError(f"maps given for unknown arrows {sorted(extra)}")
        built = {}
        for a in quiver.arrows:
            if a.id not in maps:
                raise QuivermodError(f"missing map for arrow {a.id!r}")
            try:
                built[a.id] = _as_matrix(field, maps[a.id], dims[a.target], dims[a.source])
            except DimensionMismatch as exc:
                raise DimensionMismatch(f"arrow {a.id!r}: {exc}") from None
        self.quiver = quiver
        self.field = field
        self.dims = dims
        self._maps = MappingProxyType(built)

    @classmethod
    def zero(cls, quiver: Quiver, field: Field, dims: Sequence[int]) -> "Representation":
        dims = tuple(dims)
        return cls(quiver, field, dims,
                   {a.id: Matrix.zeros(field, dims[a.target], dims[a.source]) for a in quiver.arrows})

    @property
    def maps(self) -> Mapping[str, Matrix]:
        return self._maps

    def map(self, arrow_id: str) -> Matrix:
        return self._maps[arrow_id]

    def with_maps(self, **changes) -> "Representation":
        maps = dict(self._maps)
        maps.update(changes)
        return Representation(self.quiver, self.field, self.dims, maps)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.quiver == other.quiver
                and self.field == other.field and self.dims == other.dims
                and dict(self._maps) == dict(other._maps))

    def __hash__(self):
        return hash((self.quiver, self.field, self.dims, tuple(self._maps[a] for a in self.quiver.arrow_ids)))

    def __reduce__(self):
        return (Representation, (self.quiver, self.field, self.dims, dict(self._maps)))

    def __repr__(self):
        return f"Representation(dims={self.dims}, field={self.field!r}, maps={dict(self._maps)})"


def evaluate_path(rep: Representation, path: Path) -> Matrix:
    if path.is_trivial:
        if not 0 <= path.source < rep.quiver.vertex_count:
            raise QuivermodError(f"vertex {path.source} out of range")
        return Matrix.identity(rep.field, rep.dims[path.source])
    checked = rep.quiver.path(path.arrows)
    if (checked.source, checked.target) != (path.source, path.target):
        raise QuivermodError("path endpoints do not match its arrows")
    result = rep.map(path.arrows[0])
    for a in path.arrows[1:]:
        result = rep.map(a) @ result
    return result


@dataclass(frozen=True)
class RepMorphism:
    source: Representation
    target: Representation
    components: tuple

    def __post_init__(self):
        s, t = self.source, self.target
        if s.quiver != t.quiver or s.field != t.field:
            raise DimensionMismatch("morphism between representations of different quivers or fields")
        comps = tuple(_as_matrix(s.field, c, t.dims[i], s.dims[i]) for i, c in enumerate(self.components))
        if len(comps) != s.quiver.vertex_count:
            raise DimensionMismatch("one component per vertex is required")
        object.__setattr__(self, "components", comps)


def is_morphism(phi: RepMorphism) -> bool:
    s, t = phi.source, phi.target
    for a in s.quiver.arrows:
        if phi.components[a.target] @ s.map(a.id) != t.map(a.id) @ phi.components[a.source]:
            return False
    return True


def direct_sum(v: Representation, w: Representation) -> Representation:
    if v.quiver != w.quiver or v.field != w.field:
        raise DimensionMismatch("direct sum needs the same quiver and field")
    dims = tuple(x + y for x, y in zip(v.dims, w.dims))
    return Representation(v.quiver, v.field, dims,
                          {a: block_diag(v.map(a), w.map(a)) for a in v.quiver.arrow_ids})


def opposite(v: Representation) -> Representation:
    return Representation(v.quiver.opposite(), v.field, v.dims, {a: m.T for a, m in v.maps.items()})


def _check_subspaces(v: Representation, subspaces: Sequence[Subspace]) -> tuple:
    subspaces = tuple(subspaces)
    if len(subspaces) != v.quiver.vertex_count:
        raise DimensionMismatch("one subspace per vertex is required")
    for i, s in enumerate(subspaces):
        if s.ambient_dim != v.dims[i] or s.field != v.field:
            raise DimensionMismatch(f"subspace at vertex {i} lives in the wrong ambient space")
    return subspaces


def restrict_to_subspaces(v: Representation, subspaces: Sequence[Subspace]) -> Representation:
    """The subrepresentation on ``subspaces``, written in their canonical bases."""
    subspaces = _check_subspaces(v, subspaces)
    maps = {}
    for a in v.quiver.arrows:
        src, dst = subspaces[a.source], subspaces[a.target]
        cols = []
        for b in src.basis:
            coords = dst.coordinates(v.map(a.id).apply(b))
            if coords is None:
                raise NotInvariant(a.id)
            cols.append(coords)
        maps[a.id] = Matrix.from_columns(v.field, cols, dst.dim) if cols else Matrix.zeros(v.field, dst.dim, 0)
    return Representation(v.quiver, v.field, tuple(s.dim for s in subspaces), maps)


def inclusion_morphism(v: Representation, subspaces: Sequence[Subspace]) -> RepMorphism:
    sub = restrict_to_subspaces(v, subspaces)
    comps = tuple(s.matrix for s in subspaces)
    return RepMorphism(sub, v, comps)


def quotient_representation(v: Representation, subspaces: Sequence[Subspace]) -> Representation:
    """``V / W`` written in the standard complement basis of each ``W_i``."""
    subspaces = _check_subspaces(v, subspaces)
    f = v.field
    keep = [[j for j in range(v.dims[i]) if j not in set(s.pivots)] for i, s in enumerate(subspaces)]

    def reduce(vec, s: Subspace):
        vec = list(vec)
        for p, b in zip(s.pivots, s.basis):
            c = vec[p]
            if c != 0:
                vec = [f(x - c * y) for x, y in zip(vec, b)]
        return vec

    maps = {}
    for a in v.quiver.arrows:
        m = v.map(a.id)
        dst = subspaces[a.target]
        for b in subspaces[a.source].basis:
            if not dst.contains(m.apply(b)):
                raise NotInvariant(a.id)
        cols = []
        for j in keep[a.source]:
            image = reduce(m.column(j), dst)
            cols.append([image[k] for k in keep[a.target]])
        nrows = len(keep[a.target])
        maps[a.id] = Matrix.from_columns(f, cols, nrows) if cols else Matrix.zeros(f, nrows, 0)
    return Representation(v.quiver, f, tuple(len(k) for k in keep), maps)


@dataclass(frozen=True)
class GroupElement:
    """One invertible matrix per vertex."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        for i, g in enumerate(comps):
            if not g.is_square():
                raise DimensionMismatch(f"group component at vertex {i} is not square")
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls, field: Field, dims: Sequence[int]) -> "GroupElement":
        return cls(tuple(Matrix.identity(field, d) for d in dims))

    @classmethod
    def random(cls, field: Field, dims: Sequence[int], rng: random.Random) -> "GroupElement":
        return cls(tuple(random_invertible(field, d, rng) for d in dims))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(tuple(a @ b for a, b in zip(self.components, other.components)))

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(g.inverse() for g in self.components))


def act(g: GroupElement, v: Representation) -> Representation:
    """``(g . V)_a = g_t f_a g_s^{-1}``."""
    if len(g.components) != v.quiver.vertex_count:
        raise DimensionMismatch("one group component per vertex is required")
    for i, c in enumerate(g.components):
        if c.rows != v.dims[i]:
            raise DimensionMismatch(f"group component at vertex {i} has size {c.rows}, expected {v.dims[i]}")
    try:
        inv = [c.inverse() for c in g.components]
    except ZeroDivisionError:
        raise QuivermodError("group element has a singular component") from None
    return Representation(v.quiver, v.field, v.dims,
                          {a.id: g.components[a.target] @ v.map(a.id) @ inv[a.source] for a in v.quiver.arrows})


def reduce_mod_p(v: Representation, p: int) -> Representation:
    if v.field != QQ:
        raise QuivermodError("reduce_mod_p expects a representation over Q")
    field = GF(p)
    bad = [(a, i, j) for a, m in v.maps.items() for i, row in enumerate(m.entries)
           for j, x in enumerate(row) if Fraction(x).denominator % p == 0]
    if bad:
        raise BadPrime(p, bad)
    return Representation(v.quiver, field, v.dims, {a: m.with_field(field) for a, m in v.maps.items()})


def random_representation(quiver: Quiver, field: Field, dims: Sequence[int], rng: random.Random,
                          lo: int = -3, hi: int = 3) -> Representation:
    dims = tuple(dims)
    return Representation(quiver, field, dims,
                          {a.id: random_matrix(field, dims[a.target], dims[a.source], rng, lo, hi)
                           for a in quiver.arrows})
