"""Trace invariants of cycles and the characteristic-polynomial quotient map."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import QuivermodError
from .linalg import Matrix, char_poly
from .quiver import Quiver, Representation, evaluate_path

__all__ = ["CycleClass", "InvariantFingerprint", "enumerate_cycles", "trace_invariant",
           "fingerprint", "jordan_quotient_map", "least_rotation"]


def least_rotation(seq: Sequence) -> tuple:
    seq = tuple(seq)
    if not seq:
        return seq
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


@dataclass(frozen=True)
class CycleClass:
    """A closed path, arrows in application order, stored as its least rotation."""

    arrows: tuple

    def __post_init__(self):
        if not self.arrows:
            raise QuivermodError("a cycle needs at least one arrow")
        object.__setattr__(self, "arrows", least_rotation(self.arrows))

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return "".join(a if len(a) == 1 else f"[{a}]" for a in self.arrows)


def enumerate_cycles(q: Quiver, max_len: int) -> list[CycleClass]:
    """Cycles of length ``1..max_len`` up to rotation, sorted by length then arrow ids."""
    if max_len < 1:
        raise QuivermodError("cycle length bound must be at least 1")
    found: set[tuple] = set()

    def walk(start: int, at: int, prefix: list):
        for a in q.out_arrows(at):
            prefix.append(a.id)
            if a.target == start:
                found.add(least_rotation(prefix))
            if len(prefix) < max_len:
                walk(start, a.target, prefix)
            prefix.pop()

    for v in range(q.vertex_count):
        walk(v, v, [])
    return [CycleClass(c) for c in sorted(found, key=lambda c: (len(c), c))]


def trace_invariant(v: Representation, cycle: CycleClass):
    path = v.quiver.path(cycle.arrows)
    if path.source != path.target:
        raise QuivermodError("not a closed path")
    return evaluate_path(v, path).trace()


@dataclass(frozen=True)
class InvariantFingerprint:
    entries: tuple  # ((CycleClass, value), ...)

    @property
    def cycles(self) -> tuple:
        return tuple(c for c, _ in self.entries)

    @property
    def values(self) -> tuple:
        return tuple(x for _, x in self.entries)

    def __len__(self):
        return len(self.entries)


def fingerprint(v: Representation, max_len: int | None = None) -> InvariantFingerprint:
    """Traces over all cycles up to ``max_len`` (default: total dimension, at least 1)."""
    if max_len is None:
        max_len = max(1, sum(v.dims))
    return InvariantFingerprint(tuple((c, trace_invariant(v, c)) for c in enumerate_cycles(v.quiver, max_len)))


def jordan_quotient_map(b: Matrix) -> tuple:
    """Characteristic-polynomial coefficients; for 2x2 this is ``(det B, -tr B)``."""
    return char_poly(b)
