"""Euler form, Tits form, slopes, dimension counts and bounded positive roots."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import DimensionMismatch, QuivermodError
from .quiver import Quiver

__all__ = [
    "dot", "euler_form", "tits_form", "symmetrized_form", "slope", "moduli_dimension",
    "framed_moduli_dimension", "nakajima_dimension", "positive_roots_bounded", "is_generic",
]


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatch(f"length mismatch {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def euler_form(q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    alpha = q.check_vector(alpha)
    beta = q.check_vector(beta)
    return dot(alpha, beta) - sum(alpha[a.source] * beta[a.target] for a in q.arrows)


def tits_form(q: Quiver, alpha: Sequence[int]) -> int:
    return euler_form(q, alpha, alpha)


def symmetrized_form(q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    return euler_form(q, alpha, beta) + euler_form(q, beta, alpha)


def slope(theta: Sequence[int], alpha: Sequence[int]) -> Fraction:
    total = sum(alpha)
    if total == 0:
        raise QuivermodError("slope of the zero dimension vector")
    return Fraction(dot(theta, alpha), total)


def moduli_dimension(q: Quiver, alpha: Sequence[int]) -> int:
    return 1 - tits_form(q, alpha)


def framed_moduli_dimension(q: Quiver, alpha: Sequence[int], alpha_prime: Sequence[int]) -> int:
    return dot(q.check_vector(alpha), q.check_vector(alpha_prime, "framing vector")) - tits_form(q, alpha)


def nakajima_dimension(q: Quiver, alpha: Sequence[int], alpha_prime: Sequence[int]) -> int:
    return 2 * framed_moduli_dimension(q, alpha, alpha_prime)


def positive_roots_bounded(q: Quiver, alpha: Sequence[int]) -> list[tuple[int, ...]]:
    """Nonzero ``gamma <= alpha`` with ``(gamma, gamma) <= 2``, in lexicographic order."""
    alpha = q.check_vector(alpha)
    if any(a < 0 for a in alpha):
        raise QuivermodError("dimension vector with a negative entry")
    out = []
    for gamma in product(*(range(a + 1) for a in alpha)):
        if any(gamma) and symmetrized_form(q, gamma, gamma) <= 2:
            out.append(gamma)
    return out


def is_generic(q: Quiver, theta: Sequence, lam: Sequence, alpha: Sequence[int]):
    """``(True, None)`` or ``(False, gamma)`` with the first violating root."""
    theta = q.check_vector(theta, "stability parameter")
    lam = q.check_vector(lam, "deformation parameter")
    for gamma in positive_roots_bounded(q, alpha):
        if dot(theta, gamma) == 0 and dot(lam, gamma) == 0:
            return False, gamma
    return True, None
