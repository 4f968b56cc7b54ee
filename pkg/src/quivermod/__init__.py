"""Exact linear algebra for quiver representations, their moduli and stability.

Submodules:

* ``linalg``      fields, matrices, subspaces, binary forms
* ``quiver``      quivers, paths, representations, group actions
* ``forms``       Euler form, roots, expected dimensions, genericity
* ``stability``   King stability, subrepresentation search, one-parameter limits
* ``invariants``  trace invariants along oriented cycles
* ``nakajima``    doubled and framed quivers, moment maps, flags
* ``adhm``        ADHM data, monomial ideals, monads
* ``kronecker``   pencils and splitting types on the projective line
* ``serialize``   JSON documents
* ``cli``         the ``quivermod`` command
"""

from __future__ import annotations

from .errors import (BadPrime, BudgetExceeded, DimensionMismatch, IrrationalSpectrum, NoLimit, NotInvariant,
                     PreconditionFailed, QuivermodError)
from .linalg import GF, QQ, BinaryForm, Matrix, Subspace, field_from_name
from .quiver import Arrow, GroupElement, Path, Quiver, Representation

__version__ = "0.1.0"

__all__ = [
    "QuivermodError", "DimensionMismatch", "BadPrime", "NotInvariant", "BudgetExceeded", "NoLimit",
    "IrrationalSpectrum", "PreconditionFailed",
    "QQ", "GF", "field_from_name", "Matrix", "Subspace", "BinaryForm",
    "Arrow", "Quiver", "Path", "Representation", "GroupElement",
]
