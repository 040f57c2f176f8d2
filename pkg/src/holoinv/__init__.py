"""Gauge-invariant quantum link invariants with SL(2,C) holonomy.

The package computes renormalized quantum invariants of colored link
diagrams: colorings live in a biquandle built from a factorization of
SL(2,C), each color selects a cyclic module of the unrolled quantum sl(2) at
a root of unity, crossings act by holonomy braidings, and a modified trace
turns the closed diagram into a number that is well defined modulo r^2-th
roots of unity and invariant under Reidemeister moves and gauge change.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .params import RootParams, root_params

__all__ = ["RootParams", "root_params", "__version__"]
