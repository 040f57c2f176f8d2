"""Modified dimension of cyclic modules.

The quantum dimension of every cyclic module vanishes, so the renormalized
invariant replaces it with the modified dimension d(chi).  Writing the
Casimir value as chi(Omega) = (-1)^r (xi^a + xi^-a), the modified dimension
has two closed forms,

    d(chi) = (-1)^(r-1) prod_{j=1}^{r-1} [j] / [a + r - j]
           = (-1)^(r-1) r [a] / [r a]            (when [r a] != 0),

and the second form shows d(chi)^-1 is the degree r-1 second-kind Chebyshev
polynomial evaluated at (-1)^r chi(Omega).  That reciprocal is the shipped
evaluation path: it needs no branch choice for a and depends only on
chi(Omega).  The a-parameter forms are kept as cross-check helpers.

d(chi) is a plain complex number (no root-of-unity ambiguity); it enters the
renormalized invariant as an exact prefactor.  It is gauge invariant because
every gauge move preserves the Casimir coordinate z of a color.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonScalarResult, Singular
from .params import RootParams, cheb_second_kind
from .sl2factor import random_ycolor, sl2_B, sl2_B_inv
from .uqsl2 import CyclicModule, ZChar, char_from_ycolor, dual_rep


@dataclass(frozen=True)
class ModifiedDim:
    """A modified dimension together with the branch parameter used."""

    alpha: complex
    value: complex


def modified_dim(chi: ZChar, p: RootParams, tol: Optional[float] = None) -> complex:
    """d(chi) = (-1)^(r-1) r / S_(r-1)((-1)^r chi(Omega)).

    S_n is the second-kind Chebyshev recurrence.  Raises Singular when the
    denominator vanishes (the bracket [a + r - j] of the product form is
    zero), which happens exactly when a is an integer not divisible by r.
    """
    tol = p.tol if tol is None else tol
    den = cheb_second_kind(p.r - 1, p.sign_r * chi.omega)
    if abs(den) <= tol * max(1.0, float(p.r)):
        raise Singular(f"modified dimension pole at chi(Omega) = {chi.omega}")
    return -p.sign_r * p.r / den


def alpha_from_omega(omega: complex, p: RootParams) -> complex:
    """Solve chi(Omega) = (-1)^r (xi^a + xi^-a) for a.

    Branch: imaginary part >= 0, real part reduced into [0, ell).
    """
    # xi^a = exp(i theta) with 2 cos(theta) = (-1)^r omega
    theta = cmath.acos(p.sign_r * omega / 2.0)
    a = theta * p.ell / (2.0 * cmath.pi)
    if a.imag < 0 or (a.imag == 0 and a.real < 0):
        a = -a
    return complex(a.real % p.ell, a.imag)


def modified_dim_product(alpha: complex, p: RootParams,
                         tol: Optional[float] = None) -> complex:
    """Cross-check form: (-1)^(r-1) prod_{j=1}^{r-1} [j] / [alpha + r - j]."""
    tol = p.tol if tol is None else tol
    out = complex(-p.sign_r)
    for j in range(1, p.r):
        den = p.qbracket(alpha + p.r - j)
        if abs(den) <= tol:
            raise Singular(f"bracket [alpha + {p.r - j}] vanishes")
        out *= p.qbracket(j) / den
    return out


def modified_dim_ratio(alpha: complex, p: RootParams,
                       tol: Optional[float] = None) -> complex:
    """Cross-check form: (-1)^(r-1) r [alpha] / [r alpha], for [r alpha] != 0."""
    tol = p.tol if tol is None else tol
    den = p.qbracket(p.r * alpha)
    if abs(den) <= tol:
        raise Singular("bracket [r alpha] vanishes")
    return -p.sign_r * p.r * p.qbracket(alpha) / den


def casimir_scalar(E: np.ndarray, F: np.ndarray, K: np.ndarray,
                   p: RootParams, tol: float = 1e-9) -> complex:
    """Scalar by which the Casimir acts on an irreducible set of matrices."""
    om = (p.qbracket(1) ** 2) * (E @ F) + K / p.xi + np.linalg.inv(K) * p.xi
    s = np.trace(om) / om.shape[0]
    if np.linalg.norm(om - s * np.eye(om.shape[0])) > tol * 1e3 * max(1.0, abs(s)):
        raise NonScalarResult("Casimir does not act by a scalar")
    return complex(s)


def dual_casimir_scalar(V: CyclicModule, p: RootParams,
                        tol: float = 1e-9) -> complex:
    """chi*(Omega): the Casimir scalar of the dual module."""
    d = dual_rep(V)
    return casimir_scalar(d.E, d.F, d.K, p, tol)


def check_dim_gauge_invariance(p: RootParams, samples: int = 1000,
                               seed: int = 0, tol: float = 1e-9) -> dict:
    """Verify d is constant along biquandle gauge moves.

    For sampled pairs (y', y) the transformed color B1(y', y) (and its
    inverse-move counterpart) keeps the Casimir coordinate, so d agrees
    exactly; a short harpoon-word orbit is also walked.  Returns a report
    with the worst deviation and the sample count actually used.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    used = 0
    for _ in range(samples):
        ya = random_ycolor(rng, p)
        yb = random_ycolor(rng, p)
        try:
            d_ref = modified_dim(char_from_ycolor(yb, p, tol), p, tol)
            y4, _ = sl2_B(ya, yb, tol)
            d_fwd = modified_dim(char_from_ycolor(y4, p, tol), p, tol)
            _, v = sl2_B_inv(ya, yb, tol)
            d_inv = modified_dim(char_from_ycolor(ya, p, tol), p, tol)
            d_inv2 = modified_dim(char_from_ycolor(v, p, tol), p, tol)
        except Exception:
            continue
        used += 1
        worst = max(worst, abs(d_fwd - d_ref), abs(d_inv2 - d_inv))
        # short harpoon orbit of yb: the first output of B keeps z
        y = yb
        for _ in range(3):
            partner = random_ycolor(rng, p)
            try:
                y, _ = sl2_B(partner, y, tol)
                d_orb = modified_dim(char_from_ycolor(y, p, tol), p, tol)
            except Exception:
                break
            worst = max(worst, abs(d_orb - d_ref))
    return {"samples": used, "max_deviation": worst, "pass": worst <= tol}
