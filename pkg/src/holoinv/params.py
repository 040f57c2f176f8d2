"""Root-of-unity parameters and Chebyshev-like polynomial evaluation.

Everything downstream is parametrized by an integer ell >= 3.  The module
order is r = ell/2 for even ell and r = ell for odd ell; xi = exp(2*pi*i/ell)
is the primitive root of unity; xi**x for complex x always means the principal
branch exp(2*pi*i*x/ell).

`cheb_first_kind` is the normalized first-kind polynomial T with
T(2 cos t) = 2 cos(r t) (T(2) = 2, T(-2) = 2*(-1)**r); `cheb_second_kind` is
the normalized second-kind polynomial S_n with S_n(2 cos t) =
sin((n+1)t)/sin(t).  Both are evaluated by the three-term recurrence for
numerical stability; first-kind coefficients are also available exactly in
integer arithmetic for the structural tests.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache


def cheb_first_kind(n: int, t: complex) -> complex:
    """Evaluate the degree-n normalized first-kind polynomial at t.

    Recurrence: C_0 = 2, C_1 = t, C_{k+1} = t*C_k - C_{k-1}.
    """
    if n == 0:
        return 2.0 + 0.0j
    prev, cur = 2.0 + 0.0j, complex(t)
    for _ in range(n - 1):
        prev, cur = cur, t * cur - prev
    return cur


def cheb_first_kind_coeffs(n: int) -> list[int]:
    """Exact integer coefficients (ascending powers) of the degree-n polynomial."""
    prev, cur = [2], [0, 1]
    if n == 0:
        return prev
    for _ in range(n - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def cheb_second_kind(n: int, t: complex) -> complex:
    """Evaluate the degree-n normalized second-kind polynomial at t.

    Recurrence: S_0 = 1, S_1 = t, S_{k+1} = t*S_k - S_{k-1}.
    For t = u + 1/u this is (u^{n+1} - u^{-(n+1)})/(u - 1/u).
    """
    if n == 0:
        return 1.0 + 0.0j
    prev, cur = 1.0 + 0.0j, complex(t)
    for _ in range(n - 1):
        prev, cur = cur, t * cur - prev
    return cur


@dataclass(frozen=True)
class RootParams:
    """Parameters attached to the root of unity xi = exp(2*pi*i/ell)."""

    ell: int
    tol: float = 1e-9
    r: int = field(init=False)

    def __post_init__(self):
        if self.ell < 3:
            raise ValueError("ell must be >= 3")
        object.__setattr__(self, "r", self.ell // 2 if self.ell % 2 == 0 else self.ell)

    @property
    def xi(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.ell)

    def xi_pow(self, x: complex) -> complex:
        """xi**x on the principal branch, defined for complex exponents."""
        return cmath.exp(2j * cmath.pi * x / self.ell)

    def qbracket(self, x: complex) -> complex:
        """[x] = xi^x - xi^{-x}."""
        return self.xi_pow(x) - self.xi_pow(-x)

    def cheb(self, t: complex) -> complex:
        """The order-r first-kind polynomial tying holonomy trace to Casimir value."""
        return cheb_first_kind(self.r, t)

    @property
    def sign_ell(self) -> int:
        """(-1)**ell, the recurring sign in the quantum-algebra formulas."""
        return -1 if self.ell % 2 else 1

    @property
    def sign_r(self) -> int:
        return -1 if self.r % 2 else 1

    @property
    def sign_ell_plus1(self) -> int:
        """(-1)**(ell+1), the sign relating holonomy trace to the z datum."""
        return 1 if self.ell % 2 else -1


@lru_cache(maxsize=32)
def root_params(ell: int, tol: float = 1e-9) -> RootParams:
    return RootParams(ell, tol)
