"""Riemann/Hurwitz zeta for real s > 1 via Euler-Maclaurin summation.

The sum is split into a direct part over the first N terms and an
Euler-Maclaurin tail carried through the B4 correction.  The first omitted
term bounds the remainder (x**-s is completely monotone), so every result
carries a certified truncation bound; N is doubled until that bound fits the
requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoRootError

EPS_POLE = 1e-9
B_MAX = 64.0
B_MIN = 1.0 + 1e-6
DEFAULT_TOL = 1e-12

_N_START = 8
_N_LIMIT = 1 << 22
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ZetaEval:
    value: float
    abs_error_bound: float

    def __float__(self):
        return self.value


def _check(s, q, tol):
    if not s > 1.0 + EPS_POLE:
        raise DomainError(f"s={s!r} is at or below the pole at s=1")
    if not q > 0:
        raise DomainError(f"q={q!r} must be positive")
    if not tol > 0:
        raise DomainError("tol must be positive")


def _tail(s, x):
    """Euler-Maclaurin tail sum_{n>=0} (x+n)^-s, truncated after B4."""
    return (
        x ** (1 - s) / (s - 1)
        + 0.5 * x**-s
        + s * x ** (-s - 1) / 12
        - s * (s + 1) * (s + 2) * x ** (-s - 3) / 720
    )


def _tail_ds(s, x):
    L = math.log(x)
    return (
        -L * x ** (1 - s) / (s - 1)
        - x ** (1 - s) / (s - 1) ** 2
        - 0.5 * L * x**-s
        + (1 - s * L) * x ** (-s - 1) / 12
        - ((3 * s * s + 6 * s + 2) - s * (s + 1) * (s + 2) * L) * x ** (-s - 3) / 720
    )


def _next_term(s, x):
    return s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * x ** (-s - 5) / 30240


def _evaluate(s, q, tol, deriv, strict=True):
    n = _N_START
    while True:
        x = n + q
        bound = _next_term(s, x)
        if deriv:
            bound = 2.0 * bound * (math.log(x) + 5.0)
        if bound <= tol / 2 or n >= _N_LIMIT:
            break
        n *= 2
    base = np.arange(n, dtype=float) + q
    if deriv:
        head = -float(np.sum(np.log(base) * base**-s))
        value = head + _tail_ds(s, x)
    else:
        head = float(np.sum(base**-s))
        value = head + _tail(s, x)
    # numpy sums pairwise: rounding grows like log2(n), not n
    rounding = (math.log2(n) + 4) * _EPS * abs(value)
    err = bound + rounding
    if strict and err > tol:
        raise DomainError(f"cannot reach tol={tol:g} in double precision (bound {err:.3g})")
    return ZetaEval(float(value), float(err))


def hurwitz_zeta(s: float, q: float, tol: float = DEFAULT_TOL) -> ZetaEval:
    """sum_{n>=0} (n+q)^-s for real s > 1, q > 0."""
    _check(s, q, tol)
    return _evaluate(float(s), float(q), tol, deriv=False)


def riemann_zeta(s: float, tol: float = DEFAULT_TOL) -> ZetaEval:
    return hurwitz_zeta(s, 1.0, tol)


def hurwitz_zeta_ds(s: float, q: float, tol: float = DEFAULT_TOL) -> ZetaEval:
    """Partial derivative of the Hurwitz zeta in s: -sum (n+q)^-s ln(n+q)."""
    _check(s, q, tol)
    return _evaluate(float(s), float(q), tol, deriv=True)


def solve_exponent(k0: float, tol: float = DEFAULT_TOL, b_max: float = B_MAX) -> float:
    """Exponent B with zeta(B, 1 + k0) = 1.

    zeta(B, q) decreases monotonically in B, so bisection on
    (1 + 1e-6, b_max] is safe.  If the root lies beyond ``b_max`` the
    distribution has collapsed onto rank 1 and NoRootError is raised.
    """
    if not k0 >= 0:
        raise DomainError(f"k0={k0!r} must be non-negative")
    if not tol > 0:
        raise DomainError("tol must be positive")
    q = 1.0 + k0
    ztol = min(tol / 10, 1e-12)

    def excess(b):
        # zeta(b, q) - 1 with the leading term split off, so the sign stays
        # exact when zeta(b, q) is within rounding of 1 (k0 -> 0, large b)
        return _evaluate(b, q + 1.0, ztol, False, strict=False).value + math.expm1(-b * math.log(q))

    lo = B_MIN
    if excess(lo) <= 0:
        raise NoRootError(f"zeta({lo}, {q}) <= 1; k0 too large for B > {lo}")
    hi = min(2.0, b_max)
    while excess(hi) > 0:
        if hi >= b_max:
            raise NoRootError(f"root of zeta(B, {q}) = 1 lies above B_max={b_max:g}")
        lo = hi
        hi = min(2.0 * hi, b_max)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = excess(mid)
        if abs(f) <= tol or hi - lo <= 4 * _EPS * hi:
            return mid
        if f > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
