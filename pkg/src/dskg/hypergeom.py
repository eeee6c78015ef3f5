"""Gauss hypergeometric function F(a, b; c; z) on 0 <= z < 1.

Direct power series only. The kernels never need z close to 1 (on the
admissible region with t <= 5 the argument stays below tanh(2.5)**2), so
connection formulas are deliberately left out and arguments above
``Z_MAX`` raise :class:`NonConvergence`.
"""

from __future__ import annotations

from typing import NamedTuple

import mpmath
import numpy as np

from .errors import DomainError, InvalidParams, NonConvergence

EPS = 1e-15
MAX_TERMS = 50_000
Z_MAX = 0.99


class HypergeomArgs(NamedTuple):
    a: complex
    b: complex
    c: complex
    z: float


def _check_params(c: complex) -> None:
    c = complex(c)
    if c.imag == 0 and c.real <= 0 and c.real == round(c.real):
        raise InvalidParams(f"c = {c.real:g} is a non-positive integer")


def _check_z(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("z must be finite")
    if np.any(z < 0) or np.any(z >= 1):
        raise DomainError("z must lie in [0, 1)")
    if np.any(z > Z_MAX):
        raise NonConvergence(
            f"z = {float(np.max(z)):.6g} exceeds {Z_MAX}; direct series not used this close to 1"
        )


def gauss_2f1(a, b, c, z, eps: float = EPS, max_terms: int = MAX_TERMS, with_abs: bool = False):
    """Sum the hypergeometric series for real ``z`` in [0, 1).

    ``z`` may be a scalar or an array; the result is complex with the same
    shape. Terms follow the recurrence
    ``t[n+1] = t[n] * (a+n)(b+n) z / ((c+n)(n+1))`` and summation stops once
    a geometric bound on the remaining tail drops below ``eps * |sum|``.

    With ``with_abs=True`` the pair ``(sum, sum of |terms|)`` is returned; the
    second value bounds how much rounding the sum can carry.
    """
    a, b, c = complex(a), complex(b), complex(c)
    _check_params(c)
    z_arr = np.asarray(z, dtype=float)
    _check_z(z_arr)

    term = np.ones(z_arr.shape, dtype=complex)
    total = np.ones(z_arr.shape, dtype=complex)
    abs_total = np.ones(z_arr.shape)

    def result():
        if with_abs:
            return (total, abs_total) if z_arr.ndim else (complex(total), float(abs_total))
        return total if z_arr.ndim else complex(total)

    if not np.any(z_arr > 0):
        return result()

    for n in range(max_terms):
        # (a+n)*(b+n) first so that swapping a and b is bit-identical
        coef = ((a + n) * (b + n)) / ((c + n) * (n + 1))
        term = term * (coef * z_arr)
        total = total + term
        abs_total = abs_total + np.abs(term)

        nxt = abs(((a + n + 1) * (b + n + 1)) / ((c + n + 1) * (n + 2)))
        q = np.maximum(nxt * z_arr, z_arr)
        tail = np.abs(term) * q / (1.0 - np.minimum(q, 1.0 - 1e-16))
        if n > 1 and np.all(tail <= eps * np.abs(total)):
            break
        if not np.any(term):
            break
    else:
        raise NonConvergence(f"series did not converge within {max_terms} terms")

    return result()


def gauss_2f1_dz(a, b, c, z, eps: float = EPS, max_terms: int = MAX_TERMS):
    """z-derivative via ``F_z(a,b;c;z) = (ab/c) F(a+1, b+1; c+1; z)``."""
    a, b, c = complex(a), complex(b), complex(c)
    _check_params(c)
    factor = (a * b) / c
    if factor == 0:
        z_arr = np.asarray(z, dtype=float)
        _check_z(z_arr)
        out = np.zeros(z_arr.shape, dtype=complex)
        return out if z_arr.ndim else complex(out)
    return factor * gauss_2f1(a + 1, b + 1, c + 1, z, eps, max_terms)


def euler_integral_oracle(a, b, c, z, dps: int = 30) -> complex:
    """Independent test oracle from the Euler integral representation.

    Evaluates ``Gamma(c)/(Gamma(b)Gamma(c-b)) * int_0^1 s^(b-1) (1-s)^(c-b-1)
    (1-zs)^(-a) ds`` with tanh-sinh quadrature, whose double-exponential
    substitution absorbs the endpoint singularities. Requires
    ``Re c > Re b > 0``. Intended for tests only.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if not (c.real > b.real > 0):
        raise DomainError("euler_integral_oracle needs Re(c) > Re(b) > 0")
    z = float(z)
    if not 0 <= z < 1:
        raise DomainError("z must lie in [0, 1)")
    with mpmath.workdps(dps):
        am, bm, cm, zm = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(c), mpmath.mpf(z)

        def integrand(s):
            return s ** (bm - 1) * (1 - s) ** (cm - bm - 1) * (1 - zm * s) ** (-am)

        integral = mpmath.quad(integrand, [0, 0.5, 1])
        norm = mpmath.gamma(cm) / (mpmath.gamma(bm) * mpmath.gamma(cm - bm))
        return complex(norm * integral)


def hypergeom_ode_residual(mass, z) -> complex:
    """Left side of the hypergeometric ODE for a = b = 1/2 - M, c = 1.

    ``z(1-z) F'' + (1 - (2a + 1) z) F' - a^2 F`` with both derivatives from
    the contiguous relation. Should vanish to rounding.
    """
    m = complex(getattr(mass, "value", mass))
    a = 0.5 - m
    f = gauss_2f1(a, a, 1, z)
    fz = gauss_2f1_dz(a, a, 1, z)
    fzz = (a * a) * gauss_2f1_dz(a + 1, a + 1, 2, z)
    z = np.asarray(z, dtype=float)
    res = z * (1 - z) * fzz + (1 - (2 * a + 1) * z) * fz - a * a * f
    return res if res.ndim else complex(res)
