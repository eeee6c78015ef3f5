"""Kernels E, K0, K1 of the de Sitter Klein-Gordon integral transform.

All kernels are radial functions of ``r`` evaluated for one source time
``b`` and observation time ``t`` inside the propagation wedge
``0 <= r <= exp(-b) - exp(-t)``. Arrays are accepted for ``r``, ``t`` and
``b`` and are broadcast against each other.

Internally everything is written with ``p = exp(-b)``, ``q = exp(-t)`` and

    R     = (p + q)^2 - r^2                 (strictly positive on the wedge)
    gamma = ((p - q)^2 - r^2) / R           (in [0, 1) on the wedge)
    base  = 4^-M exp(M (b + t)) R^M

so that every complex power is ``exp(M log R)`` with real positive ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, RealnessError
from .hypergeom import gauss_2f1

LOG4 = math.log(4.0)
# imaginary parts below this fraction of the summed term magnitudes are rounding
REAL_RTOL = 1e-12
# absolute slack when testing r against the edge of the wedge; points within it
# are clamped onto the edge, so edge coordinates typed to ~9 digits are accepted
EDGE_SLACK = 1e-9
K0_BLEND_EPS = 1e-4


@dataclass(frozen=True)
class Mass:
    """Curved mass ``M`` of ``u_tt - e^{-2t} A u - M^2 u = f``.

    ``convention`` records how the value was obtained: ``"imaginary-mass"``
    when ``M`` is given directly, ``"real-mass"`` when a physical mass ``m``
    was supplied and ``M = -i m`` (so the equation carries ``+m^2 u``).
    """

    value: complex
    convention: str = "imaginary-mass"

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DomainError("mass must be finite")
        if self.convention not in ("imaginary-mass", "real-mass"):
            raise ValueError(f"unknown mass convention {self.convention!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def physical(cls, m: float) -> "Mass":
        return cls(-1j * float(m), "real-mass")

    @property
    def squared(self) -> complex:
        return self.value * self.value

    @property
    def real_valued(self) -> bool:
        """True when M is real or purely imaginary, so every kernel is real."""
        return self.value.real == 0 or self.value.imag == 0

    def __str__(self):
        v = self.value
        if v.imag == 0:
            return f"{v.real:g}"
        return f"{v.real:g}{v.imag:+g}i"


def as_mass(mass) -> Mass:
    return mass if isinstance(mass, Mass) else Mass(complex(mass))


class KernelPoint(NamedTuple):
    """Admissible ``(r, t, b)`` triple; unpack into the kernel functions."""

    r: float
    t: float
    b: float

    def check(self) -> "KernelPoint":
        _wedge(np.asarray(self.r, float), np.asarray(self.t, float), np.asarray(self.b, float))
        return self


class AuxValues(NamedTuple):
    alpha: complex
    beta: float
    gamma: float


@dataclass(frozen=True)
class AuxDerivatives:
    alpha_r: complex
    beta_r: float
    gamma_r: float
    alpha_rr: complex
    beta_rr: float
    gamma_rr: float
    alpha_t: complex
    beta_t: float
    gamma_t: float


class K0Boundary(NamedTuple):
    """Limits of K0 and its partial derivatives as z -> phi(t)."""

    value: complex
    dz: complex
    dt: complex


def phi(t):
    """Distance travelled by a signal by time ``t``: ``1 - exp(-t)``."""
    out = -np.expm1(-np.asarray(t, dtype=float))
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# geometry and plumbing


def _wedge(r, t, b, allow_past=False):
    """Validate the wedge and return its width ``|exp(-b) - exp(-t)|``."""
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(t)) and np.all(np.isfinite(b))):
        raise DomainError("r, t, b must be finite")
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    if not allow_past:
        if np.any(b < 0):
            raise DomainError("subsidiary time b must be >= 0")
        if np.any(b > t):
            raise DomainError("need b <= t (point must lie in the chronological future)")
    width = np.abs(np.exp(-b) - np.exp(-t))
    if np.any(r > width + EDGE_SLACK):
        raise DomainError("r exceeds exp(-b) - exp(-t): point outside the propagation wedge")
    return width


class _Geom:
    __slots__ = ("r", "p", "q", "s", "R", "logR", "g")

    def __init__(self, r, t, b, allow_past=False):
        r, t, b = np.broadcast_arrays(
            np.asarray(r, dtype=float), np.asarray(t, dtype=float), np.asarray(b, dtype=float)
        )
        width = _wedge(r, t, b, allow_past)
        r = np.minimum(r, width)
        self.r = r
        self.p = np.exp(-b)
        self.q = np.exp(-t)
        self.s = b + t
        self.R = (self.p + self.q) ** 2 - r * r
        self.logR = np.log(self.R)
        # factored so the edge r = width gives gamma = 0 exactly
        self.g = np.maximum((width - r) * (width + r), 0.0) / self.R

    def base(self, m):
        """``4^-M exp(M s) R^M``."""
        return np.exp(m * (self.s - LOG4 + self.logR))


def _hyp(m, family, g):
    """F(k - M, k - M; k + 1/2; g) for k = 1/2, 3/2, 5/2 (family 1, 2, 3)."""
    a = family - 0.5 - m
    return gauss_2f1(a, a, family, g, with_abs=True)


def _finish(terms, mags, mass: Mass):
    """Sum the terms; for real-valued kernels check and drop the imaginary part.

    ``mags`` are the rounding scales of the terms. For imaginary ``M`` the
    series terms can be far larger than the kernel itself, so the check is
    against those scales rather than against the value.
    """
    value = sum(terms)
    scale = sum(mags)
    value = np.asarray(value, dtype=complex)
    if mass.real_valued:
        if np.any(np.abs(value.imag) > REAL_RTOL * np.asarray(scale) + 1e-300):
            raise RealnessError("kernel value has a non-negligible imaginary part")
        value = value.real
    return value[()] if value.ndim == 0 else value


# --------------------------------------------------------------------------
# auxiliary functions alpha, beta, gamma


def aux(r, t, b, mass) -> AuxValues:
    """alpha, beta, gamma with ``E = alpha * beta * F(1/2-M, 1/2-M; 1; gamma)``."""
    mass = as_mass(mass)
    G = _Geom(r, t, b)
    alpha = G.base(mass.value)
    beta = G.R ** -0.5
    return AuxValues(alpha[()], beta[()], G.g[()])


def aux_derivatives(r, t, b, mass) -> AuxDerivatives:
    mass = as_mass(mass)
    m = mass.value
    G = _Geom(r, t, b)
    r, p, q = G.r, G.p, G.q
    al = G.base(m)
    be = G.R ** -0.5
    be2 = be * be
    ga = G.g
    return AuxDerivatives(
        alpha_r=(-2 * m * r * al * be2)[()],
        beta_r=(r * be**3)[()],
        gamma_r=(2 * r * be2 * (ga - 1))[()],
        # second-order r-derivative of alpha: bracket is 1 - 2M r^2 b^2 + 2 r^2 b^2
        alpha_rr=(-2 * m * al * be2 * (1 - 2 * m * r**2 * be2 + 2 * r**2 * be2))[()],
        beta_rr=(be**3 + 3 * r**2 * be**5)[()],
        gamma_rr=(2 * be2 * (1 + 4 * r**2 * be2) * (ga - 1))[()],
        alpha_t=(m * al - 2 * m * q * (p + q) * al * be2)[()],
        beta_t=(q * (p + q) * be**3)[()],
        gamma_t=(2 * q * be2 * ((p - q) + (p + q) * ga))[()],
    )


# --------------------------------------------------------------------------
# kernel E and its derivatives


def _E_coefs(G: _Geom, m, kind: str):
    """``(coefficient, family)`` pairs; the kernel is ``sum coef * F_family``."""
    R, r, p, q = G.R, G.r, G.p, G.q
    base = G.base(m)
    h = 0.5 - m
    if kind == "E":
        return [(base * R**-0.5, 1)]
    if kind == "r":
        c = 2 * h * r * base * R**-1.5
        return [(c, 1), (-c * 4 * np.exp(-G.s) / R * h, 2)]
    S = (p + q) ** 2
    if kind == "rr":
        k = 1.5 - m
        a_ = 2 * h * base * R**-2.5 * (S + (2 - 2 * m) * r * r)
        b_ = -8 * h * h * np.exp(-G.s) * base * R**-3.5 * (S + (5 - 4 * m) * r * r)
        c_ = 32 * h * h * k * k * np.exp(-2 * G.s) * r * r * base * R**-4.5
        return [(a_, 1), (b_, 2), (c_, 3)]
    if kind == "t":
        a_ = base * R**-1.5 * (m * R - (2 * m - 1) * (p + q) * q)
        b_ = 2 * h * h * base * q * R**-2.5 * (
            (p - q) * S - (p - q) * r * r + (p + q) * (p - q) ** 2 - (p + q) * r * r
        )
        return [(a_, 1), (b_, 2)]
    if kind == "tt":
        k = 1.5 - m
        at = (
            m * m * base * R**-0.5
            - (2 * m - 1) * base * R**-1.5 * ((2 * m - 2) * q * q + (2 * m - 1) * p * q)
            + 4 * (m - 0.5) * (m - 1.5) * S * q * q * base * R**-2.5
        )
        r2 = r * r
        poly = (
            2 * m * (p * p - q * q - r2) ** 2
            - p**4 + 4 * p**3 * q + 8 * p * p * q * q + 2 * p * p * r2
            - 4 * p * q * r2 - 3 * q**4 - 8 * q * q * r2 - r2 * r2
        )
        c_ = 4 * h * h * p * q * base * R**-3.5 * poly
        d_ = 8 * h * h * k * k * q * q * base * R**-4.5 * (
            p * p * r2 * r2 + 2 * p * p * q * q * r2 - 2 * p**4 * r2
            - 2 * p**4 * q * q + p * p * q**4 + p**6
        )
        return [(at, 1), (c_, 2), (d_, 3)]
    raise ValueError(kind)


def _E_terms(G: _Geom, m, kind: str):
    """Term values and their rounding scales ``|coef| * sum |series terms|``."""
    pairs = _E_coefs(G, m, kind)
    series = {fam: _hyp(m, fam, G.g) for fam in sorted({fam for _, fam in pairs})}
    vals = [c * series[fam][0] for c, fam in pairs]
    mags = [np.abs(c) * series[fam][1] for c, fam in pairs]
    return vals, mags


def _E_family(r, t, b, mass, kind, allow_past=False):
    mass = as_mass(mass)
    return _finish(*_E_terms(_Geom(r, t, b, allow_past), mass.value, kind), mass)


def kernel_E(r, t, b, mass):
    """``E(r, t; 0, b; M) = alpha * beta * F(1/2-M, 1/2-M; 1; gamma)``."""
    return _E_family(r, t, b, mass, "E")


def kernel_E_r(r, t, b, mass):
    return _E_family(r, t, b, mass, "r")


def kernel_E_rr(r, t, b, mass):
    return _E_family(r, t, b, mass, "rr")


def kernel_E_t(r, t, b, mass):
    return _E_family(r, t, b, mass, "t")


def kernel_E_tt(r, t, b, mass):
    return _E_family(r, t, b, mass, "tt")


def kernel_E_past(r, t, b, mass, kind="E"):
    """Same formulas on the chronological past (``b > t``) as well.

    No identity pins the kernel down there; it is exposed for the
    endpoint-stable form of K0 and for symmetry checks.
    """
    return _E_family(r, t, b, mass, kind, allow_past=True)


def kg_terms(r, t, b, mass):
    """The three terms of ``E_tt - e^{-2t} E_rr - M^2 E`` (sum should vanish)."""
    mass = as_mass(mass)
    G = _Geom(r, t, b)
    m = mass.value
    tt = sum(_E_terms(G, m, "tt")[0])
    rr = sum(_E_terms(G, m, "rr")[0])
    e = sum(_E_terms(G, m, "E")[0])
    return tt, -np.exp(-2 * np.asarray(t, float)) * rr, -m * m * e


# --------------------------------------------------------------------------
# K1


def _strip(z, t):
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    if np.any(z < 0) or np.any(z > phi(t) + EDGE_SLACK):
        raise DomainError("z must lie in [0, 1 - exp(-t)]")
    return z, t


def kernel_K1(z, t, mass):
    """``K1(z, t; M) = E(z, t; 0, 0; M)`` on ``0 <= z <= 1 - exp(-t)``."""
    z, t = _strip(z, t)
    return kernel_E(z, t, 0.0, mass)


def kernel_K1_z(z, t, mass):
    z, t = _strip(z, t)
    return kernel_E_r(z, t, 0.0, mass)


def kernel_K1_zz(z, t, mass):
    z, t = _strip(z, t)
    return kernel_E_rr(z, t, 0.0, mass)


def kernel_K1_t(z, t, mass):
    z, t = _strip(z, t)
    return kernel_E_t(z, t, 0.0, mass)


def kernel_K1_tt(z, t, mass):
    z, t = _strip(z, t)
    return kernel_E_tt(z, t, 0.0, mass)


# --------------------------------------------------------------------------
# K0


def kernel_K0_boundary(t, mass) -> K0Boundary:
    """Closed-form limits of K0, dK0/dz and dK0/dt at ``z = phi(t)``.

    The constant term of the t-derivative is ``-15/256 e^{-t/2}``; this is
    the sign for which the three limits satisfy the boundary balance
    ``(1/4 - M^2) e^{t/2} - 2e^{-t} K0 + 4e^{-2t} K0_z + 4e^{-t} K0_t = 0``
    and which matches the limit of the kernel itself.
    """
    m2 = as_mass(mass).squared
    m4 = m2 * m2
    t = np.asarray(t, dtype=float)
    e1, e3, e5, em = np.exp(0.5 * t), np.exp(1.5 * t), np.exp(2.5 * t), np.exp(-0.5 * t)
    value = -m2 / 4 * e1 + m2 / 4 * e3 - 3 / 16 * e1 - 1 / 16 * e3
    dz = (
        -m4 / 16 * e1 + m4 / 8 * e3 - m4 / 16 * e5
        - 7 / 32 * m2 * e1 + m2 / 16 * e3 + 5 / 32 * m2 * e5
        + 15 / 256 * e1 - 3 / 128 * e3 - 9 / 256 * e5
    )
    dt = (
        m4 / 16 * em - m4 / 8 * e1 + m4 / 16 * e3
        + 7 / 32 * m2 * em - 3 / 16 * m2 * e1 + 7 / 32 * m2 * e3
        - 15 / 256 * em - 9 / 128 * e1 - 15 / 256 * e3
    )
    if as_mass(mass).real_valued:
        value, dz, dt = np.real(value), np.real(dz), np.real(dt)
    value, dz, dt = np.asarray(value), np.asarray(dz), np.asarray(dt)
    return K0Boundary(value[()], dz[()], dt[()])


kernel_K0_boundary_derivatives = kernel_K0_boundary


def _k0_direct_terms(z, t, m):
    q = np.exp(-t)
    ph = -np.expm1(-t)
    P = (1 + q) ** 2 - z * z
    Q = (ph - z) * (ph + z)
    g = np.maximum(Q, 0.0) / P
    pre = np.exp(m * (t - LOG4 + np.log(P))) / (Q * np.sqrt(P))
    f1, f1_abs = _hyp(m, 1, g)
    f2, f2_abs = gauss_2f1(-0.5 - m, 0.5 - m, 1, g, with_abs=True)
    c1 = pre * (q - 1 + m * (q * q - 1 - z * z))
    c2 = pre * (1 - q * q + z * z) * (0.5 + m)
    return [c1 * f1, c2 * f2], [np.abs(c1) * f1_abs, np.abs(c2) * f2_abs]


def kernel_K0(z, t, mass, eps: float = K0_BLEND_EPS):
    """Kernel K0 on ``0 <= z <= phi(t)``, ``t > 0``.

    The closed two-term formula is a 0/0 form at ``z = phi(t)``. On the last
    ``eps * phi(t)`` of the strip the value is a cubic Hermite blend between
    the direct formula at ``(1 - eps) phi(t)`` and the exact endpoint limits.
    """
    mass = as_mass(mass)
    m = mass.value
    z, t = _strip(z, t)
    if np.any(t <= 0):
        raise DomainError("K0 needs t > 0")
    z, t = np.broadcast_arrays(z, t)
    ph = np.asarray(phi(t))
    zb = (1 - eps) * ph
    near = z > zb

    out = np.empty(z.shape, dtype=complex if not mass.real_valued else float)
    if np.any(~near):
        out[~near] = _finish(*_k0_direct_terms(z[~near], t[~near], m), mass)
    if np.any(near):
        zn, tn, phn, zbn = z[near], t[near], ph[near], zb[near]
        h = phn - zbn
        d = 0.25 * h
        f0 = _finish(*_k0_direct_terms(zbn, tn, m), mass)
        fp = _finish(*_k0_direct_terms(zbn + d, tn, m), mass)
        fm = _finish(*_k0_direct_terms(zbn - d, tn, m), mass)
        d0 = (fp - fm) / (2 * d)
        lim = kernel_K0_boundary(tn, mass)
        w = np.clip((zn - zbn) / h, 0.0, 1.0)
        h00 = (1 + 2 * w) * (1 - w) ** 2
        h10 = w * (1 - w) ** 2
        h01 = w * w * (3 - 2 * w)
        h11 = w * w * (w - 1)
        out[near] = h00 * f0 + h10 * h * d0 + h01 * lim.value + h11 * h * lim.dz
    return out[()] if out.ndim == 0 else out


def kernel_K0_symmetric(z, t, mass):
    """K0 from ``-dE/db`` at ``b = 0`` using the b <-> t symmetry of E.

    Since ``E(r, t; 0, b) = E(r, b; 0, t)``, the b-derivative at ``b = 0``
    equals the t-derivative formula evaluated with the two times swapped.
    That expression has no cancellation at ``z = phi(t)``, which makes it an
    independent check on the blended endpoint path.
    """
    z, t = _strip(z, t)
    val = kernel_E_past(z, np.zeros_like(np.asarray(t, float)), t, mass, kind="t")
    return -val
