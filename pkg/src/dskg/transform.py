"""Integral transform from undamped waves to de Sitter Klein-Gordon solutions.

Given solutions of ``v_tt - A v = 0`` the solution of

    u_tt - e^{-2t} A u - M^2 u = f,   u(x,0) = phi0(x),   u_t(x,0) = phi1(x)

is assembled from three pieces:

    source:  2 int_0^t db int_0^{e^-b - e^-t} v_f(x,r;b) E(r,t;0,b;M) dr
    phi0:    e^{t/2} v_phi0(x, phi(t)) + 2 int_0^{phi(t)} v_phi0(x,s) K0(s,t;M) ds
    phi1:    2 int_0^{phi(t)} v_phi1(x,s) K1(s,t;M) ds

Fields are evaluated in batches: the quadrature variable arrives as a
column ``(n, 1)`` and ``x`` as a row ``(1, m)``, so every output point of an
array ``x`` is integrated in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernels import K0_BLEND_EPS, as_mass, kernel_E, kernel_K0, kernel_K1, phi
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, adaptive_quad
from .wave_oracles import dalembert_v, mode_v


@dataclass
class SampledField:
    """A solution of the undamped problem supplied as a callable.

    Data fields use ``evaluator(x, s)``; source fields (``source=True``) use
    ``evaluator(x, r, b)`` for the family ``v_f(x, r; b)``. Every call records
    the largest second argument seen, which lets tests confirm the transform
    never looks past the horizon.
    """

    evaluator: Callable
    source: bool = False
    max_s: float = field(default=0.0, init=False)
    n_calls: int = field(default=0, init=False)

    def __call__(self, x, s, b=None):
        s_arr = np.asarray(s, dtype=float)
        if s_arr.size:
            self.max_s = max(self.max_s, float(np.max(s_arr)))
        self.n_calls += 1
        if self.source:
            return self.evaluator(x, s, b)
        return self.evaluator(x, s)

    def reset(self):
        self.max_s = 0.0
        self.n_calls = 0

    @classmethod
    def zero(cls, source: bool = False) -> "SampledField":
        if source:
            return cls(lambda x, r, b: 0.0 * (x + r + b), source=True)
        return cls(lambda x, s: 0.0 * (x + s))

    @classmethod
    def mode(cls, mu: float, coef: float = 1.0, shape: Optional[Callable] = None) -> "SampledField":
        """``coef * shape(x) * cos(sqrt(-mu) s)`` for an eigenfunction ``shape``."""
        shape = shape or (lambda x: np.ones_like(np.asarray(x, dtype=float)))
        return cls(lambda x, s: coef * shape(x) * mode_v(mu, s))

    @classmethod
    def mode_source(cls, mu: float, g: Callable, shape: Optional[Callable] = None) -> "SampledField":
        """Source family for ``f = g(t) shape(x)``: ``g(b) shape(x) cos(sqrt(-mu) r)``."""
        shape = shape or (lambda x: np.ones_like(np.asarray(x, dtype=float)))
        return cls(lambda x, r, b: g(b) * shape(x) * mode_v(mu, r), source=True)

    @classmethod
    def dalembert(cls, profile: Callable) -> "SampledField":
        """Undamped 1-D wave with initial displacement ``profile``."""
        return cls(lambda x, s: dalembert_v(profile, x, s))

    @classmethod
    def dalembert_source(cls, f: Callable) -> "SampledField":
        """Source family for ``A = d^2/dx^2``: ``v_f(x, r; b)`` starts from ``f(., b)``."""
        return cls(lambda x, r, b: dalembert_v(lambda y: f(y, b), x, r), source=True)


def _row(x):
    x_arr = np.asarray(x, dtype=float)
    return x_arr.reshape(1, -1), x_arr.ndim == 0, x_arr.shape


def _shape_out(vals, scalar, shape):
    vals = np.asarray(vals)
    if scalar:
        return vals.reshape(-1)[0][()]
    return vals.reshape(shape)


def _kernel_integral(v, kernel, x_row, lo, hi, cfg):
    def integrand(s):
        col = s[:, None]
        vals = v(x_row, col)
        k = np.asarray(kernel(s))[:, None]
        return np.broadcast_to(vals, (s.size, x_row.shape[1])) * k

    return adaptive_quad(integrand, lo, hi, cfg)


def transform_phi1(v: SampledField, x, t: float, mass, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``2 int_0^{phi(t)} v(x, s) K1(s, t) ds``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x_row, scalar, shape = _row(x)
    if t == 0:
        return _shape_out(np.zeros(x_row.shape[1]), scalar, shape)
    mass = as_mass(mass)
    ph = phi(t)
    total = _kernel_integral(v, lambda s: kernel_K1(s, t, mass), x_row, 0.0, ph, cfg)
    return _shape_out(2 * total, scalar, shape)


def transform_phi0(
    v: SampledField, x, t: float, mass, cfg: QuadratureConfig = DEFAULT_CONFIG, eps: float = K0_BLEND_EPS
):
    """``e^{t/2} v(x, phi(t)) + 2 int_0^{phi(t)} v(x, s) K0(s, t) ds``.

    The integral is split so that the last ``2 eps phi(t)`` of the range, where
    K0 switches to its endpoint-stabilised evaluation, gets its own panel.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    x_row, scalar, shape = _row(x)
    if t == 0:
        edge = np.broadcast_to(v(x_row, np.zeros((1, 1))), x_row.shape)[0]
        return _shape_out(edge, scalar, shape)
    mass = as_mass(mass)
    ph = phi(t)
    split = (1 - 2 * eps) * ph
    k0 = lambda s: kernel_K0(s, t, mass, eps)
    body = _kernel_integral(v, k0, x_row, 0.0, split, cfg)
    tail = _kernel_integral(v, k0, x_row, split, ph, cfg)
    edge = np.broadcast_to(v(x_row, np.full((1, 1), ph)), x_row.shape)[0]
    return _shape_out(np.exp(0.5 * t) * edge + 2 * (body + tail), scalar, shape)


def transform_source(v: SampledField, x, t: float, mass, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Duhamel-type double integral of ``v_f(x, r; b) E(r, t; 0, b)``.

    Nested adaptive quadrature: the outer rule runs over ``b in [0, t]``,
    and for every outer node the inner rule over ``r in [0, e^-b - e^-t]``
    uses a tolerance ten times tighter.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    x_row, scalar, shape = _row(x)
    if t == 0:
        return _shape_out(np.zeros(x_row.shape[1]), scalar, shape)
    mass = as_mass(mass)
    inner_cfg = cfg.tightened(0.1)
    q = np.exp(-t)

    def inner(b):
        width = np.exp(-b) - q
        if width <= 0:
            return np.zeros(x_row.shape[1])

        def integrand(r):
            vals = v(x_row, r[:, None], b)
            k = np.asarray(kernel_E(r, t, b, mass))[:, None]
            return np.broadcast_to(vals, (r.size, x_row.shape[1])) * k

        return adaptive_quad(integrand, 0.0, width, inner_cfg)

    def outer(bs):
        return np.array([inner(float(b)) for b in bs])

    total = adaptive_quad(outer, 0.0, t, cfg)
    return _shape_out(2 * total, scalar, shape)


def transform_full(
    vf: Optional[SampledField],
    vphi0: Optional[SampledField],
    vphi1: Optional[SampledField],
    x,
    t: float,
    mass,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
):
    """Solution ``u(x, t)`` assembled from the three pieces; ``None`` means zero data."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x_row, scalar, shape = _row(x)
    total = np.zeros(x_row.shape[1])
    if t == 0:
        if vphi0 is not None:
            total = total + np.ravel(transform_phi0(vphi0, x_row[0], 0.0, mass, cfg))
        return _shape_out(total, scalar, shape)
    if vf is not None:
        total = total + np.ravel(transform_source(vf, x_row[0], t, mass, cfg))
    if vphi0 is not None:
        total = total + np.ravel(transform_phi0(vphi0, x_row[0], t, mass, cfg))
    if vphi1 is not None:
        total = total + np.ravel(transform_phi1(vphi1, x_row[0], t, mass, cfg))
    return _shape_out(total, scalar, shape)
