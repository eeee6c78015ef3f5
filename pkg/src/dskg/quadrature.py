"""Adaptive composite Gauss-Legendre quadrature.

Integrands are vectorised: ``f`` receives a 1-D array of nodes and returns
an array whose leading axis runs over the nodes. Trailing axes (e.g. a
batch of spatial points) are integrated simultaneously and the error test
uses the worst component.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DepthExceeded


@dataclass(frozen=True)
class QuadratureConfig:
    panel_order: int = 16
    tol: float = 1e-9
    max_depth: int = 24

    def __post_init__(self):
        if self.panel_order < 2:
            raise ValueError("panel_order must be >= 2")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    def tightened(self, factor: float) -> "QuadratureConfig":
        return QuadratureConfig(self.panel_order, self.tol * factor, self.max_depth)


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel(f, lo, hi, x, w):
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    vals = np.asarray(f(nodes))
    return half * np.tensordot(w, vals, axes=(0, 0))


def adaptive_quad(f, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Integrate ``f`` over ``[a, b]``.

    Each panel is compared with the sum of its two halves and accepted when
    ``|fine - coarse| <= tol * (1 + |fine|)``; otherwise both halves are
    refined, up to ``cfg.max_depth`` bisections.
    """
    a, b = float(a), float(b)
    if b < a:
        raise ValueError("need a <= b")
    x, w = _gauss_legendre(cfg.panel_order)
    if b == a:
        probe = np.asarray(f(np.array([a])))
        return np.zeros(probe.shape[1:], dtype=probe.dtype)[()]

    total = None
    stack = [(a, b, _panel(f, a, b, x, w), 0)]
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, x, w)
        right = _panel(f, mid, hi, x, w)
        fine = left + right
        err = np.max(np.abs(fine - coarse))
        if err <= cfg.tol * (1.0 + np.max(np.abs(fine))):
            total = fine if total is None else total + fine
            continue
        if depth + 1 >= cfg.max_depth:
            raise DepthExceeded(
                f"no convergence on [{lo:.6g}, {hi:.6g}] after {cfg.max_depth} bisections"
            )
        # right pushed first so panels are accumulated left to right
        stack.append((mid, hi, right, depth + 1))
        stack.append((lo, mid, left, depth + 1))
    return total[()] if np.ndim(total) == 0 else total
