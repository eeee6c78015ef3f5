"""Inputs for the transform and independent reference solutions.

The transform consumes solutions ``v`` of the undamped problem
``v_tt - A v = 0``. Three families of ``A`` are covered here without a
generic elliptic solver: the 1-D wave operator (d'Alembert), arbitrary
operators through a single eigenmode ``A phi = mu phi``, and the centred
grid Laplacian used by the leapfrog reference solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BoundaryUnsupported, CFLViolation, DomainError, StepFailure
from .kernels import Mass, as_mass


@dataclass(frozen=True)
class ModeProblem:
    """Separable test problem on one eigenfunction of ``A``.

    With ``A phi = mu phi`` the target equation reduces to
    ``y'' - mu e^{-2t} y - M^2 y = g(t)``, ``y(0) = c0``, ``y'(0) = c1``.
    ``mu = -lambda^2`` for a Laplacian mode, ``mu = -k^4`` for a beam mode.
    """

    mu: float
    mass: Mass
    c0: float = 1.0
    c1: float = 0.0
    forcing: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = ""

    def __post_init__(self):
        if self.mu > 0:
            raise DomainError("mu must be <= 0 (wave-type spectrum)")
        object.__setattr__(self, "mass", as_mass(self.mass))

    @property
    def frequency(self) -> float:
        return float(np.sqrt(-self.mu))


@dataclass
class GridProblem1D:
    x_min: float
    x_max: float
    n_x: int
    phi0: np.ndarray
    phi1: np.ndarray
    f: Optional[Callable[[float], np.ndarray]] = None
    boundary: str = "dirichlet"
    # generating functions, kept so the transform can sample off the grid
    phi0_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    phi1_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    f_fn: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n_x < 3:
            raise ValueError("n_x must be >= 3")
        if not self.x_max > self.x_min:
            raise ValueError("need x_max > x_min")
        self.phi0 = np.asarray(self.phi0, dtype=float)
        self.phi1 = np.asarray(self.phi1, dtype=float)
        if self.phi0.shape != (self.n_x,) or self.phi1.shape != (self.n_x,):
            raise ValueError("phi0 and phi1 must have length n_x")

    @property
    def dx(self) -> float:
        if self.boundary == "periodic":
            return (self.x_max - self.x_min) / self.n_x
        return (self.x_max - self.x_min) / (self.n_x - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @classmethod
    def from_functions(cls, x_min, x_max, n_x, phi0, phi1=None, f=None, boundary="dirichlet"):
        """Sample profile functions on the grid; ``f(x, t)`` becomes ``f(t) -> array``."""
        probe = cls(x_min, x_max, n_x, np.zeros(n_x), np.zeros(n_x), None, boundary)
        x = probe.x
        p0 = np.asarray(phi0(x), dtype=float) * np.ones(n_x)
        p1 = np.zeros(n_x) if phi1 is None else np.asarray(phi1(x), dtype=float) * np.ones(n_x)
        ff = None if f is None else (lambda t, _x=x: np.asarray(f(_x, t), dtype=float) * np.ones(n_x))
        return cls(x_min, x_max, n_x, p0, p1, ff, boundary, phi0, phi1, f)


def dalembert_v(profile, x, t):
    """Solution of ``v_tt = v_xx``, ``v(x,0) = profile``, ``v_t(x,0) = 0``."""
    return 0.5 * (profile(x + t) + profile(x - t))


def mode_v(mu, t):
    """Time factor ``cos(sqrt(-mu) t)`` of an eigenmode of ``v_tt - A v = 0``."""
    if mu > 0:
        raise DomainError("mu must be <= 0")
    return np.cos(np.sqrt(-mu) * np.asarray(t, dtype=float))


@dataclass
class ModeSolution:
    """Dense output of :func:`ode_oracle`; call with ``t`` to get ``y(t)``."""

    t_max: float
    _sol: object = field(repr=False)

    def __call__(self, t):
        return self.y(t)

    def y(self, t):
        out = self._sol(np.asarray(t, dtype=float))[0]
        return out[()] if np.ndim(out) == 0 else out

    def dy(self, t):
        out = self._sol(np.asarray(t, dtype=float))[1]
        return out[()] if np.ndim(out) == 0 else out


def ode_oracle(problem: ModeProblem, t_max: float, tol: float = 1e-12) -> ModeSolution:
    """Integrate the mode ODE on ``[0, t_max]`` with an 8(5,3) embedded RK pair.

    Complex ``M^2`` (mass with nonzero real and imaginary parts) is supported
    by integrating in complex arithmetic.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    m2 = problem.mass.squared
    mu = problem.mu
    g = problem.forcing
    complex_run = m2.imag != 0
    m2v = m2 if complex_run else m2.real

    def rhs(t, y):
        force = 0.0 if g is None else g(t)
        return [y[1], mu * np.exp(-2 * t) * y[0] + m2v * y[0] + force]

    y0 = np.array([problem.c0, problem.c1], dtype=complex if complex_run else float)
    if t_max == 0:
        t_max = 1e-12
    sol = solve_ivp(rhs, (0.0, t_max), y0, method="DOP853", rtol=tol, atol=tol, dense_output=True)
    if not sol.success:
        raise StepFailure(sol.message)
    return ModeSolution(float(t_max), sol.sol)


def _laplacian(u, dx, boundary):
    out = np.empty_like(u)
    if boundary == "periodic":
        out[:] = np.roll(u, -1) - 2 * u + np.roll(u, 1)
    else:
        out[1:-1] = u[2:] - 2 * u[1:-1] + u[:-2]
        out[0] = out[-1] = 0.0
    return out / (dx * dx)


def fd_direct_solver(problem: GridProblem1D, mass, t_max: float, dt: float, store_every: int = 0):
    """Leapfrog solution of ``u_tt = e^{-2t} u_xx + M^2 u + f``.

    Returns ``(times, u)`` with ``u[k]`` the nodal field at ``times[k]``.
    By default only the initial and final states are stored; pass
    ``store_every=n`` to keep every n-th step.
    """
    mass = as_mass(mass)
    if not mass.real_valued:
        raise DomainError("grid solver needs M real or purely imaginary (real M^2)")
    if problem.boundary not in ("periodic", "dirichlet"):
        raise BoundaryUnsupported(problem.boundary)
    dx = problem.dx
    if dt > 0.9 * dx:
        raise CFLViolation(f"dt = {dt:g} exceeds 0.9 * dx = {0.9 * dx:g}")
    n_steps = int(round(t_max / dt))
    if n_steps < 1 or abs(n_steps * dt - t_max) > 1e-9 * max(1.0, t_max):
        raise ValueError("t_max must be a positive multiple of dt")
    m2 = mass.squared.real
    bc = problem.boundary
    force = problem.f if problem.f is not None else (lambda t: 0.0)

    def accel(u, t):
        a = np.exp(-2 * t) * _laplacian(u, dx, bc) + m2 * u + force(t)
        if bc == "dirichlet":
            a[0] = a[-1] = 0.0
        return a

    u_prev = problem.phi0.copy()
    if bc == "dirichlet":
        u_prev[0] = u_prev[-1] = 0.0
    u = u_prev + dt * problem.phi1 + 0.5 * dt * dt * accel(u_prev, 0.0)
    if bc == "dirichlet":
        u[0] = u[-1] = 0.0

    times, frames = [0.0], [u_prev.copy()]
    if store_every and 1 % store_every == 0:
        times.append(dt)
        frames.append(u.copy())
    for n in range(1, n_steps):
        t = n * dt
        u_next = 2 * u - u_prev + dt * dt * accel(u, t)
        u_prev, u = u, u_next
        if store_every and (n + 1) % store_every == 0 and n + 1 != n_steps:
            times.append((n + 1) * dt)
            frames.append(u.copy())
    times.append(n_steps * dt)
    frames.append(u.copy())
    return np.array(times), np.array(frames)
