"""Named verification suites with measured residuals.

Three suites are provided:

* kernel identities, evaluated on Halton samples of the admissible region;
* the mode oracle, comparing the transform with an ODE integration;
* the end-to-end grid check, comparing the transform with a leapfrog solve.

Every residual is relative: the absolute value of the identity's sum over
the sum of absolute values of its terms. When a term is itself a finite
difference, the terms of its stencil count individually, which is the
magnitude that floating-point rounding scales with.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from . import kernels as K
from .kernels import Mass, as_mass, phi
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .transform import SampledField, transform_full
from .wave_oracles import GridProblem1D, ModeProblem, fd_direct_solver, ode_oracle

DEFAULT_MASSES = (0.0, 0.25, 0.5, 1.0, 0.3j, 1.7j)
CSV_COLUMNS = ("suite", "case_id", "r", "t", "b", "mass_re", "mass_im", "residual", "tol", "pass")

# central first-derivative weights, sixth order
_C6 = np.array([-1 / 60, 3 / 20, -3 / 4, 3 / 4, -3 / 20, 1 / 60])
_O6 = np.array([-3, -2, -1, 1, 2, 3], dtype=float)


@dataclass(frozen=True)
class Case:
    case_id: str
    r: Optional[float]
    t: Optional[float]
    b: Optional[float]
    mass: complex
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)


@dataclass
class SuiteReport:
    suite: str
    cases: list = field(default_factory=list)

    @property
    def worst_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.passed]

    def sorted_cases(self):
        def key(c):
            name, _, idx = c.case_id.rpartition(":")
            return (name, c.mass.real, c.mass.imag, int(idx) if idx.isdigit() else 0, c.case_id)

        return sorted(self.cases, key=key)

    def worst_by_identity(self) -> dict:
        out = {}
        for c in self.cases:
            name = c.case_id.rpartition(":")[0] or c.case_id
            out[name] = max(out.get(name, 0.0), c.residual)
        return out

    def merged(self, other: "SuiteReport") -> "SuiteReport":
        return SuiteReport(self.suite, list(self.cases) + list(other.cases))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(float(v))


def reports_to_csv(reports: Sequence[SuiteReport]) -> str:
    """CSV text with a fixed column order and shortest round-trip floats."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        for c in rep.sorted_cases():
            w.writerow([
                rep.suite, c.case_id, _fmt(c.r), _fmt(c.t), _fmt(c.b),
                _fmt(c.mass.real), _fmt(c.mass.imag), _fmt(c.residual), _fmt(c.tol), _fmt(c.passed),
            ])
    return buf.getvalue()


# --------------------------------------------------------------------------
# kernel identities


@dataclass(frozen=True)
class IdentityConfig:
    tol: float = 1e-9
    canary_tol: float = 1e-12
    seed: int = 0
    t_max: float = 5.0
    fd_step: float = 3e-3
    # b-stencils stay this fraction of the edge distance away from the edge
    edge_fraction: float = 0.01


def _rel(terms, mags=None):
    """``|sum(terms)| / (sum |terms| + sum mags)``, 0 where everything vanishes."""
    terms = [np.asarray(x) for x in terms]
    total = np.abs(sum(terms))
    scale = sum(np.abs(x) for x in terms)
    if mags:
        scale = scale + sum(mags)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(scale > 0, total / np.where(scale > 0, scale, 1.0), 0.0)
    return np.asarray(out, dtype=float)


def _d_db(kind, z, t, mass, h):
    """Sixth-order central b-derivative of E (or a derivative of E) at b = 0.

    Returns the derivative and the summed stencil magnitudes. Negative b is
    evaluated with the same closed form.
    """
    b = _O6[:, None] * h[None, :]
    vals = K.kernel_E_past(z[None, :], t[None, :], b, mass, kind)
    terms = _C6[:, None] * vals / h[None, :]
    return terms.sum(axis=0), np.abs(terms).sum(axis=0)


def halton_points(n: int, seed: int = 0, t_max: float = 5.0):
    """Admissible ``(r, t, b)`` samples with ``t`` in ``(0, t_max]``.

    Uses ``b = t u``, ``r = w (e^-b - e^-t)`` so the whole wedge, its edges
    included, is covered evenly.
    """
    u = qmc.Halton(3, scramble=True, seed=seed).random(n)
    t = t_max * (1.0 - u[:, 0])
    b = t * u[:, 1]
    r = u[:, 2] * (np.exp(-b) - np.exp(-t))
    return r, t, b


def _kernel_identities(mass: Mass, n: int, cfg: IdentityConfig):
    """Yield ``(name, r, t, b, residual)`` arrays for one mass."""
    m2 = mass.squared
    r, t, b = halton_points(n, cfg.seed, cfg.t_max)
    width = np.exp(-b) - np.exp(-t)
    zero = np.zeros_like(t)

    # E solves the de Sitter Klein-Gordon equation
    yield "E_kg_residual", r, t, b, _rel(K.kg_terms(r, t, b, mass))

    # E is symmetric in its two times
    e1 = K.kernel_E(r, t, b, mass)
    e2 = K.kernel_E_past(r, b, t, mass)
    yield "E_time_symmetry", r, t, b, _rel([e1, -e2])

    # values on the edge of the wedge
    half = 0.5 * np.exp(0.5 * (b + t))
    yield "E_edge_value", width, t, b, _rel([K.kernel_E(width, t, b, mass), -half])
    er_edge = 0.25 * (0.25 - m2) * (np.exp(t) - np.exp(b)) * np.exp(0.5 * (b + t))
    yield "E_edge_slope_r", width, t, b, _rel([K.kernel_E_r(width, t, b, mass), -er_edge])
    et_edge = np.exp(0.5 * (b - t)) * (np.exp(b) * (1 - 4 * m2) + (4 * m2 + 3) * np.exp(t)) / 16
    yield "E_edge_slope_t", width, t, b, _rel([K.kernel_E_t(width, t, b, mass), -et_edge])
    aux = K.aux(width, t, b, mass)
    yield "aux_edge_values", width, t, b, np.maximum.reduce([
        _rel([aux.alpha, -1.0]), _rel([aux.beta, -half]), np.abs(aux.gamma),
    ])
    yield "E_axis_slope", zero, t, b, _rel([K.kernel_E_r(zero, t, b, mass)], [np.abs(e1) / np.maximum(width, 1e-300)])
    yield "E_diagonal_value", zero, t, t, _rel([K.kernel_E(zero, t, t, mass), -0.5 * np.exp(t)])

    # boundary flux balance of E on the edge
    flux = [
        2 * K.kernel_E_r(width, t, b, mass),
        2 * np.exp(t) * K.kernel_E_t(width, t, b, mass),
        -np.exp(t) * (4 * np.exp(-b - t)) ** -0.5,
    ]
    yield "E_edge_flux", width, t, b, _rel(flux)

    # K1 on the strip 0 <= z <= phi(t)
    ph = phi(t)
    z = r / np.where(width > 0, width, 1.0) * ph
    k1_terms = [
        K.kernel_K1_tt(z, t, mass),
        -np.exp(-2 * t) * K.kernel_K1_zz(z, t, mass),
        -m2 * K.kernel_K1(z, t, mass),
    ]
    yield "K1_kg_residual", z, t, zero, _rel(k1_terms)
    yield "K1_edge_value", ph, t, zero, _rel([K.kernel_K1(ph, t, mass), -0.5 * np.exp(0.5 * t)])
    k1_flux = [
        2 * np.exp(-t) * K.kernel_K1_z(ph, t, mass),
        2 * K.kernel_K1_t(ph, t, mass),
        -K.kernel_K1(ph, t, mass),
    ]
    yield "K1_edge_flux", ph, t, zero, _rel(k1_flux)
    k1_axis = K.kernel_K1(zero, t, mass)
    yield "K1_axis_slope", zero, t, zero, _rel([K.kernel_K1_z(zero, t, mass)], [np.abs(k1_axis) / ph])

    # K0: value paths, derivative definition, KG equation, axis and edge
    k0 = K.kernel_K0(z, t, mass)
    k0s = K.kernel_K0_symmetric(z, t, mass)
    yield "K0_forms_agree", z, t, zero, _rel([k0, -k0s])

    edge_dist = -np.log(z + np.exp(-t))
    h = np.minimum(cfg.fd_step, cfg.edge_fraction * edge_dist)
    h = np.maximum(h, 1e-12)
    dE, dE_mag = _d_db("E", z, t, mass, h)
    yield "K0_b_derivative", z, t, zero, _rel([k0, dE], [dE_mag])

    dtt, dtt_mag = _d_db("tt", z, t, mass, h)
    drr, drr_mag = _d_db("rr", z, t, mass, h)
    decay = np.exp(-2 * t)
    yield "K0_kg_residual", z, t, zero, _rel([-dtt, decay * drr, -m2 * k0], [dtt_mag, decay * drr_mag])

    # one-sided second-order slope at the axis
    # K0 varies on the scale e^-t near the axis once t is large
    hz = 1e-3 * np.minimum(ph, np.exp(-t))
    f0 = K.kernel_K0(zero, t, mass)
    f1 = K.kernel_K0(hz, t, mass)
    f2 = K.kernel_K0(2 * hz, t, mass)
    stencil = [-3 * f0 / (2 * hz), 4 * f1 / (2 * hz), -f2 / (2 * hz)]
    yield "K0_axis_slope", zero, t, zero, _rel(stencil)

    lim = K.kernel_K0_boundary(t, mass)
    yield "K0_edge_value", ph, t, zero, _rel([K.kernel_K0_symmetric(ph, t, mass), -lim.value])
    balance = [
        (0.25 - m2) * np.exp(0.5 * t),
        -2 * np.exp(-t) * lim.value,
        4 * np.exp(-2 * t) * lim.dz,
        4 * np.exp(-t) * lim.dt,
    ]
    yield "K0_edge_balance", ph, t, zero, _rel(balance)


def run_kernel_identity_suite(
    sample_count: int = 200, mass_list: Sequence = DEFAULT_MASSES, cfg: IdentityConfig = IdentityConfig()
) -> SuiteReport:
    """Every kernel identity at ``sample_count`` Halton points for each mass.

    The tolerance is ``cfg.canary_tol`` at ``M = 1/2``, where all kernels
    collapse to elementary closed forms, and ``cfg.tol`` otherwise.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    report = SuiteReport("kernel_identities")
    for mass in mass_list:
        mass = as_mass(mass)
        tol = cfg.canary_tol if mass.value == 0.5 else cfg.tol
        for name, r, t, b, res in _kernel_identities(mass, sample_count, cfg):
            r, t, b, res = np.broadcast_arrays(r, t, b, res)
            for i in range(res.size):
                report.cases.append(
                    Case(f"{name}:{i}", float(r[i]), float(t[i]), float(b[i]), mass.value, float(res[i]), tol)
                )
    return report


# --------------------------------------------------------------------------
# mode oracle


def mode_fields(problem: ModeProblem):
    """Undamped inputs ``(v_f, v_phi0, v_phi1)`` for a separable problem."""
    vf = None if problem.forcing is None else SampledField.mode_source(problem.mu, problem.forcing)
    v0 = SampledField.mode(problem.mu, problem.c0)
    v1 = SampledField.mode(problem.mu, problem.c1)
    return vf, v0, v1


def mode_transform(problem: ModeProblem, t_grid, cfg: QuadratureConfig = DEFAULT_CONFIG):
    vf, v0, v1 = mode_fields(problem)
    return np.array([transform_full(vf, v0, v1, 0.0, float(t), problem.mass, cfg) for t in t_grid])


def run_mode_oracle_suite(
    problems: Sequence[ModeProblem], t_grid, cfg: QuadratureConfig = DEFAULT_CONFIG, tol: float = 1e-6
) -> SuiteReport:
    """Transform versus ODE integration for each problem.

    The residual is the largest error on ``t_grid`` divided by the largest
    oracle magnitude on the grid, so zero crossings do not inflate it.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0) or np.any(t_grid > 5):
        raise ValueError("t_grid must lie in [0, 5]")
    report = SuiteReport("mode_oracle")
    for i, prob in enumerate(problems):
        sol = ode_oracle(prob, float(t_grid.max()), tol=1e-12)
        y = sol(t_grid)
        u = mode_transform(prob, t_grid, cfg)
        err = np.abs(u - y)
        scale = max(float(np.max(np.abs(y))), 1e-300)
        j = int(np.argmax(err))
        name = prob.label or f"mode{i}"
        report.cases.append(Case(f"{name}:{i}", None, float(t_grid[j]), None, prob.mass.value, float(err[j] / scale), tol))
    return report


# --------------------------------------------------------------------------
# end-to-end grid comparison


@dataclass
class GridComparison:
    x: np.ndarray
    t: float
    u_transform: np.ndarray
    u_fd: np.ndarray

    @property
    def diff(self) -> np.ndarray:
        return self.u_transform - self.u_fd

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.diff)))


def compare_on_grid(
    problem: GridProblem1D, mass, t_max: float, dt: Optional[float] = None, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> GridComparison:
    """Transform with d'Alembert inputs against the leapfrog solution at ``t_max``."""
    if problem.phi0_fn is None:
        raise ValueError("grid problem needs profile functions; build it with from_functions")
    dt = 0.5 * problem.dx if dt is None else dt
    _, frames = fd_direct_solver(problem, mass, t_max, dt)
    v0 = SampledField.dalembert(problem.phi0_fn)
    v1 = None if problem.phi1_fn is None else SampledField.dalembert(problem.phi1_fn)
    vf = None if problem.f_fn is None else SampledField.dalembert_source(problem.f_fn)
    u = transform_full(vf, v0, v1, problem.x, t_max, mass, cfg)
    return GridComparison(problem.x, t_max, np.asarray(u, dtype=float), frames[-1])


def run_end_to_end_suite(
    problem: GridProblem1D,
    mass,
    t_max: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = 5e-3,
    dt: Optional[float] = None,
) -> SuiteReport:
    """Discrete L-infinity gap between transform and leapfrog at ``t_max``."""
    mass = as_mass(mass)
    cmp = compare_on_grid(problem, mass, t_max, dt, cfg)
    report = SuiteReport("end_to_end")
    report.cases.append(Case(f"grid_n{problem.n_x}:0", None, float(t_max), None, mass.value, cmp.linf, tol))
    return report


def gaussian_bump_problem(n_x: int = 401, half_width: float = 4.0, sigma: float = 0.3, boundary: str = "dirichlet"):
    """Gaussian initial displacement on ``[-half_width, half_width]``, zero velocity."""
    return GridProblem1D.from_functions(
        -half_width, half_width, n_x, lambda x: np.exp(-((x / sigma) ** 2)), boundary=boundary
    )
