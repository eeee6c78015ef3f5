"""Command-line front end.

Subcommands: ``eval`` (one kernel value), ``identities`` (kernel identity
suite as CSV), ``mode`` (transform vs ODE oracle on one separable problem)
and ``compare`` (transform vs leapfrog on a Gaussian bump).

Exit codes: 0 success, 1 failing identity case, 2 usage or domain error.
Any flag may also be given in a ``key=value`` file passed with ``--config``;
explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import kernels as K
from .errors import DskgError
from .kernels import Mass
from .quadrature import QuadratureConfig
from .verify import (
    DEFAULT_MASSES,
    IdentityConfig,
    compare_on_grid,
    gaussian_bump_problem,
    mode_transform,
    reports_to_csv,
    run_kernel_identity_suite,
)
from .wave_oracles import ModeProblem, ode_oracle

FORCINGS = {
    "none": None,
    "exp": lambda t: np.exp(-t),
    "one": lambda t: np.ones_like(np.asarray(t, dtype=float)),
    "sin": lambda t: np.sin(t),
}


class UsageError(Exception):
    pass


def _num(v) -> str:
    """Shortest round-trip text for a real or complex number."""
    v = complex(v)
    if v.imag == 0:
        return repr(v.real)
    return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}j"


def _add_mass(p):
    g = p.add_argument_group("mass")
    g.add_argument("--mass", type=float, default=None, help="real part of M (default 0.25 or suite list)")
    g.add_argument("--mass-imag", type=float, default=0.0, help="imaginary part of M (default 0)")
    g.add_argument("--physical-mass", type=float, default=None, help="physical mass m, sets M = -i m")


def _add_quad(p):
    g = p.add_argument_group("quadrature")
    g.add_argument("--panel-order", type=int, default=16, help="Gauss-Legendre nodes per panel (default 16)")
    g.add_argument("--tol", type=float, default=1e-9, help="quadrature tolerance (default 1e-9)")
    g.add_argument("--max-depth", type=int, default=24, help="bisection limit (default 24)")


def _mass(args, default=0.25) -> Mass:
    if args.physical_mass is not None:
        if args.mass is not None or args.mass_imag:
            raise UsageError("--physical-mass cannot be combined with --mass/--mass-imag")
        return Mass.physical(args.physical_mass)
    re = default if args.mass is None else args.mass
    return Mass(complex(re, args.mass_imag))


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(args.panel_order, args.tol, args.max_depth)


def _write(text: str, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    mass = _mass(args)
    if args.kernel == "E":
        val = K.kernel_E(args.r, args.t, args.b, mass)
    elif args.kernel == "K1":
        val = K.kernel_K1(args.r, args.t, mass)
    else:
        val = K.kernel_K0(args.r, args.t, mass)
    v = complex(val)
    text = f"{v.real:.17g}" if v.imag == 0 else f"{v.real:.17g}{v.imag:+.17g}j"
    print(text)
    return 0


def cmd_identities(args) -> int:
    if args.mass is not None or args.physical_mass is not None or args.mass_imag:
        masses = [_mass(args)]
    else:
        try:
            masses = [complex(s.strip()) for s in args.masses.split(",") if s.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --masses list: {exc}") from None
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    cfg = IdentityConfig(tol=args.identity_tol, seed=args.seed)
    report = run_kernel_identity_suite(args.samples, masses, cfg)
    _write(reports_to_csv([report]), args.out)
    for c in report.failures[:5]:
        print(f"FAIL {c.case_id} M={_num(c.mass)} residual={c.residual:.3e} tol={c.tol:.1e}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_mode(args) -> int:
    mass = _mass(args)
    if args.k is not None:
        mu = -args.k**4
    else:
        mu = -args.lam**2
    if args.t_max < 0 or args.t_max > 5:
        raise UsageError("--t-max must lie in [0, 5]")
    if args.n_t < 2:
        raise UsageError("--n-t must be >= 2")
    prob = ModeProblem(mu, mass, args.c0, args.c1, FORCINGS[args.forcing])
    t = np.linspace(0.0, args.t_max, args.n_t)
    u = mode_transform(prob, t, _quad(args))
    y = ode_oracle(prob, args.t_max, tol=1e-12)(t)
    rows = [(ti, ui, yi, abs(ui - yi)) for ti, ui, yi in zip(t, u, y)]
    _write(_csv(("t", "u_transform", "u_oracle", "abs_err"), rows), args.out)
    return 0


def cmd_compare(args) -> int:
    mass = _mass(args, default=0.5)
    prob = gaussian_bump_problem(args.n_x, args.half_width, args.sigma)
    cmp = compare_on_grid(prob, mass, args.t_max, args.dt, _quad(args))
    rows = [(x, cmp.t, ut, uf, d) for x, ut, uf, d in zip(cmp.x, cmp.u_transform, cmp.u_fd, cmp.diff)]
    _write(_csv(("x", "t", "u_transform", "u_fd", "diff"), rows), args.out)
    print(f"linf {cmp.linf:.6e}", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dskg", description="de Sitter Klein-Gordon integral transform tools")
    ap.add_argument("--config", default=None, help="key=value defaults file (flags override)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one kernel value")
    p.add_argument("--kernel", choices=("E", "K0", "K1"), required=True)
    p.add_argument("--r", type=float, required=True, help="radius (z for K0/K1)")
    p.add_argument("--t", type=float, required=True, help="observation time")
    p.add_argument("--b", type=float, default=0.0, help="source time for E (default 0)")
    _add_mass(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("identities", help="run the kernel identity suite, CSV to stdout")
    p.add_argument("--samples", type=int, default=200, help="Halton samples per mass (default 200)")
    p.add_argument(
        "--masses", default=",".join(_num(m) for m in DEFAULT_MASSES),
        help="comma list of complex masses (default %(default)s)",
    )
    p.add_argument("--seed", type=int, default=0, help="Halton scramble seed (default 0)")
    p.add_argument("--identity-tol", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    _add_mass(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("mode", help="transform vs ODE oracle on one eigenmode")
    p.add_argument("--lam", type=float, default=1.0, help="Laplacian mode frequency, mu = -lam^2 (default 1)")
    p.add_argument("--k", type=float, default=None, help="beam wavenumber, mu = -k^4 (overrides --lam)")
    p.add_argument("--c0", type=float, default=1.0, help="displacement coefficient (default 1)")
    p.add_argument("--c1", type=float, default=0.0, help="velocity coefficient (default 0)")
    p.add_argument("--forcing", choices=sorted(FORCINGS), default="none", help="g(t) (default none)")
    p.add_argument("--t-max", type=float, default=2.0, help="final time, at most 5 (default 2)")
    p.add_argument("--n-t", type=int, default=21, help="number of output times (default 21)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    _add_mass(p)
    _add_quad(p)
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("compare", help="transform vs leapfrog for a Gaussian bump")
    p.add_argument("--n-x", type=int, default=401, help="grid nodes (default 401)")
    p.add_argument("--t-max", type=float, default=1.0, help="final time (default 1)")
    p.add_argument("--half-width", type=float, default=4.0, help="domain is [-w, w] (default 4)")
    p.add_argument("--sigma", type=float, default=0.3, help="bump width (default 0.3)")
    p.add_argument("--dt", type=float, default=None, help="time step (default dx/2)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    _add_mass(p)
    _add_quad(p)
    p.set_defaults(func=cmd_compare)
    return ap


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, argv, config):
    """Install config values as subcommand defaults, type checked like flags."""
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_action.choices), None)
    if command is None:
        return
    sub = sub_action.choices[command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in config.items():
        act = known.get(key)
        if act is None or key == "help" or not act.option_strings:
            raise UsageError(f"config key {key!r} is not an option of {command!r}")
        try:
            value = act.type(raw) if act.type else raw
        except ValueError:
            raise UsageError(f"config value for {key!r} is invalid: {raw!r}") from None
        if act.choices is not None and value not in act.choices:
            raise UsageError(f"config value for {key!r} must be one of {sorted(act.choices)}")
        defaults[key] = value
        act.required = False
    sub.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    try:
        known, _ = pre.parse_known_args(argv)
        parser = build_parser()
        if known.config:
            _apply_config(parser, argv, read_config(known.config))
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    except (UsageError, DskgError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
