"""Batch command-line front end (``nqr-entangle``).

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys

from .conventions import run_metadata
from .entanglement import QubitMapping
from .errors import NQRError
from .model import (
    ModelParams,
    Orientation,
    UnitConvention,
    ZeemanSign,
    all_presets,
    get_preset,
    physical_to_dimensionless,
    temperature_for_beta,
    thermal_state,
)
from .output import as_table, emit_csv, emit_json
from .scan import (
    Axis,
    SweepResult,
    SweepSpec,
    critical_beta,
    evaluate_point,
    max_over_angles_surface,
    maximize_over_angles,
    sweep,
    temperature_scan,
)
from .spin_algebra import SPIN_3_2


PROG = "nqr-entangle"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parser


def _add_model_flags(p, *, alpha=True, beta=True):
    if alpha:
        p.add_argument("--alpha", type=float, default=0.0,
                       help="Zeeman energy gamma*H0/(kB*T), dimensionless (default 0)")
    if beta:
        p.add_argument("--beta", type=float, default=0.0,
                       help="quadrupole energy eQq/(4I(2I-1)kB*T), dimensionless (default 0)")
    p.add_argument("--eta", type=float, default=0.0,
                   help="EFG asymmetry parameter in [0, 1] (default 0)")
    p.add_argument("--theta", type=float, default=0.0,
                   help="polar angle of the field in the EFG frame, radians in [0, pi]")
    p.add_argument("--phi", type=float, default=0.0,
                   help="azimuthal angle of the field in the EFG frame, radians in [0, 2pi)")
    p.add_argument("--degrees", action="store_true",
                   help="read --theta/--phi and angle grid axes in degrees")
    p.add_argument("--zeeman-sign", choices=[s.value for s in ZeemanSign], default="paper",
                   help="sign of alpha*Iz in the Gibbs exponent: paper (-) or physical (+)")
    p.add_argument("--mapping", default="0,1,2,3",
                   help="two-qubit index of the levels m=3/2,1/2,-1/2,-3/2 (default 0,1,2,3)")


def _add_output_flags(p):
    p.add_argument("--format", choices=["csv", "json"], default=None,
                   help="output format (default: csv for grids, json otherwise)")
    p.add_argument("--output", default="-", help="output file path, '-' for stdout")


def _add_workers(p):
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for grid evaluation (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Thermal entanglement of a spin-3/2 nucleus in an EFG plus magnetic field.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("state", help="print the thermal density matrix")
    _add_model_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("measure", help="concurrence, EoF and subsystem entropies at one point")
    _add_model_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="evaluate the measures on a 1-D or 2-D parameter grid")
    _add_model_flags(p)
    p.add_argument("--grid", action="append", default=[], metavar="AXIS:MIN:MAX:COUNT[:log]",
                   help="swept axis (alpha, beta, theta, phi, eta or T); repeat once for 2-D")
    p.add_argument("--ratio", type=float, default=None,
                   help="tie alpha = ratio*beta (dimensionless) at every grid point")
    _add_workers(p)
    _add_output_flags(p)

    p = sub.add_parser("scan-temp", help="concurrence vs reduced temperature 1/beta at fixed alpha/beta")
    _add_model_flags(p, alpha=False, beta=False)
    p.add_argument("--ratio", type=float, required=True, help="alpha/beta, dimensionless, > 0")
    p.add_argument("--grid", action="append", default=[], metavar="beta:MIN:MAX:COUNT[:log]",
                   help="beta grid (dimensionless; default beta:0.01:100:81:log)")
    _add_workers(p)
    _add_output_flags(p)

    p = sub.add_parser("critical", help="bisect for the beta at which concurrence appears")
    _add_model_flags(p, alpha=False, beta=False)
    p.add_argument("--ratio", type=float, required=True, help="alpha/beta, dimensionless, > 0")
    p.add_argument("--threshold", type=float, default=1e-6,
                   help="concurrence cutoff defining the onset (default 1e-6)")
    p.add_argument("--tol", type=float, default=1e-3,
                   help="final bracket width in beta, dimensionless (default 1e-3)")
    _add_output_flags(p)

    p = sub.add_parser("optimize", help="field orientation maximising concurrence")
    _add_model_flags(p)
    p.add_argument("--grid-n", type=int, default=181,
                   help="coarse theta points on [0, pi] (phi uses the same step)")
    p.add_argument("--refine-iters", type=int, default=40,
                   help="golden-section iterations per angle")
    p.add_argument("--grid", action="append", default=[], metavar="AXIS:MIN:MAX:COUNT",
                   help="alpha and beta axes: produce the maximised surface instead")
    _add_workers(p)
    _add_output_flags(p)

    p = sub.add_parser("convert", help="physical units to dimensionless alpha, beta (or beta to T)")
    p.add_argument("--material", required=True, help="preset label, e.g. cu63-5coord")
    p.add_argument("--unit-convention", choices=[c.value for c in UnitConvention], required=True,
                   help="beta energy scale: reduced eQq/(4I(2I-1)) or full eQq")
    p.add_argument("--gamma-mhz-per-t", type=float, default=0.0,
                   help="gyromagnetic ratio gamma/2pi in MHz/T")
    p.add_argument("--field-t", type=float, default=0.0, help="applied field H0 in tesla")
    p.add_argument("--temp-k", type=float, default=None, help="lattice temperature in kelvin")
    p.add_argument("--beta", type=float, default=None,
                   help="solve for the temperature (kelvin) giving this dimensionless beta")
    _add_output_flags(p)

    p = sub.add_parser("presets", help="list material presets (built-in plus $NQR_PRESETS)")
    _add_output_flags(p)
    return parser


# ---------------------------------------------------------------------------
# validation


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _orientation(args) -> Orientation:
    theta = _angle(args.theta, args.degrees)
    phi = _angle(args.phi, args.degrees)
    if not 0.0 <= theta <= math.pi:
        raise UsageError(f"--theta must lie in [0, pi] radians, got {theta}")
    if not 0.0 <= phi < 2 * math.pi:
        raise UsageError(f"--phi must lie in [0, 2pi) radians, got {phi}")
    return Orientation(theta, phi)


def _eta(args) -> float:
    if not 0.0 <= args.eta <= 1.0:
        raise UsageError(f"--eta must lie in [0, 1], got {args.eta}")
    return args.eta


def _finite(name, value):
    if value is not None and not math.isfinite(value):
        raise UsageError(f"--{name} must be finite")
    return value


def _mapping(args) -> QubitMapping:
    try:
        return QubitMapping(tuple(int(x) for x in args.mapping.split(",")))
    except ValueError as exc:
        raise UsageError(f"--mapping: {exc}") from None


def _params(args, alpha=None, beta=None) -> ModelParams:
    a = _finite("alpha", args.alpha if alpha is None else alpha)
    b = _finite("beta", args.beta if beta is None else beta)
    return ModelParams(a, b, _eta(args), _orientation(args), ZeemanSign(args.zeeman_sign))


def _axis(text: str, degrees: bool = False) -> Axis:
    parts = text.split(":")
    spacing = "linear"
    if len(parts) == 5:
        spacing = parts.pop()
    if len(parts) != 4:
        raise UsageError(f"--grid {text!r} is not AXIS:MIN:MAX:COUNT[:log]")
    name, lo, hi, n = parts
    try:
        lo, hi, count = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"--grid {text!r}: MIN/MAX must be numbers and COUNT an integer") from None
    if degrees and name in ("theta", "phi"):
        lo, hi = math.radians(lo), math.radians(hi)
    try:
        return Axis(name, lo, hi, count, spacing)
    except NQRError as exc:
        raise UsageError(f"--grid {text!r}: {exc}") from None


def _grids(args, limit=2):
    if len(args.grid) > limit:
        raise UsageError(f"--grid may be given at most {limit} times")
    return [_axis(g, getattr(args, "degrees", False)) for g in args.grid]


# ---------------------------------------------------------------------------
# commands


def _table(columns, rows, meta) -> SweepResult:
    return SweepResult(tuple(columns), [tuple(r) for r in rows], meta)


def _cmd_state(args):
    p = _params(args)
    rho = thermal_state(SPIN_3_2, p)
    meta = run_metadata(_mapping(args), p.zeeman_sign, params=_param_dict(p))
    if args.format == "csv":
        rows = [(i, j, float(rho[i, j].real), float(rho[i, j].imag))
                for i in range(4) for j in range(4)]
        return _table(("row", "col", "re", "im"), rows, meta), None
    doc = {"rho_real": rho.real.tolist(), "rho_imag": rho.imag.tolist()}
    return doc, meta


def _param_dict(p: ModelParams) -> dict:
    return {"alpha": p.alpha, "beta": p.beta, "eta": p.eta, "theta": p.theta, "phi": p.phi}


def _cmd_measure(args):
    p = _params(args)
    mapping = _mapping(args)
    rep = evaluate_point(p, mapping)
    meta = run_metadata(mapping, p.zeeman_sign, params=_param_dict(p))
    if args.format == "csv":
        cols = ("concurrence", "eof", "entropy_a", "entropy_b", "nu1", "nu2", "nu3", "nu4")
        row = (rep.concurrence, rep.eof, rep.entropy_a, rep.entropy_b) + tuple(rep.nu)
        return _table(cols, [row], meta), None
    return rep, meta


def _cmd_sweep(args):
    axes = _grids(args)
    if not axes:
        raise UsageError("sweep needs at least one --grid")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    fixed = _params(args)
    try:
        spec = SweepSpec(axes[0], axes[1] if len(axes) > 1 else None, fixed,
                         _finite("ratio", args.ratio), _mapping(args))
    except NQRError as exc:
        raise UsageError(str(exc)) from None
    return sweep(spec, args.workers), None


def _cmd_scan_temp(args):
    axes = _grids(args, limit=1) or [Axis("beta", 0.01, 100.0, 81, "log")]
    ax = axes[0]
    if ax.name != "beta" or ax.start <= 0:
        raise UsageError("scan-temp takes a positive beta:MIN:MAX:COUNT grid")
    if not (args.ratio > 0 and math.isfinite(args.ratio)):
        raise UsageError("--ratio must be positive")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return temperature_scan(args.ratio, _eta(args), _orientation(args),
                            (ax.start, ax.stop, ax.count), ax.spacing, _mapping(args),
                            ZeemanSign(args.zeeman_sign), args.workers), None


def _cmd_critical(args):
    if not (args.ratio > 0 and math.isfinite(args.ratio)):
        raise UsageError("--ratio must be positive")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    o, eta, mapping = _orientation(args), _eta(args), _mapping(args)
    zs = ZeemanSign(args.zeeman_sign)
    cp = critical_beta(args.ratio, eta, o, args.threshold, args.tol, mapping=mapping,
                       zeeman_sign=zs)
    meta = run_metadata(mapping, zs, eta=eta, theta=o.theta, phi=o.phi, tol=args.tol)
    return cp, meta


def _cmd_optimize(args):
    if args.grid_n < 3:
        raise UsageError("--grid-n must be >= 3")
    if args.refine_iters < 0:
        raise UsageError("--refine-iters must be >= 0")
    mapping, zs, eta = _mapping(args), ZeemanSign(args.zeeman_sign), _eta(args)
    axes = _grids(args)
    if axes:
        names = sorted(a.name for a in axes)
        if names != ["alpha", "beta"]:
            raise UsageError("optimize surface needs exactly one alpha and one beta --grid")
        a = next(x for x in axes if x.name == "alpha")
        b = next(x for x in axes if x.name == "beta")
        return max_over_angles_surface((a.start, a.stop, a.count), (b.start, b.stop, b.count),
                                       eta, args.grid_n, args.refine_iters, mapping, zs,
                                       args.workers), None
    alpha, beta = _finite("alpha", args.alpha), _finite("beta", args.beta)
    opt = maximize_over_angles(alpha, beta, eta, args.grid_n, args.refine_iters, mapping, zs)
    meta = run_metadata(mapping, zs, alpha=alpha, beta=beta, eta=eta, grid_n=args.grid_n,
                        refine_iters=args.refine_iters)
    if args.format == "csv":
        return _table(("theta_star", "phi_star", "concurrence"), [tuple(opt)], meta), None
    return {"theta_star": opt.theta_star, "phi_star": opt.phi_star, "c_star": opt.c_star}, meta


def _cmd_convert(args):
    try:
        material = get_preset(args.material, all_presets())
    except KeyError:
        raise UsageError(f"unknown material {args.material!r}; see the presets command") from None
    conv = UnitConvention(args.unit_convention)
    meta = {"unit_convention": conv.value, "material": material.to_dict()}
    if args.beta is not None:
        if not args.beta > 0:
            raise UsageError("--beta must be positive to solve for a temperature")
        t = temperature_for_beta(material, args.beta, conv)
        doc = {"beta": args.beta, "temp_k": t}
    else:
        if args.temp_k is None:
            raise UsageError("convert needs --temp-k (or --beta to solve for T)")
        if not args.temp_k > 0:
            raise UsageError(f"--temp-k must be positive, got {args.temp_k}")
        p = physical_to_dimensionless(material, args.gamma_mhz_per_t, args.field_t,
                                      args.temp_k, conv)
        doc = {"alpha": p.alpha, "beta": p.beta, "eta": p.eta, "temp_k": args.temp_k,
               "field_t": args.field_t, "gamma_mhz_per_t": args.gamma_mhz_per_t}
    if args.format == "csv":
        return _table(tuple(doc), [tuple(doc.values())], meta), None
    return doc, meta


def _cmd_presets(args):
    presets = all_presets()
    rows = [tuple(p.to_dict().values()) for p in presets]
    cols = ("label", "eqq_zz_mhz", "eta", "quadrupole_moment_cm2", "site")
    if args.format == "csv":
        return _table(cols, rows, {}), None
    return {"presets": [p.to_dict() for p in presets]}, {}


COMMANDS = {
    "state": _cmd_state,
    "measure": _cmd_measure,
    "sweep": _cmd_sweep,
    "scan-temp": _cmd_scan_temp,
    "critical": _cmd_critical,
    "optimize": _cmd_optimize,
    "convert": _cmd_convert,
    "presets": _cmd_presets,
}


def run(argv=None) -> int:
    """Run one command; return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, meta = COMMANDS[args.command](args)
        fmt = args.format or ("csv" if isinstance(result, SweepResult) else "json")
        if fmt == "csv":
            emit_csv(as_table(result, meta), args.output)
        else:
            emit_json(result, args.output, meta)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{PROG} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except NQRError as exc:
        print(f"{PROG} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"{PROG} {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():  # pragma: no cover
    sys.exit(run())

if __name__ == "__main__":  # pragma: no cover
    main()
