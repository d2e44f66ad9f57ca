"""Command-line front end.

Exit codes: 0 success, 2 a reproduction comparison exceeded its tolerance,
3 invalid parameters or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import numpy as np

from vicsim.correlations import asymptote_report, correlation_series, decomposition_for, intensity_pi, tau_grid
from vicsim.generator import FULL16_LABELS, build_block8, build_full16
from vicsim.manifest import Dataset, RunManifest, write_outputs
from vicsim.params import GeometryPrefactors, InvalidParameterError, SystemParams, load_config
from vicsim.propagator import COND_LIMIT, RESIDUAL_TOL, report_eigenvalues
from vicsim.reproduce import EIG_TOL, FIGURES, SWEEP_OUTPUTS, run_figure, run_sweep, run_table1
from vicsim.steady import residual, steady_analytic, steady_numeric

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARAMS = 3

TOLERANCES = {
    "eigen_reference_abs": EIG_TOL,
    "eigvec_condition_limit": COND_LIMIT,
    "reconstruction_residual": RESIDUAL_TOL,
    "imag_residue": 1e-10,
    "ode_local_tol": 1e-10,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are parameter errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def _float_list(raw: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--gamma0", type=float, default=None, help="decay-rate unit (default 1)")
    p.add_argument("--config", default=None, metavar="JSON", help="parameter file (gamma0, rabi_re, rabi_im, detuning, vic)")
    p.add_argument("--out-dir", default=None, metavar="DIR", help="write files and a run manifest here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--reduced-units", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--dipole", type=float, default=1.0, help="reduced dipole element (physical units only)")
    p.add_argument("--omega0", type=float, default=1.0, help="transition frequency (physical units only)")
    p.add_argument("--distance", type=float, default=1.0, help="observation distance (physical units only)")
    return p


def _physics() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--omega", type=float, default=None, help="Rabi frequency, units of gamma0 (real part)")
    p.add_argument("--omega-im", type=float, default=None, help="imaginary part of the Rabi frequency")
    p.add_argument("--delta", type=float, default=None, help="detuning, units of gamma0")
    p.add_argument("--q", type=int, choices=(0, 1), default=None, help="interference switch")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vicsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common, physics = _common(), _physics()

    sub.add_parser("steady", parents=[common, physics], help="steady state (closed form, checked against the null space)")
    sub.add_parser("eigs", parents=[common, physics], help="eigenvalues of the closed 8x8 block")
    sub.add_parser("table1", parents=[common], help="eigenvalues against the printed table")

    corr = sub.add_parser("corr", parents=[common, physics], help="photon-photon correlation series")
    corr.add_argument("--vic", choices=("both", "on", "off"), default="both")
    corr.add_argument("--tmax", type=float, default=20.0, help="units of 1/gamma0")
    corr.add_argument("--dt", type=float, default=0.02, help="units of 1/gamma0")
    corr.add_argument("--normalized", action="store_true", help="append g2 columns")

    fig = sub.add_parser("fig", parents=[common], help="data behind one figure")
    fig.add_argument("figure", type=int, choices=sorted(FIGURES))
    fig.add_argument("--tmax", type=float, default=20.0)
    fig.add_argument("--dt", type=float, default=0.02)

    sweep = sub.add_parser("sweep", parents=[common], help="grid over Rabi frequency and detuning")
    sweep.add_argument("--omegas", type=_float_list, required=True, metavar="W1,W2,...")
    sweep.add_argument("--deltas", type=_float_list, required=True, metavar="D1,D2,...")
    sweep.add_argument("--outputs", default=",".join(SWEEP_OUTPUTS), help="subset of " + ",".join(SWEEP_OUTPUTS))
    sweep.add_argument("--workers", type=int, default=1)

    dump = sub.add_parser("dump-generator", parents=[common, physics], help="generator matrix as (row, col, re, im)")
    dump.add_argument("--dim", type=int, choices=(8, 16), default=16)
    return parser


def resolve_params(args: argparse.Namespace) -> SystemParams:
    raw: dict[str, Any] = load_config(args.config) if args.config else {}
    overrides = {
        "gamma0": args.gamma0,
        "rabi_re": getattr(args, "omega", None),
        "rabi_im": getattr(args, "omega_im", None),
        "detuning": getattr(args, "delta", None),
        "vic": getattr(args, "q", None),
    }
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return SystemParams.from_mapping(raw)


def _geometry(args: argparse.Namespace) -> GeometryPrefactors | None:
    if args.reduced_units:
        return None
    return GeometryPrefactors(reduced_dipole=args.dipole, frequency=args.omega0, distance=args.distance)


def _emit(args: argparse.Namespace, manifest: RunManifest, datasets: list[Dataset], report: dict | None) -> None:
    if args.out_dir:
        reports = [(f"{manifest.command}_report", report)] if report is not None else []
        path = write_outputs(args.out_dir, manifest, datasets, reports)
        print(f"wrote {len(datasets)} dataset(s); manifest {path}", file=sys.stderr)
        return
    if args.format == "json":
        payload = report if report is not None else {
            ds.name: [dict(zip(ds.header, map(_jsonable, row))) for row in ds.rows] for ds in datasets
        }
        print(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable))
    else:
        for ds in datasets:
            sys.stdout.write(ds.to_csv())


def _jsonable(value: Any) -> Any:
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.generic):
        return value.item()
    return value


def _manifest(command: str, argv: Sequence[str], params: list[SystemParams], methods: dict[str, str], **settings) -> RunManifest:
    return RunManifest(
        command=command,
        argv=list(argv),
        params=[p.to_json() for p in params],
        eigensolver=methods,
        tolerances=dict(TOLERANCES),
        settings=settings,
    )


def cmd_steady(args, argv) -> int:
    params = resolve_params(args)
    exact = steady_analytic(params)
    numeric = steady_numeric(params=params)
    deviation = float(np.max(np.abs(exact.rho - numeric.rho)))
    comps = exact.components()
    ds = Dataset("steady", ("component", "re", "im"), [(k, v.real, v.imag) for k, v in comps.items()])
    geometry = _geometry(args)
    intensity = intensity_pi(params, geometry)
    report = {
        "params": params.to_json(),
        "components": {k: {"re": v.real, "im": v.imag} for k, v in comps.items()},
        "intensity_pi_reduced": intensity.reduced,
        "intensity_pi_physical": intensity.physical,
        "analytic_numeric_max_deviation": deviation,
        "numeric_residual": residual(numeric),
        "trace": float(np.trace(exact.rho).real),
    }
    manifest = _manifest("steady", argv, [params], {}, reduced_units=args.reduced_units)
    _emit(args, manifest, [ds], report if args.format == "json" or args.out_dir else None)
    return EXIT_OK


def cmd_eigs(args, argv) -> int:
    params = resolve_params(args)
    rep = report_eigenvalues(params)
    lam = rep.eigenvalues / params.gamma0
    ds = Dataset("eigs", ("re", "im"), [(z.real, z.imag) for z in lam])
    report = rep.as_dict()
    report["units"] = "gamma0"
    report["eigenvalues"] = [{"re": float(z.real), "im": float(z.imag)} for z in lam]
    manifest = _manifest("eigs", argv, [params], {"block8": rep.method})
    _emit(args, manifest, [ds], report if args.format == "json" or args.out_dir else None)
    return EXIT_OK


def cmd_table1(args, argv) -> int:
    result = run_table1()
    methods = {r.label: r.method for r in result.readings}
    params = [SystemParams(rabi=r.rabi, detuning=r.detuning) for r in result.readings]
    manifest = _manifest("table1", argv, params, methods)
    _emit(args, manifest, [result.dataset()], result.as_dict() if args.format == "json" or args.out_dir else None)
    for r in result.readings:
        flag = "ok" if r.as_expected else "UNEXPECTED"
        print(f"{r.label}: {r.status} (max |delta| = {r.max_delta:.3g}) [{flag}]", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_VALIDATION


def cmd_corr(args, argv) -> int:
    params = resolve_params(args)
    tau = tau_grid(args.tmax, args.dt, params.gamma0)
    series = correlation_series(params, tau, _geometry(args))
    ds = Dataset.from_columns("corr", series.columns(args.vic, normalized=args.normalized))
    report = None
    if args.format == "json" or args.out_dir:
        report = {"params": params.to_json(), "asymptotes": asymptote_report(params).as_dict()}
    manifest = _manifest(
        "corr", argv, [params], {"block8": series.method},
        tmax=args.tmax, dt=args.dt, vic=args.vic, normalized=args.normalized,
        prefactor_mode=series.prefactor_mode,
    )
    if args.format == "json" and not args.out_dir:
        report["series"] = {k: list(map(float, v)) for k, v in ds_columns(ds).items()}
    _emit(args, manifest, [ds], report)
    return EXIT_OK


def ds_columns(ds: Dataset) -> dict[str, list]:
    return {h: ds.column(h) for h in ds.header}


def cmd_fig(args, argv) -> int:
    gamma0 = args.gamma0 if args.gamma0 is not None else 1.0
    ds = run_figure(args.figure, gamma0=gamma0, tmax=args.tmax, dt=args.dt)
    params = SystemParams.from_mapping(ds.meta["params"])
    manifest = _manifest(f"fig{args.figure}", argv, [params], {"block8": ds.meta["eigensolver"]}, tmax=args.tmax, dt=args.dt)
    _emit(args, manifest, [ds], None)
    return EXIT_OK


def cmd_sweep(args, argv) -> int:
    gamma0 = args.gamma0 if args.gamma0 is not None else 1.0
    outputs = [o.strip() for o in args.outputs.split(",") if o.strip()]
    ds = run_sweep(args.omegas, args.deltas, outputs, gamma0=gamma0, workers=args.workers)
    params = [SystemParams(gamma0=gamma0, rabi=w, detuning=d) for w in args.omegas for d in args.deltas]
    manifest = _manifest("sweep", argv, params, ds.meta["eigensolver"], outputs=ds.meta["outputs"])
    _emit(args, manifest, [ds], None)
    return EXIT_OK


def cmd_dump_generator(args, argv) -> int:
    params = resolve_params(args)
    gen = build_block8(params) if args.dim == 8 else build_full16(params)
    rows = []
    for r, c in zip(*np.nonzero(gen.matrix)):
        z = gen.matrix[r, c]
        rows.append((int(r) + 1, int(c) + 1, z.real, z.imag))
    ds = Dataset(f"generator{args.dim}", ("row", "col", "re", "im"), rows)
    report = {
        "params": params.to_json(),
        "dim": args.dim,
        "labels": [f"rho{label}" for label in FULL16_LABELS[: args.dim]],
    }
    manifest = _manifest("dump-generator", argv, [params], {})
    _emit(args, manifest, [ds], report if args.out_dir else None)
    return EXIT_OK


COMMANDS = {
    "steady": cmd_steady,
    "eigs": cmd_eigs,
    "table1": cmd_table1,
    "corr": cmd_corr,
    "fig": cmd_fig,
    "sweep": cmd_sweep,
    "dump-generator": cmd_dump_generator,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, argv)
    except InvalidParameterError as exc:
        print(f"vicsim: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    raise SystemExit(main())
