"""Command line entry point: ``weylherm {run,convergence,presets,wigner}``.

Exit codes: 0 success, 2 configuration or usage error, 3 solver failure,
4 I/O failure.
"""
import argparse
import os
import sys

from .dynamics import KrylovNoConvergence, run
from .grid import Grid1D
from .io import ObservableWriter, read_snapshot, snapshot_stem, write_snapshot, write_wigner_csv
from .observables import wigner
from .reference_oracle import convergence_study, write_convergence_csv
from .scenario import ConfigError
from .states import PRESET_NAMES, get_preset

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

TABLE_REFINEMENTS = (0.64, 0.32, 0.16, 0.08, 0.04)


def _scenario(args):
    from .config import parse_config
    if args.config and args.preset:
        raise ConfigError("preset", "give either --preset or --config, not both")
    if args.config:
        return parse_config(args.config, desk=args.desk)
    return parse_config(args.preset or "harmonic", desk=args.desk)


def _out_dir(args, scenario):
    return args.out_dir or scenario.output.out_dir or os.path.join("runs", scenario.name)


def cmd_run(args):
    scenario = _scenario(args)
    out_dir = _out_dir(args, scenario)
    os.makedirs(out_dir, exist_ok=True)
    xi = scenario.output.xi_grid()
    grid = scenario.grid

    def on_snapshot(t, R):
        stem = snapshot_stem(out_dir, t)
        write_snapshot(stem, R, scenario.a, scenario.b, scenario.hbar, t)
        write_wigner_csv(stem + "_wigner.csv", wigner(R, grid, xi))

    progress = None if args.quiet else sys.stderr
    with ObservableWriter(os.path.join(out_dir, "observables.csv")) as writer:
        try:
            out = run(scenario, on_record=writer, on_snapshot=on_snapshot, progress=progress)
        except KrylovNoConvergence as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SOLVER
    if not args.quiet:
        print(f"{out.steps} steps, outputs in {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_convergence(args):
    scenario = _scenario(args)
    refinements = TABLE_REFINEMENTS if args.refinements is None else args.refinements
    if not refinements:
        print("error: empty refinement list", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = convergence_study(scenario, refinements, n_max=args.n_max)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KrylovNoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    path = args.output or os.path.join(_out_dir(args, scenario), "convergence.csv")
    if os.path.dirname(path):
        os.makedirs(os.path.dirname(path), exist_ok=True)
    write_convergence_csv(rows, path)
    for r in rows:
        order = "-" if r.order is None else f"{r.order:.2f}"
        print(f"{r.dt:8.4f}  {r.error:.5e}  {order}")
    return EXIT_OK


def cmd_presets(args):
    for name in PRESET_NAMES:
        s = get_preset(name, desk=args.desk)
        print(f"{s.name:16s} V={s.potential:16s} hbar={s.hbar:<5g} N={s.n_max:<4d} "
              f"Nx={s.nx:<5d} [{s.a:g},{s.b:g}] dt={s.dt:g} T={s.t_final:g} coupling={s.coupling}")
    return EXIT_OK


def cmd_wigner(args):
    snap = read_snapshot(args.snapshot)
    grid = Grid1D(snap.a, snap.b, snap.field.shape[1])
    import numpy as np
    wf = wigner(snap.field, grid, np.linspace(args.xi_min, args.xi_max, args.xi_count))
    stem = args.snapshot[:-4] if args.snapshot.endswith((".txt", ".bin")) else args.snapshot
    write_wigner_csv(args.output or stem + "_wigner.csv", wf)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="weylherm",
                                description="Hermite/finite-volume solver for the von Neumann equation")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_flags(sp):
        sp.add_argument("--preset", choices=PRESET_NAMES)
        sp.add_argument("--config", help="config file (may itself start from a preset)")
        sp.add_argument("--desk", action="store_true", help="reduced-resolution variant")
        sp.add_argument("--out-dir")

    sp = sub.add_parser("run", help="integrate a scenario and write observables and snapshots")
    scenario_flags(sp)
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("convergence", help="error table against the exact harmonic solution")
    scenario_flags(sp)
    sp.add_argument("--refinements", type=float, nargs="*", help="dt = dx values, coarse to fine")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--output", help="CSV path (default <out-dir>/convergence.csv)")
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("presets", help="list the built-in scenarios")
    sp.add_argument("--desk", action="store_true")
    sp.set_defaults(func=cmd_presets)

    sp = sub.add_parser("wigner", help="Wigner CSV from a field snapshot")
    sp.add_argument("snapshot", help="snapshot stem or its .txt/.bin file")
    sp.add_argument("--xi-min", type=float, default=-8.0)
    sp.add_argument("--xi-max", type=float, default=8.0)
    sp.add_argument("--xi-count", type=int, default=256)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_wigner)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        field = f" [{exc.field}]" if getattr(exc, "field", None) else ""
        print(f"config error{field}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
