"""Command-line surface: walk, sweep, spectrum, emulate.

Every run writes its data files plus exactly one JSON manifest recording
the resolved configuration (angles echoed in both degrees and radians),
the package version, the seed where one applies, timestamps and the output
paths.  Files are written atomically (temp file, then rename).  CSV output
is UTF-8, comma-delimited, decimal point, 12 significant digits, header
row always present.

Exit codes: 0 success, 2 flag or validation error, 3 numerical
consistency error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .core import (
    CoinAngle,
    CoinState,
    ConsistencyError,
    DefectSpec,
    NAMED_STATES,
    ValidationError,
    WalkConfig,
    make_initial,
    named_state,
)
from . import emulate as emu
from . import spectral
from . import walk as wk

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONSISTENCY = 3


def _fmt(x) -> str:
    """CSV number formatting: 12 significant digits."""
    return f"{float(x):.12g}"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write_text_atomic(path: str, text: str) -> None:
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".partial-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt(v)
    return str(v)


def _write_table(path_base: str, fmt: str, columns, rows):
    """Write a table as CSV or JSON; returns the path actually written."""
    if fmt == "json":
        path = path_base + ".json"
        payload = [dict(zip(columns, r)) for r in rows]
        _write_text_atomic(path, json.dumps(payload, indent=1) + "\n")
        return path
    path = path_base + ".csv"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    _write_text_atomic(path, buf.getvalue())
    return path


def _write_json(path: str, obj) -> str:
    _write_text_atomic(path, json.dumps(obj, indent=1) + "\n")
    return path


def _manifest(path, command, config, outputs, seed=None, rng_algorithm=None, started=None):
    m = {
        "command": command,
        "version": __version__,
        "config": config,
        "seed": seed,
        "outputs": [os.path.abspath(p) for p in outputs],
        "started_utc": started,
        "finished_utc": _utc_now(),
    }
    if rng_algorithm is not None:
        m["rng_algorithm"] = rng_algorithm
    return _write_json(path, m)


def _angles_echo(config: dict) -> dict:
    """Add radian twins next to every *_deg entry, recursively."""
    out = {}
    for k, v in config.items():
        if isinstance(v, dict):
            out[k] = _angles_echo(v)
        else:
            out[k] = v
            if k.endswith("_deg") and isinstance(v, (int, float)):
                out[k[:-4] + "_rad"] = math.radians(v)
    return out


def _parse_init(args) -> CoinState:
    if getattr(args, "init_amps", None):
        parts = args.init_amps.split(",")
        if len(parts) != 4:
            raise ValidationError("--init-amps wants four comma-separated numbers: re,im,re,im")
        try:
            a = [float(p) for p in parts]
        except ValueError as e:
            raise ValidationError(f"--init-amps: {e}") from None
        return CoinState.from_amplitudes(complex(a[0], a[1]), complex(a[2], a[3]))
    return named_state(args.init or "antisym")


def _parse_defect(args) -> DefectSpec | None:
    no_defect = getattr(args, "no_defect", False)
    phi = getattr(args, "phi", None)
    if no_defect:
        if phi is not None:
            raise ValidationError("--no-defect and --phi are mutually exclusive")
        return None
    if phi is None:
        raise ValidationError("give a defect phase with --phi, or pass --no-defect")
    return DefectSpec(args.defect_site, phi)


def _init_label(args) -> str:
    if getattr(args, "init_amps", None):
        return f"amps({args.init_amps})"
    return args.init or "antisym"


def _walk_config_dict(cfg: WalkConfig, args) -> dict:
    c = {
        "steps": cfg.steps,
        "theta_deg": cfg.coin.theta_deg,
        "initial_site": cfg.initial_site,
        "init": _init_label(args),
        "init_amp_h": [cfg.initial_coin.amp_h.real, cfg.initial_coin.amp_h.imag],
        "init_amp_v": [cfg.initial_coin.amp_v.real, cfg.initial_coin.amp_v.imag],
        "recurrence_site": cfg.recurrence_site,
    }
    if cfg.defect is None:
        c["defect"] = None
    else:
        c["defect"] = {"site": cfg.defect.site, "phase_deg": cfg.defect.phase_deg}
    return _angles_echo(c)


def _parse_grid(args) -> list:
    if args.values:
        try:
            grid = [float(v) for v in args.values.split(",") if v.strip() != ""]
        except ValueError as e:
            raise ValidationError(f"--values: {e}") from None
    elif args.start is not None and args.stop is not None and args.step is not None:
        if args.step <= 0:
            raise ValidationError("--step must be positive")
        n = int(math.floor((args.stop - args.start) / args.step + 1e-9)) + 1
        grid = [args.start + i * args.step for i in range(max(n, 0))]
    else:
        raise ValidationError("give a grid with --values or with --start/--stop/--step")
    if not grid:
        raise ValidationError("empty parameter grid")
    return grid


# ---------------------------------------------------------------- walk

def cmd_walk(args) -> int:
    started = _utc_now()
    cfg = WalkConfig(
        steps=args.steps,
        coin=CoinAngle(args.theta),
        defect=_parse_defect(args),
        initial_site=args.initial_site,
        initial_coin=_parse_init(args),
    )
    rec = wk.evolve(cfg)

    rows = []
    for t, d in enumerate(rec.distributions):
        for x, p in zip(d.positions(), d.probs):
            rows.append([t, int(x), float(p)])
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.prefix)
    dist_path = _write_table(base + "_distribution", args.format, ["step", "x", "p"], rows)

    summary = {
        "config": _walk_config_dict(cfg, args),
        "variance": [float(v) for v in rec.variances],
        "recurrence": [float(r) for r in rec.recurrences],
        "recurrence_site": rec.recurrence_site,
        "final_variance": rec.final_variance,
        "final_recurrence": rec.final_recurrence,
    }
    summary_path = _write_json(base + "_summary.json", summary)
    _manifest(
        base + "_manifest.json", "walk", summary["config"],
        [dist_path, summary_path], started=started,
    )
    return EXIT_OK


# --------------------------------------------------------------- sweep

def cmd_sweep(args) -> int:
    started = _utc_now()
    grid = _parse_grid(args)
    init = _parse_init(args)

    if args.sweep == "phi":
        base_cfg = WalkConfig(
            steps=args.steps,
            coin=CoinAngle(args.theta),
            defect=DefectSpec(args.defect_site, grid[0]),
            initial_site=args.initial_site,
            initial_coin=init,
        )
        table = wk.sweep_phase(base_cfg, grid)
    else:
        base_cfg = WalkConfig(
            steps=args.steps,
            coin=CoinAngle(args.theta),
            defect=_parse_defect(args),
            initial_site=args.initial_site,
            initial_coin=init,
        )
        table = wk.sweep_coin(base_cfg, grid)

    rows = [
        [float(v), float(s2), float(r)]
        for v, s2, r in zip(table.values, table.variances, table.recurrences)
    ]
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.prefix)
    table_path = _write_table(
        base + "_table", args.format, [table.parameter, "variance", "recurrence"], rows
    )

    imax = int(np.argmax(table.recurrences))
    config = _walk_config_dict(base_cfg, args)
    config["sweep"] = {"parameter": table.parameter, "grid": [float(g) for g in grid]}
    summary = {
        "config": config,
        "max_recurrence": {"value": float(table.recurrences[imax]), table.parameter: float(table.values[imax])},
        "min_variance": {
            "value": float(table.variances.min()),
            table.parameter: float(table.values[int(np.argmin(table.variances))]),
        },
    }
    summary_path = _write_json(base + "_summary.json", summary)
    _manifest(base + "_manifest.json", "sweep", config, [table_path, summary_path], started=started)
    return EXIT_OK


# ------------------------------------------------------------ spectrum

def cmd_spectrum(args) -> int:
    started = _utc_now()
    init_state = None
    if args.init or args.init_amps:
        init_state = make_initial(args.initial_site, _parse_init(args))

    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.prefix)
    coin = CoinAngle(args.theta)

    config = {
        "theta_deg": args.theta,
        "defect_site": args.defect_site,
        "num_sites": args.L,
        "radius": args.radius,
        "mass_threshold": args.threshold,
        "init": _init_label(args) if init_state is not None else None,
        "initial_site": args.initial_site if init_state is not None else None,
    }

    if args.phi_values:
        grid = [float(v) for v in args.phi_values.split(",") if v.strip() != ""]
        if not grid:
            raise ValidationError("empty --phi-values grid")
        if init_state is None:
            init_state = make_initial(args.initial_site, named_state("antisym"))
            config["init"] = "antisym"
            config["initial_site"] = args.initial_site
        phis, overlaps, counts = spectral.sweep_overlap_phase(
            coin, args.defect_site, grid, init_state,
            num_sites=args.L, radius=args.radius, mass_threshold=args.threshold,
        )
        config["phi_grid_deg"] = [float(g) for g in grid]
        config = _angles_echo(config)
        rows = [[float(p), int(c), float(o)] for p, c, o in zip(phis, counts, overlaps)]
        table_path = _write_table(
            base + "_table", args.format, ["phi_deg", "localized_count", "overlap"], rows
        )
        summary = {
            "config": config,
            "max_overlap": {"value": float(overlaps.max()), "phi_deg": float(phis[int(np.argmax(overlaps))])},
            "localized_counts": [[float(p), int(c)] for p, c in zip(phis, counts)],
        }
        summary_path = _write_json(base + "_summary.json", summary)
        _manifest(base + "_manifest.json", "spectrum", config, [table_path, summary_path], started=started)
        return EXIT_OK

    if args.phi is None:
        raise ValidationError("give --phi for a single spectrum, or --phi-values for a sweep")
    config["phi_deg"] = float(args.phi)
    config = _angles_echo(config)
    spec = spectral.LatticeSpec(coin, DefectSpec(args.defect_site, args.phi), args.L)
    report = spectral.analyze(spec, init_state, radius=args.radius, mass_threshold=args.threshold)

    rows = []
    for k in range(len(report.eigenvalues)):
        lam = report.eigenvalues[k]
        rows.append([
            k, float(lam.real), float(lam.imag), float(np.angle(lam)),
            bool(report.localized_flags[k]), float(report.ipr[k]),
        ])
    table_path = _write_table(
        base + "_eigenvalues", args.format,
        ["k", "re", "im", "angle_rad", "localized", "ipr"], rows,
    )
    summary = {
        "config": config,
        "localized_count": report.localized_count,
        "localized_indices": [int(i) for i in report.localized_indices()],
        "overlap": report.overlap,
        "degenerate_localized": report.degenerate_localized,
    }
    summary_path = _write_json(base + "_summary.json", summary)
    _manifest(base + "_manifest.json", "spectrum", config, [table_path, summary_path], started=started)
    return EXIT_OK


# ------------------------------------------------------------- emulate

def cmd_emulate(args) -> int:
    started = _utc_now()
    cfg = WalkConfig(
        steps=args.steps,
        coin=CoinAngle(args.theta),
        defect=_parse_defect(args),
        initial_site=args.initial_site,
        initial_coin=_parse_init(args),
    )
    econf = emu.EmulationConfig(
        walk=cfg,
        counts_per_step=args.counts,
        mc_reps=args.mc_reps,
        visibility=args.visibility,
        rng_seed=args.seed,
    )
    table = emu.estimate_with_errors(econf)

    rows = []
    for s in table.steps:
        xs = np.arange(s.offset, s.offset + len(s.counts))
        for i, x in enumerate(xs):
            rows.append([
                s.step, int(x), int(s.counts[i]), float(s.p_mean[i]),
                None if s.p_std is None else float(s.p_std[i]),
            ])
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.prefix)
    counts_path = _write_table(
        base + "_counts", args.format, ["step", "x", "counts", "p_mean", "p_std"], rows
    )

    config = _walk_config_dict(cfg, args)
    config.update({
        "counts_per_step": econf.counts_per_step,
        "mc_reps": econf.mc_reps,
        "visibility": econf.visibility,
        "rng_seed": econf.rng_seed,
        "rng_algorithm": table.algorithm,
    })
    summary = {
        "config": config,
        "std_available": table.std_available,
        "var_mean": [float(v) for v in table.var_mean],
        "var_std": None if table.var_std is None else [float(v) for v in table.var_std],
        "rec_mean": [float(v) for v in table.rec_mean],
        "rec_std": None if table.rec_std is None else [float(v) for v in table.rec_std],
    }
    summary_path = _write_json(base + "_summary.json", summary)
    _manifest(
        base + "_manifest.json", "emulate", config,
        [counts_path, summary_path],
        seed=econf.rng_seed, rng_algorithm=table.algorithm, started=started,
    )
    return EXIT_OK


# ----------------------------------------------------------- argparse

def _add_common_out(p):
    p.add_argument("--out-dir", default=".", help="directory for output files")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="table file format")


def _add_walk_flags(p, steps_default=10):
    p.add_argument("--steps", type=int, default=steps_default, help="number of walk steps")
    p.add_argument("--theta", type=float, default=22.5, help="coin angle in degrees (22.5 = Hadamard)")
    p.add_argument("--phi", type=float, default=None, help="defect phase in degrees")
    p.add_argument("--defect-site", type=int, default=0, help="defect lattice site")
    p.add_argument("--no-defect", action="store_true", help="run without any defect")
    p.add_argument("--init", choices=sorted(NAMED_STATES), default=None,
                   help="named initial coin state (default antisym)")
    p.add_argument("--init-amps", default=None, metavar="RE,IM,RE,IM",
                   help="explicit H and V amplitudes; normalized before use")
    p.add_argument("--initial-site", type=int, default=0, help="walker start site")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="defectwalk",
        description="Coined quantum walks on the line with a single-site phase defect.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk", help="evolve one walk and write its distributions")
    _add_walk_flags(p)
    p.add_argument("--prefix", default="walk", help="output filename prefix")
    _add_common_out(p)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("sweep", help="variance and recurrence over a phase or coin grid")
    _add_walk_flags(p)
    p.add_argument("--sweep", choices=("phi", "theta"), required=True, help="which parameter varies")
    p.add_argument("--values", default=None, help="comma-separated grid values (degrees)")
    p.add_argument("--start", type=float, default=None, help="grid start (degrees)")
    p.add_argument("--stop", type=float, default=None, help="grid stop, inclusive (degrees)")
    p.add_argument("--step", type=float, default=None, help="grid spacing (degrees)")
    p.add_argument("--prefix", default="sweep", help="output filename prefix")
    _add_common_out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="bound states and overlap on a finite ring")
    p.add_argument("--theta", type=float, default=22.5, help="coin angle in degrees")
    p.add_argument("--phi", type=float, default=None, help="defect phase in degrees")
    p.add_argument("--phi-values", default=None, help="comma-separated phase grid for an overlap sweep")
    p.add_argument("--defect-site", type=int, default=0, help="defect lattice site")
    p.add_argument("--L", type=int, default=spectral.DEFAULT_NUM_SITES, help="ring size (odd)")
    p.add_argument("--radius", type=int, default=spectral.DEFAULT_RADIUS, help="localization radius")
    p.add_argument("--threshold", type=float, default=spectral.DEFAULT_MASS_THRESHOLD,
                   help="mass fraction within the radius that counts as localized")
    p.add_argument("--init", choices=sorted(NAMED_STATES), default=None,
                   help="initial coin state for the overlap (omit to skip the overlap)")
    p.add_argument("--init-amps", default=None, metavar="RE,IM,RE,IM",
                   help="explicit initial amplitudes for the overlap")
    p.add_argument("--initial-site", type=int, default=0, help="walker start site for the overlap")
    p.add_argument("--prefix", default="spectrum", help="output filename prefix")
    _add_common_out(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("emulate", help="finite-count sampling with Monte Carlo error bars")
    _add_walk_flags(p)
    p.add_argument("--counts", type=int, default=18_000, help="detection events per step")
    p.add_argument("--mc-reps", type=int, default=1_000, help="Monte Carlo repetitions")
    p.add_argument("--visibility", type=float, default=0.998, help="per-step coin visibility in [0,1]")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--prefix", default="emulate", help="output filename prefix")
    _add_common_out(p)
    p.set_defaults(func=cmd_emulate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as e:
        print(f"numerical consistency error: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
