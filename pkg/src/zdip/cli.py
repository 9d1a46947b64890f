"""
``zdip`` command line tool.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 table or
format error. Every result written to a file is accompanied by a
``<output>.manifest.json`` recording the command line, parameters, seed,
table identity, tool version and timestamp.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, rng
from .calibration import calibrate_threshold, universal_cutoff
from .errors import TableError, ZDipError
from .experiments import (
    large_sample_contrast,
    log_spaced_sizes,
    null_ensemble,
    scaling,
    stability,
    validate_synthetic,
)
from .null import (
    FAST_REPLICATES,
    FULL_REPLICATES,
    TABLE_ENV_VAR,
    default_grid,
    fast_grid,
    generate_table,
    load_default_table,
    load_table,
    save_table,
    table_checksum,
)
from .synth import PRESETS, preset, sample_mixture
from .ztest import DEFAULT_THRESHOLD, DownsampleConfig, downsampled_zdip, dip_p_value, zdip

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_TABLE = 0, 1, 2, 3

OUTPUT_SCHEMA = 1


class InputError(ZDipError):
    pass


def _int_list(text):
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _log(msg):
    print(msg, file=sys.stderr, flush=True)


def read_values(path, column=None, delimiter=",") -> np.ndarray:
    """
    Parse observations from a text file (``-`` for stdin).

    One float per line by default; blank lines and lines starting with
    ``#`` are skipped. With `column` (0-based) each line is split on
    `delimiter` and that field is read.
    """
    if str(path) == "-":
        lines = sys.stdin.read().splitlines()
    else:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if column is not None:
            fields = text.split(delimiter)
            if column >= len(fields):
                raise InputError(f"line {lineno}: no column {column} in {line!r}")
            text = fields[column].strip()
        try:
            values.append(float(text))
        except ValueError:
            raise InputError(f"line {lineno}: cannot parse {text!r} as a number") from None
    return np.asarray(values, dtype=np.float64)


def _load_table(path):
    if path:
        return load_table(path), str(path)
    env = os.environ.get(TABLE_ENV_VAR)
    return load_default_table(), env or "<bundled>/zdip/data/null_table_v1.csv"


def _manifest(args, table=None, table_path=None, **results):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    m = {
        "schema": OUTPUT_SCHEMA,
        "command": args.command,
        "argv": sys.argv[1:],
        "parameters": params,
        "tool_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if table is not None:
        m["table"] = {"path": table_path, "checksum": table_checksum(table)}
    if results:
        m["results"] = results
    return m


def _write_manifest(output, manifest):
    if output:
        Path(str(output) + ".manifest.json").write_text(json.dumps(manifest, indent=2, default=_json_default) + "\n")
    else:
        _log("# manifest: " + json.dumps(manifest, default=_json_default))


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _write_csv(rows, output, fields=None):
    fields = fields or list(rows[0])
    fh = open(output, "w", newline="", encoding="utf-8") if output else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    finally:
        if output:
            fh.close()


def _write_json(obj, output):
    text = json.dumps(obj, indent=2, default=_json_default) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _seed(args):
    if args.seed is None:
        args.seed = rng.resolve_seed()
        _log(f"using random seed {args.seed}")
    return args.seed


# ---------------------------------------------------------------- commands


def cmd_tablegen(args):
    seed = _seed(args)
    if args.grid:
        grid, profile = args.grid, "custom"
    elif args.profile == "paper":
        grid, profile = default_grid(), "paper"
    else:
        grid, profile = fast_grid(), "fast"
    replicates = args.replicates or (FULL_REPLICATES if args.profile == "paper" else FAST_REPLICATES)

    def progress(i, total, s):
        if not args.quiet:
            _log(f"[{i + 1}/{total}] n={s.n} mu={s.mu:.6g} sigma={s.sigma:.6g}")

    table = generate_table(grid, replicates, seed, progress=progress, metadata={"profile": profile})
    save_table(table, args.output)
    _write_manifest(args.output, _manifest(args, table, str(args.output)))
    _log(f"wrote {len(table)} entries to {args.output}")
    return EXIT_OK


def cmd_test(args):
    values = read_values(args.input, args.column, args.delimiter)
    table, table_path = _load_table(args.table)
    if args.downsample:
        sub, iters = args.downsample
        cfg = DownsampleConfig(sub, iters, rng.derive_seed(_seed(args), rng.SUBSAMPLE))
        report = downsampled_zdip(values, table, cfg, args.threshold)
    else:
        report = zdip(values, table, args.threshold)
    if args.pvalue:
        p = dip_p_value(values, args.pvalue, rng.derive_seed(_seed(args), rng.NULL_DIPS))
        report = replace(report, p_value=p)
    out = report.to_dict()
    out["manifest"] = _manifest(args, table, table_path)
    _write_json(out, args.output)
    if report.extrapolated and not args.downsample:
        _log(
            f"warning: n={report.n} is beyond the null table (max n={table.n_max}); "
            "mu/sigma were clamped. Consider --downsample 100 30."
        )
    verdict = "multimodal" if report.is_multimodal else "not multimodal"
    extra = f", p={report.p_value:.4g}" if report.p_value is not None else ""
    _log(f"n={report.n} dip={report.dip:.6g} z={report.z:.3f}{extra} -> {verdict} at z > {report.threshold:g}")
    return EXIT_OK


def cmd_sample(args):
    seed = _seed(args)
    s = sample_mixture(preset(args.preset), args.n, seed)
    text = "\n".join(repr(float(v)) for v in s.values) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        _write_manifest(args.output, _manifest(args))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_calibrate(args):
    table, table_path = _load_table(args.table)
    estimates = []
    for n in args.n:
        est = calibrate_threshold(n, args.ensemble, args.bootstrap, rng.derive_seed(args.seed, n), table)
        estimates.append(est)
        _log(f"n={n}: z_at_p05={est.z_at_p05:.4f} CI=[{est.ci_low:.4f}, {est.ci_high:.4f}]")
    cutoff = universal_cutoff(estimates)
    _write_csv([e.as_row() for e in estimates], args.output)
    _write_manifest(args.output, _manifest(args, table, table_path, universal_cutoff=cutoff))
    _log(f"universal cutoff: {cutoff}")
    return EXIT_OK


def cmd_validate(args):
    table, table_path = _load_table(args.table)
    rows = validate_synthetic(table, args.replications, args.seed, args.p_replicates, args.threshold)
    _write_csv(rows, args.output)
    _write_manifest(args.output, _manifest(args, table, table_path))
    return EXIT_OK


def cmd_stability(args):
    table, table_path = _load_table(args.table)
    ns = log_spaced_sizes(args.n_min, args.n_max, args.count)
    rows = stability(table, ns, args.seed, args.subsample_size, args.iterations, threshold=args.threshold)
    summary = {}
    for name in sorted({r["distribution"] for r in rows}):
        z = np.array([r["mean_z"] for r in rows if r["distribution"] == name])
        summary[name] = {"mean": float(z.mean()), "min": float(z.min()), "max": float(z.max()), "cv": float(z.std(ddof=1) / abs(z.mean()))}
    _write_csv(rows, args.output)
    _write_manifest(args.output, _manifest(args, table, table_path, per_distribution=summary))
    return EXIT_OK


def cmd_scaling(args):
    table, table_path = _load_table(args.table)
    rows, fit = scaling(table, args.preset, args.n, args.replications, args.seed)
    fit_d = {"alpha": fit.alpha, "alpha_stderr": fit.alpha_stderr, "intercept": fit.intercept, "r_squared": fit.r_squared, "ok": fit.ok, "reason": fit.reason}
    _write_csv(rows, args.output)
    _write_manifest(args.output, _manifest(args, table, table_path, fit=fit_d))
    if fit.ok:
        _log(f"alpha = {fit.alpha:.4f} +/- {fit.alpha_stderr:.4f}, R^2 = {fit.r_squared:.4f}")
    else:
        _log(f"power-law fit refused: {fit.reason}")
    return EXIT_OK


def cmd_null_figure(args):
    from scipy import stats

    table, table_path = _load_table(args.table)
    ens = null_ensemble(args.n, args.size, args.seed, table, args.p_replicates)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    # panel A: density of z per N on a shared grid of bins
    edges = np.linspace(-4, 6, 101)
    centers = 0.5 * (edges[1:] + edges[:-1])
    rows = []
    for n in args.n:
        hist, _ = np.histogram(ens["z"][ens["n"] == n], bins=edges, density=True)
        rows += [{"n": n, "z": float(c), "density": float(h)} for c, h in zip(centers, hist)]
    _write_csv(rows, out / "null_z_density.csv")
    # panels B and C: per-sample dip / z versus p
    scatter = [
        {"n": int(n), "dip": float(d), "z": float(z), "p_value": float(p)}
        for n, d, z, p in zip(ens["n"], ens["dip"], ens["z"], ens["p_value"])
    ]
    _write_csv(scatter, out / "null_scatter.csv")
    per_n = {}
    for n in args.n:
        z = ens["z"][ens["n"] == n]
        per_n[str(n)] = {"mean": float(z.mean()), "sd": float(z.std(ddof=1)), "skew": float(stats.skew(z))}
    results = {
        "per_n": per_n,
        "spearman_z_p": float(stats.spearmanr(ens["z"], ens["p_value"])[0]),
        "spearman_dip_p": float(stats.spearmanr(ens["dip"], ens["p_value"])[0]),
    }
    _write_manifest(out / "null_figure", _manifest(args, table, table_path, **results))
    _log(json.dumps(results))
    return EXIT_OK


def cmd_large_sample(args):
    table, table_path = _load_table(args.table)
    cfg = None
    if args.downsample:
        cfg = DownsampleConfig(args.downsample[0], args.downsample[1], rng.derive_seed(args.seed, rng.SUBSAMPLE))
    res = large_sample_contrast(table, args.seed, args.sizes, args.distribution, cfg, args.p_replicates, args.threshold)
    out = {
        "results": [
            {"distribution": r["distribution"], "n": r["n"], "plain": r["plain"].to_dict(), "downsampled": r["downsampled"].to_dict()}
            for r in res
        ],
        "manifest": _manifest(args, table, table_path),
    }
    _write_json(out, args.output)
    for r in res:
        _log(f"n={r['n']}: plain z={r['plain'].z:.3f}  downsampled z={r['downsampled'].z:.3f}")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zdip", description="Standardized dip test (Z-Dip) for multimodality.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def table_opt(sp):
        sp.add_argument("--table", help=f"null table file (default: ${TABLE_ENV_VAR}, else the bundled table)")

    sp = sub.add_parser("tablegen", help="simulate and write a null table")
    sp.add_argument("--profile", choices=("fast", "paper"), default="fast")
    sp.add_argument("--grid", type=_int_list, help="explicit comma-separated grid of sample sizes")
    sp.add_argument("--replicates", type=int, help="null replicates per grid point (default from profile)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--output", "-o", required=True)
    sp.add_argument("--quiet", "-q", action="store_true")
    sp.set_defaults(func=cmd_tablegen)

    sp = sub.add_parser("test", help="Z-Dip of one sample")
    sp.add_argument("input", help="file with one number per line, or - for stdin")
    table_opt(sp)
    sp.add_argument("--pvalue", type=int, metavar="R", help="also compute a Monte Carlo p-value with R replicates")
    sp.add_argument("--downsample", type=int, nargs=2, metavar=("N_SUB", "N_SIM"))
    sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--column", type=int, help="read this 0-based column of delimited lines")
    sp.add_argument("--delimiter", default=",")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("sample", help="draw from a mixture preset, one value per line")
    sp.add_argument("--preset", choices=sorted(PRESETS), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("calibrate", help="estimate the z threshold matching p = 0.05")
    table_opt(sp)
    sp.add_argument("--n", type=_int_list, default=[50, 200, 1000, 10_000])
    sp.add_argument("--ensemble", type=int, default=9999)
    sp.add_argument("--bootstrap", type=int, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_calibrate)

    sp = sub.add_parser("validate-synthetic", help="mixture presets under both decision rules")
    table_opt(sp)
    sp.add_argument("--replications", type=int, default=1000)
    sp.add_argument("--p-replicates", type=int, default=9999)
    sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("stability", help="downsampled Z-Dip across log-spaced N")
    table_opt(sp)
    sp.add_argument("--n-min", type=int, default=150)
    sp.add_argument("--n-max", type=int, default=72_000)
    sp.add_argument("--count", type=int, default=132)
    sp.add_argument("--subsample-size", type=int, default=100)
    sp.add_argument("--iterations", type=int, default=30)
    sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("scaling", help="power-law growth of mean Z-Dip with N")
    table_opt(sp)
    sp.add_argument("--preset", choices=sorted(PRESETS), default="strong_bimodal")
    sp.add_argument("--n", type=_int_list, default=[100, 200, 500, 1000, 2000, 5000, 10_000])
    sp.add_argument("--replications", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("null-figure", help="null z densities and z/dip versus p scatter")
    table_opt(sp)
    sp.add_argument("--n", type=_int_list, default=[10, 50, 100, 500, 1000, 5000])
    sp.add_argument("--size", type=int, default=9999)
    sp.add_argument("--p-replicates", type=int, default=9999)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output-dir", required=True)
    sp.set_defaults(func=cmd_null_figure)

    sp = sub.add_parser("large-sample", help="plain versus downsampled Z-Dip at small and large N")
    table_opt(sp)
    sp.add_argument("--distribution", choices=sorted(PRESETS) + ["uniform"], default="negligible_mode")
    sp.add_argument("--sizes", type=_int_list, default=[1000, 100_000])
    sp.add_argument("--downsample", type=int, nargs=2, metavar=("N_SUB", "N_SIM"))
    sp.add_argument("--p-replicates", type=int, default=0)
    sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_large_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TableError as exc:
        _log(f"zdip: table error: {exc}")
        return EXIT_TABLE
    except (ZDipError, OSError) as exc:
        _log(f"zdip: {exc}")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        _log(f"zdip: internal error: {type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
