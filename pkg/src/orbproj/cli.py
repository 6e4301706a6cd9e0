"""Command-line interface: ``orbproj {density,sample,verify,constants}``.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 I/O error.  Options may come from ``--config FILE.json``; flags given on
the command line override the file.
"""

import argparse
import csv
import io
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from .laplace import OrbitSpec, a_coeff, as_series
from .montecarlo import sample_projected_spectrum
from .radial import density_eval, make_params, radial_cdf, radial_density
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(" ", "").split(",") if v]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any of the options below")
    common.add_argument("--series", choices=["B", "C", "D"], type=str.upper)
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--x", help="comma-separated orbit coordinates 0 < x_1 < ... < x_n")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (stdout if omitted, where allowed)")

    parser = argparse.ArgumentParser(prog="orbproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", parents=[common], help="tabulate the radial density")
    p.add_argument("--grid", type=int, help="grid points per axis (default 400)")

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo projected spectra")
    p.add_argument("--N", type=int, help="number of draws (default 100000)")
    p.add_argument("--workers", type=int, help="threads used for sampling")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=False)
    p.add_argument("--npts", type=int, help="Gauss points per piece")
    p.add_argument("--N", type=int, help="Monte Carlo draws for the montecarlo suite")

    sub.add_parser("constants", parents=[common], help="print density constants")
    return parser


def resolve_config(args):
    """Merge ``--config`` JSON with explicit flags (flags win)."""
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid config JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        cfg = {("X" if key.lower() == "x" else key): val for key, val in cfg.items()}
    for key, val in vars(args).items():
        if key in ("config", "command") or val is None:
            continue
        cfg["X" if key == "x" else key] = val
    if "X" in cfg:
        cfg["X"] = _floats(cfg["X"])
        if "n" in cfg and int(cfg["n"]) != len(cfg["X"]):
            raise ConfigError(f"--n {cfg['n']} does not match {len(cfg['X'])} coordinates in --x")
        cfg["n"] = len(cfg["X"])
    return cfg


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + m.lower() for m in missing))


def _spec(cfg):
    _need(cfg, "series", "X")
    return OrbitSpec(as_series(cfg["series"]), tuple(cfg["X"]))


def _emit_text(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_density(cfg):
    _need(cfg, "k")
    rd = radial_density(_spec(cfg), int(cfg["k"]))
    grid = int(cfg.get("grid", 400))
    if grid < 2:
        raise ConfigError("--grid must be at least 2")
    axis = np.linspace(0.0, rd.spec.X[-1], grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rd.k == 1:
        dens = density_eval(rd, axis[:, None])
        cdf = radial_cdf(rd, axis)
        w.writerow(["y", "density", "cdf"])
        for row in zip(axis, dens, cdf):
            w.writerow([f"{v:.17g}" for v in row])
    else:
        pts = np.array(list(itertools.combinations_with_replacement(axis, rd.k)))
        dens = density_eval(rd, pts)
        w.writerow([f"y_{i + 1}" for i in range(rd.k)] + ["density"])
        for p, d in zip(pts, dens):
            w.writerow([f"{v:.17g}" for v in p] + [f"{d:.17g}"])
    _emit_text(buf.getvalue(), cfg.get("out"))
    return EXIT_OK


def cmd_sample(cfg):
    _need(cfg, "k", "out")
    spec = _spec(cfg)
    batch = sample_projected_spectrum(
        spec,
        int(cfg["k"]),
        int(cfg.get("N", 100_000)),
        int(cfg.get("seed", 0)),
        workers=int(cfg.get("workers", 1)),
    )
    batch.to_csv(cfg["out"])
    return EXIT_OK


def cmd_verify(cfg):
    _need(cfg, "suite")
    suite = cfg["suite"]
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    spec = _spec(cfg) if "X" in cfg or "series" in cfg else None
    k = int(cfg["k"]) if cfg.get("k") is not None else None
    extra = {}
    if cfg.get("npts") is not None:
        extra["npts"] = int(cfg["npts"])
    if cfg.get("N") is not None:
        extra["N"] = int(cfg["N"])
    if spec is not None and k is not None:
        radial_density(spec, k)  # validate before running
    report = run_suite(suite, seed=int(cfg.get("seed", 0)), spec=spec, k=k, **extra)
    _emit_text(json.dumps(report, indent=2) + "\n", cfg.get("out"))
    return EXIT_OK if all(c["pass"] for c in report["cases"]) else EXIT_FAIL


def cmd_constants(cfg):
    _need(cfg, "series", "n", "k")
    n, k = int(cfg["n"]), int(cfg["k"])
    params = make_params(cfg["series"], n, k)
    payload = {
        "series": params.series.value,
        "n": n,
        "k": k,
        "kappa": params.kappa,
        "c": params.c,
        "alpha": params.alpha,
        "a_coeffs": [a_coeff(params.series, m) for m in range(n + 1)],
    }
    _emit_text(json.dumps(payload, indent=2) + "\n", cfg.get("out"))
    return EXIT_OK


COMMANDS = {"density": cmd_density, "sample": cmd_sample, "verify": cmd_verify, "constants": cmd_constants}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"orbproj {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"orbproj {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
