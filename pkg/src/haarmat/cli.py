"""Command-line interface.

Usage::

    haarmat sample --ensemble cue --dim 2 --count 1 --seed 1
    haarmat experiment-density --ensemble cue --dim 50 --count 10000 --out density.csv
    haarmat experiment-spacing --ensemble cue --dim 50 --count 10000 --out spacing.csv
    haarmat verify --ensemble usp --dim 5 --count 20

Exit codes: 0 success, 1 verification failure, 2 I/O failure, 64 usage error.
The default seed is taken from ``RMGEN_SEED`` when set.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .checks import check_ensemble
from .experiments import DENSITY_KINDS, SPACING_BETA, density_experiment, spacing_experiment
from .quaternion import QuaternionArray
from .sampler import EnsembleKind, EnsembleSpec, sample_batch

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_IO = 2
EXIT_USAGE = 64

VERIFY_TOLERANCE = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _default_seed():
    env = os.environ.get("RMGEN_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"RMGEN_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="haarmat", description="Haar-random matrices from the classical compact groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--ensemble", required=True, choices=[k.value for k in EnsembleKind])
    common.add_argument("--dim", type=_positive_int, required=True, help="N (output is 2N x 2N for cse/usp)")
    common.add_argument("--count", type=_positive_int, default=1)
    common.add_argument("--seed", type=int, default=None, help="default: $RMGEN_SEED or 0")
    common.add_argument(
        "--algorithm", default="qr", choices=["qr", "householder", "householder_product"]
    )
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", default=None, choices=["json", "csv"])
    common.add_argument("--threads", type=_positive_int, default=1)

    sub.add_parser("sample", parents=[common], help="write sampled matrices")
    for name, default_bins in (("experiment-density", 60), ("experiment-spacing", 50)):
        p = sub.add_parser(name, parents=[common], help=f"{name.split('-')[1]} histogram and goodness of fit")
        p.add_argument("--bins", type=_positive_int, default=default_bins)
        p.add_argument("--report", default=None, help="JSON report path (default: next to --out)")
    sub.add_parser("verify", parents=[common], help="check group membership of fresh samples")
    return parser


def _config(args, spec: EnsembleSpec) -> dict:
    cfg = {
        "command": args.command,
        "ensemble": spec.kind.value,
        "dim": spec.n,
        "count": args.count,
        "seed": spec.seed,
        "algorithm": spec.algorithm.value,
        "format": args.format,
    }
    if hasattr(args, "bins"):
        cfg["bins"] = args.bins
    return cfg


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _encode(M):
    if isinstance(M, QuaternionArray):
        return M.coeffs.tolist()
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return np.stack([M.real, M.imag], axis=-1).tolist()
    return M.tolist()


def cmd_sample(args, spec: EnsembleSpec) -> int:
    fmt = args.format or "json"
    cfg = _config(args, spec)
    cfg["format"] = fmt
    mats = sample_batch(spec, args.count, threads=args.threads)
    with _open_out(args.out) as fh:
        if fmt == "json":
            for i, M in enumerate(mats):
                doc = {
                    "ensemble": spec.kind.value,
                    "n": spec.n,
                    "seed": spec.seed,
                    "index": i,
                    "algorithm": spec.algorithm.value,
                    "config": cfg,
                    "matrix": _encode(M),
                }
                fh.write(json.dumps(doc) + "\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            quat = spec.kind in (EnsembleKind.SP_QUATERNION, EnsembleKind.GINIBRE_QUATERNION)
            parts = ["a", "b", "c", "d"] if quat else ["re", "im"]
            w.writerow(["ensemble", "n", "seed", "algorithm", "index", "row", "col"] + parts)
            for i, M in enumerate(mats):
                vals = M.coeffs if quat else np.stack([np.real(M), np.imag(M)], axis=-1)
                for r in range(vals.shape[0]):
                    for c in range(vals.shape[1]):
                        w.writerow([spec.kind.value, spec.n, spec.seed, spec.algorithm.value, i, r, c]
                                   + [repr(float(x)) for x in vals[r, c]])
    return EXIT_OK


def _report_path(args):
    if args.report:
        return args.report
    if args.out == "-":
        return None
    return str(Path(args.out).with_suffix(".json")) if Path(args.out).suffix != ".json" else args.out + ".report.json"


def _write_experiment(args, spec, result, columns) -> int:
    fmt = args.format or "csv"
    cfg = _config(args, spec)
    cfg["format"] = fmt
    h = result.histogram
    rows = []
    for k in range(len(h.counts)):
        row = {
            "bin_left": float(h.bin_edges[k]),
            "bin_right": float(h.bin_edges[k + 1]),
            "count": int(h.counts[k]),
            "density": float(h.density[k]),
        }
        if "surmise" in columns:
            row["surmise"] = float(result.reference[k])
        rows.append(row)
    report = {"config": cfg, "report": result.report.to_dict()}
    with _open_out(args.out) as fh:
        if fmt == "csv":
            w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        else:
            fh.write(json.dumps({**report, "histogram": rows}, indent=2) + "\n")
    rpath = _report_path(args)
    text = json.dumps(report, indent=2) + "\n"
    if rpath is None:
        sys.stderr.write(text)
    else:
        with open(rpath, "w") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_experiment_density(args, spec: EnsembleSpec) -> int:
    if spec.kind.value not in DENSITY_KINDS:
        raise UsageError(f"experiment-density needs a unitary ensemble, got '{spec.kind.value}'")
    result = density_experiment(spec, args.count, args.bins, threads=args.threads)
    return _write_experiment(args, spec, result, ["bin_left", "bin_right", "count", "density"])


def cmd_experiment_spacing(args, spec: EnsembleSpec) -> int:
    if spec.kind.value not in SPACING_BETA:
        raise UsageError(
            f"experiment-spacing supports {sorted(SPACING_BETA)}, got '{spec.kind.value}'"
        )
    if spec.n < 2:
        raise UsageError("experiment-spacing needs --dim >= 2")
    result = spacing_experiment(spec, args.count, args.bins, threads=args.threads)
    return _write_experiment(args, spec, result, ["bin_left", "bin_right", "count", "density", "surmise"])


def cmd_verify(args, spec: EnsembleSpec) -> int:
    worst: dict = {}
    for M in sample_batch(spec, args.count, threads=args.threads):
        for rep in check_ensemble(M, spec.kind, VERIFY_TOLERANCE):
            key = rep.property.value
            worst[key] = max(worst.get(key, 0.0), rep.residual)
    ok = all(v <= VERIFY_TOLERANCE for v in worst.values())
    lines = [f"{k}: max_residual={v:.3e} {'pass' if v <= VERIFY_TOLERANCE else 'FAIL'}" for k, v in worst.items()]
    if not worst:
        lines.append("no membership properties for this ensemble")
    cfg = _config(args, spec)
    doc = {"config": cfg, "tolerance": VERIFY_TOLERANCE, "max_residuals": worst, "pass": ok}
    print("\n".join(lines))
    if args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "sample": cmd_sample,
    "experiment-density": cmd_experiment_density,
    "experiment-spacing": cmd_experiment_spacing,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        try:
            spec = EnsembleSpec(args.ensemble, args.dim, seed, args.algorithm)
        except ValueError as err:
            raise UsageError(str(err)) from None
        return COMMANDS[args.command](args, spec)
    except UsageError as err:
        print(f"haarmat: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"haarmat: I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
