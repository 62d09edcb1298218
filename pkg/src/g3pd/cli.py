"""Command-line front end: ``g3pd {decompose,segment,evaluate,train,baseline}``.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
Outputs are deterministic; wall-clock columns stay blank unless ``--timing``
is passed.
"""
import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import benchmark
from .baselines import decompose_tv_l1, decompose_tv_l2
from .config import ConfigError, MorphologyConfig, SolverConfig, apply_overrides, load_config, save_config
from .image import ImageFormatError, load_grayscale, load_mask, save_mask, to_bytes, write_pgm
from .segmentation import overlay, segment
from .solver import NumericalError, decompose_g3pd

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _configs(args, iterations_default):
    """Resolve (solver, morphology) from --config, --preset, --set and --iterations."""
    if args.config:
        solver, morph = load_config(args.config)
    else:
        solver = SolverConfig(iterations=iterations_default)
        morph = MorphologyConfig()
    if getattr(args, "preset", None):
        try:
            preset = benchmark.published_parameters(args.preset)
        except KeyError:
            raise ConfigError(f"unknown preset {args.preset!r}") from None
        solver = replace(solver, C=preset.C, beta2=preset.beta2)
    solver, morph = apply_overrides(solver, morph, args.set or ())
    if getattr(args, "iterations", None) is not None:
        solver = replace(solver, iterations=args.iterations)
    return solver, morph


# Intensities live in [0, 1]; a spread below this is floating-point round-off
# (e.g. |v| ~ 1e-16 on a constant image) and is shown as flat rather than
# stretched to full contrast.
FLAT_RANGE = 1e-9


def display_bytes(x):
    """Affine map min -> 0, max -> 255; a (numerically) constant array maps to zeros."""
    lo, hi = float(x.min()), float(x.max())
    if hi - lo <= FLAT_RANGE:
        return np.zeros(x.shape, np.uint8), lo, hi
    scaled = (x - lo) * (255.0 / (hi - lo))
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8), lo, hi


def write_components(out_dir, components):
    """Write ``name.pgm`` (display), ``name.f64`` (raw) and ``display_mapping.txt``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [
        "# component rows cols min max ; byte = round((x - min) * 255 / (max - min)),"
        f" or 0 when max - min <= {FLAT_RANGE!r}; raw little-endian float64 in <component>.f64"
    ]
    for name, arr in components.items():
        data, lo, hi = display_bytes(arr)
        write_pgm(out_dir / f"{name}.pgm", data)
        np.ascontiguousarray(arr, dtype="<f8").tofile(out_dir / f"{name}.f64")
        lines.append(f"{name} {arr.shape[0]} {arr.shape[1]} {lo!r} {hi!r}")
    (out_dir / "display_mapping.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_decompose(args):
    solver, _ = _configs(args, 20)
    f = load_grayscale(args.input)
    dec = decompose_g3pd(f, solver)
    write_components(args.out_dir, {"u": dec.u, "v": dec.v, "eps": dec.eps})
    dec.diagnostics.to_csv(Path(args.out_dir) / "diagnostics.csv", timing=args.timing)
    d = dec.diagnostics
    print(f"sigma={d.sigma:.6g} delta={d.delta:.6g} iterations={solver.iterations}")
    return EXIT_OK


def cmd_segment(args):
    solver, morph = _configs(args, 4)
    f = load_grayscale(args.input)
    result = segment(f, solver, morph)
    Path(args.out_mask).parent.mkdir(parents=True, exist_ok=True)
    save_mask(result.mask, args.out_mask)
    if args.overlay:
        write_pgm(args.overlay, to_bytes(overlay(f, result.mask)))
    frac = float(result.mask.mean())
    line = f"foreground={frac:.4f}"
    if args.truth:
        err, m_f, m_b = benchmark.segmentation_error(result.mask, load_mask(args.truth))
        line += f" err={100 * err:.3f}% m_f={m_f} m_b={m_b}"
    print(line)
    return EXIT_OK


def _progress(result):
    if result.error:
        print(f"FAIL {result.path}: {result.error}", flush=True)
    else:
        print(f"{100 * result.err:7.3f}%  {result.path}", flush=True)


def cmd_evaluate(args):
    solver, morph = _configs(args, 4)
    manifest = benchmark.load_manifest(args.manifest, args.name)
    report = benchmark.evaluate(manifest, args.split, solver, morph, progress=_progress)
    text, csv_text = benchmark.report_table([report])
    Path(args.report).write_text(csv_text, encoding="utf-8")
    if args.per_image:
        Path(args.per_image).write_text(report.per_image_csv(timing=args.timing), encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_train(args):
    solver, morph = _configs(args, 4)
    manifest = benchmark.load_manifest(args.manifest, args.name)

    def evaluator(cfg):
        report = benchmark.evaluate(manifest, "train", cfg, morph)
        mean = report.mean_err_pct
        print(f"C={cfg.C!r} beta2={cfg.beta2!r} mean_err={'-' if mean is None else f'{mean:.4f}%'}", flush=True)
        return mean

    result = benchmark.train_grid(
        manifest, args.grid_c, args.grid_beta2, solver, morph, full=args.full_grid, evaluator=evaluator
    )
    Path(args.out).write_text(result.surface_csv(), encoding="utf-8")
    if args.best_config:
        save_config(args.best_config, replace(solver, C=result.C, beta2=result.beta2), morph)
    print(f"best C={result.C!r} beta2={result.beta2!r} mean_err={result.mean_err_pct}")
    return EXIT_OK


def cmd_baseline(args):
    f = load_grayscale(args.input)
    method = decompose_tv_l2 if args.method == "tvl2" else decompose_tv_l1
    kw = {"iterations": args.iterations} if args.iterations else {}
    u, v = method(f, args.lam, **kw)
    write_components(args.out_dir, {"u": u, "v": v})
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="g3pd", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, preset=True):
        p.add_argument("--config", help="key=value config file (all keys required)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key; repeatable")
        if preset:
            p.add_argument("--preset", metavar="DB", help="use the published (C, beta2) of a database, e.g. FVC2004_DB1")

    p = sub.add_parser("decompose", help="split an image into u, v and eps")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--iterations", type=int)
    p.add_argument("--timing", action="store_true", help="fill the ms column (breaks byte-identical reruns)")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("segment", help="compute the foreground mask")
    p.add_argument("--input", required=True)
    p.add_argument("--out-mask", required=True)
    p.add_argument("--overlay", help="also write the image with the mask boundary drawn")
    p.add_argument("--truth", help="ground-truth mask; prints the pixel error")
    p.add_argument("--iterations", type=int)
    common(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("evaluate", help="score a manifest split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", choices=benchmark.SPLITS, default="test")
    p.add_argument("--report", required=True, help="summary CSV path")
    p.add_argument("--per-image", help="per-image CSV path")
    p.add_argument("--name", help="database name (default: manifest file stem)")
    p.add_argument("--iterations", type=int)
    p.add_argument("--timing", action="store_true")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("train", help="grid-search C and beta2 on the train split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--grid-c", type=_floats, required=True)
    p.add_argument("--grid-beta2", type=_floats, required=True)
    p.add_argument("--out", required=True, help="surface CSV path")
    p.add_argument("--best-config", help="write the selected config here")
    p.add_argument("--full-grid", action="store_true", help="evaluate every (C, beta2) pair")
    p.add_argument("--name")
    p.add_argument("--iterations", type=int)
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("baseline", help="two-part TV-L2 or TV-L1 decomposition")
    p.add_argument("--method", choices=("tvl2", "tvl1"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--iterations", type=int)
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, benchmark.ManifestError, ImageFormatError, FileNotFoundError) as exc:
        print(f"g3pd: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FloatingPointError) as exc:
        print(f"g3pd: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"g3pd: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
