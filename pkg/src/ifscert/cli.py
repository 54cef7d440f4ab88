"""Command-line interface.

Subcommands: check, attractor, address, project (alias of address), dc,
probe.  Exit codes: 0 success or clean check, 1 condition violations found,
2 usage or config error, 3 internal or resource error.  All reports are
canonical JSON on stdout; randomness flows from a single --seed flag.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import metric_sets
from .address import pi_t
from .attractor import iterate_certified, picard_probe
from .config import load_config
from .errors import ConfigError, IfsCertError, ResourceBudgetError, UsageError
from .jsonio import canonical_dumps
from .metric_sets import PointSet, save_csv
from .shift_space import InfiniteWordSpec, dc_distance, parse_word
from .system import check_family_regularity, check_orbital, check_parent_child

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _parse_point(text: str, dim: int) -> np.ndarray:
    try:
        values = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse point {text!r}: {exc}") from exc
    if len(values) != dim:
        raise UsageError(f"point {text!r} has {len(values)} coordinates, expected {dim}")
    return np.asarray(values)


def _start_set(text: str, cfg) -> PointSet:
    if text == "box-corners":
        return PointSet(cfg.working_box.corners())
    if text.startswith("x="):
        return PointSet.single(_parse_point(text[2:], cfg.dim))
    raise UsageError("--start takes 'x=<coords>' or 'box-corners'")


def _load(path) -> tuple:
    cfg = load_config(path)
    return cfg, cfg.build_system()


def _emit(report: dict) -> None:
    sys.stdout.write(canonical_dumps(report))


def cmd_check(args) -> int:
    cfg, system = _load(args.config)
    samples = PointSet(
        np.random.default_rng(args.seed).uniform(
            system.working_box.lo_array(),
            system.working_box.hi_array(),
            size=(args.samples, system.dim),
        )
    )
    if args.condition == "pc":
        report = check_parent_child(
            system, samples, max_depth=args.depth, words_per_depth=args.words, seed=args.seed
        )
    elif args.condition == "orbital":
        report = check_orbital(
            system, samples, orbit_depth=args.depth, seed=args.seed
        )
    elif args.condition == "family":
        report = check_family_regularity(system, samples, seed=args.seed)
    else:
        raise UsageError(f"unknown condition {args.condition!r}")
    _emit(report.to_json_dict())
    return EXIT_OK if report.clean else EXIT_VIOLATIONS


def cmd_attractor(args) -> int:
    cfg, system = _load(args.config)
    if not args.eps > 0:
        raise UsageError("--eps must be positive")
    start = _start_set(args.start, cfg)
    approx = iterate_certified(
        system,
        start,
        args.eps,
        max_iter=args.max_iter,
        decimate_eps=args.decimate_eps,
        orbit_diam=args.orbit_diam,
    )
    header = {
        "n": approx.iterations,
        "radius": approx.result.radius,
        "bound_kind": approx.bound_kind,
        "truncation": "; ".join(approx.truncation_note) or "none",
    }
    if args.out:
        save_csv(args.out, approx.result.core, header)
    if args.png:
        if system.dim > 2:
            raise UsageError("--png requires dimension 1 or 2")
        _write_png(args.png, approx.result.core, system.working_box, args.png_size)
    _emit(
        {
            "n": approx.iterations,
            "radius": approx.result.radius,
            "points": len(approx.result.core),
            "bound_kind": approx.bound_kind,
            "reported_bound": approx.reported_bound,
            "certified": approx.certified,
            "notes": list(approx.truncation_note),
            "csv": args.out or None,
            "png": args.png or None,
        }
    )
    return EXIT_OK


def _write_png(path, points: PointSet, box, size: int) -> None:
    from PIL import Image

    lo, hi = box.lo_array(), box.hi_array()
    span = hi - lo
    cells = np.clip(
        ((points.points - lo) / span * size).astype(int), 0, size - 1
    )
    if points.dim == 1:
        raster = np.full((64, size), 255, dtype=np.uint8)
        raster[:, cells[:, 0]] = 0
    else:
        raster = np.full((size, size), 255, dtype=np.uint8)
        # row 0 at the top; flip the y axis so larger coordinates draw higher
        raster[size - 1 - cells[:, 1], cells[:, 0]] = 0
    Image.fromarray(raster, mode="L").save(path)


def cmd_address(args) -> int:
    cfg, system = _load(args.config)
    if not args.eps > 0:
        raise UsageError("--eps must be positive")
    try:
        word = parse_word(args.word)
    except IfsCertError as exc:
        raise UsageError(str(exc)) from exc
    _validate_letters(word, system.n_maps)
    x = _parse_point(args.x, system.dim)
    res = pi_t(system, word, x, args.eps, orbit_diam=args.orbit_diam)
    _emit(
        {
            "value": [float(v) for v in np.atleast_1d(res.point())],
            "radius": res.radius,
            "depth": res.depth,
            "mode": system.mode,
            "certified": res.certified,
            "notes": list(res.notes),
        }
    )
    return EXIT_OK


def _validate_letters(word, n_maps: int) -> None:
    if isinstance(word, InfiniteWordSpec):
        letters = word.preperiod + word.period
    else:
        letters = word.letters
    bad = [l for l in letters if l >= n_maps]
    if bad:
        raise UsageError(
            f"letter {bad[0] + 1} exceeds the map count N={n_maps} "
            "(letters are 1-based in word syntax)"
        )


def cmd_dc(args) -> int:
    try:
        a = parse_word(args.word_a)
        b = parse_word(args.word_b)
    except IfsCertError as exc:
        raise UsageError(str(exc)) from exc
    try:
        c = Fraction(args.c)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse c={args.c!r} as a rational") from exc
    if not 0 <= c < 1:
        raise UsageError("c must lie in [0, 1)")
    exact = dc_distance(a, b, c)
    _emit({"distance": float(exact), "exact": exact, "c": str(c)})
    return EXIT_OK


def cmd_probe(args) -> int:
    cfg, system = _load(args.config)
    if not args.eps > 0:
        raise UsageError("--eps must be positive")
    starts = [_parse_point(tok, system.dim) for tok in args.starts.split(";") if tok]
    if not starts:
        raise UsageError("--starts needs at least one point")
    report = picard_probe(system, starts, args.eps, orbit_diam=args.orbit_diam)
    _emit(report.to_json_dict())
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, config: bool = True) -> None:
    if config:
        parser.add_argument("config", help="path to the system config (JSON)")
    parser.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    parser.add_argument(
        "--threads",
        type=int,
        default=-1,
        help="worker threads for spatial queries; -1 = all cores. "
        "Results do not depend on this value.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifscert",
        description="Certified attractors, addresses and projections of "
        "contractive iterated function systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="sample a contractivity/regularity condition")
    _add_common(p)
    p.add_argument("--condition", choices=("pc", "orbital", "family"), default="pc")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--words", type=int, default=64, help="random words per depth beyond the exhaustive budget")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("attractor", help="iterate to a certified attractor approximation")
    _add_common(p)
    p.add_argument("--start", default="box-corners", help="'x=<coords>' or 'box-corners'")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--png", default=None, help="PNG raster path (dim 1 or 2)")
    p.add_argument("--png-size", type=int, default=1024, dest="png_size")
    p.add_argument("--decimate-eps", type=float, default=None, dest="decimate_eps")
    p.add_argument("--orbit-diam", type=float, default=None, dest="orbit_diam",
                   help="certified orbit diameter bound (orbital mode)")
    p.set_defaults(func=cmd_attractor)

    for name, help_text in (
        ("address", "evaluate the extended canonical projection at a word"),
        ("project", "alias of address"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.add_argument("--word", required=True, help="word syntax: '@', '1.2', '1.2:(3)'")
        p.add_argument("--x", required=True, help="base point, comma-separated")
        p.add_argument("--eps", type=float, default=1e-6)
        p.add_argument("--orbit-diam", type=float, default=None, dest="orbit_diam")
        p.set_defaults(func=cmd_address)

    p = sub.add_parser("dc", help="code-space distance between two words")
    _add_common(p, config=False)
    p.add_argument("--word-a", required=True, dest="word_a")
    p.add_argument("--word-b", required=True, dest="word_b")
    p.add_argument("--c", default="1/2", help="weight base, rational like 1/2 or decimal")
    p.set_defaults(func=cmd_dc)

    p = sub.add_parser("probe", help="cluster attractors from several starts")
    _add_common(p)
    p.add_argument("--starts", required=True, help="semicolon-separated points")
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--orbit-diam", type=float, default=None, dest="orbit_diam")
    p.set_defaults(func=cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    metric_sets.set_query_workers(args.threads)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBudgetError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except IfsCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
