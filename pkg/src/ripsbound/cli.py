"""Command-line entry point.

Exit status: 0 when every asserted bound passed, 1 when violations were
found, 2 when a budget ran out (Unknown verdicts), 3 on operational errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .complex.sphere import ComplexTooLarge
from .group.ball import BallTooLarge, OracleInconsistency
from .group.cache import CacheError
from .group.oracles import OracleBudgetExceeded
from .reports import EXIT_CODES, PAPER_D, RUNNERS, RunConfig, dumps, parse_range, run, write_atomic

EXIT_ERROR = 3

COMMANDS = list(RUNNERS) + ["export"]


def _int_or_auto(text: str):
    return text if text == "auto" else int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", help="built-in presentation: z, f2, f3, surface2, surface3")
    src.add_argument("--presentation", dest="presentation_path", help="presentation file")
    common.add_argument("--delta", type=Fraction, help="use this delta_ideal instead of estimating it")
    common.add_argument("--delta-mode", choices=("exhaustive", "sampled"), default="exhaustive")
    common.add_argument("--delta-side", type=int, default=4, help="longest triangle side audited for delta")
    dgrp = common.add_mutually_exclusive_group()
    dgrp.add_argument("--D", type=int, help="Rips parameter (default 12*delta_ideal + 2)")
    dgrp.add_argument("--paper-D", action="store_true", help="use D = 10^6 delta + 10^6")
    common.add_argument("--force-D", action="store_true", help="allow D < 12*delta; reports are watermarked")
    common.add_argument("--n", dest="n_range", type=parse_range, help="sphere index or range like 4..6")
    common.add_argument("--m", type=int, help="target sphere for projections, start index for growth")
    common.add_argument("--radius", type=int, help="ball radius (default: smallest that suffices)")
    common.add_argument("--N", type=int, help="ray depth")
    common.add_argument("--M", type=_int_or_auto, help="condition parameter, or 'auto'")
    common.add_argument("--c", type=Fraction, help="ddag ball offset (default delta_ideal)")
    common.add_argument("--ddag-mode", choices=("pair", "sphere"), default="pair")
    common.add_argument("--L", dest="L_budget", type=int, help="path budget")
    common.add_argument("--depth", dest="depth_budget", type=int, default=8, help="disk depth budget")
    common.add_argument("--area", dest="area_budget", type=int, default=512, help="disk area budget")
    common.add_argument("--samples", type=int, help="sample count")
    common.add_argument("--max-stage", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", help="ball cache directory (env RIPSBOUND_CACHE_DIR)")
    common.add_argument("--no-cache", dest="use_cache", action="store_false")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="ripsbound", description="Finite audits of Rips sphere complexes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        sub.add_parser(name, parents=[common])
    exp = sub.add_parser("export", parents=[common], help="write a complex (json/dot) or a ball cache")
    exp.add_argument("--what", choices=("complex", "ball"), default="complex")
    exp.add_argument("--format", choices=("json", "dot"), default="json")
    exp.add_argument("--artifact", help="path of the exported file")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    D = PAPER_D if args.paper_D else args.D
    return RunConfig(
        preset=args.preset, presentation_path=args.presentation_path, delta=args.delta,
        delta_mode=args.delta_mode, delta_side=args.delta_side, D=D, force_D=args.force_D,
        n_range=args.n_range, m=args.m, radius=args.radius, N=args.N, M=args.M, c=args.c,
        ddag_mode=args.ddag_mode, L_budget=args.L_budget, depth_budget=args.depth_budget,
        area_budget=args.area_budget, samples=args.samples, max_stage=args.max_stage, seed=args.seed,
        cache_dir=args.cache_dir, use_cache=args.use_cache,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = config_from_args(args)
    if cfg.preset is None and cfg.presentation_path is None:
        parser.error("give --preset or --presentation")
    extra = {}
    if args.command == "export":
        extra = {"what": args.what, "fmt": args.format, "out": args.artifact}
    try:
        report = run(args.command, cfg, **extra)
    except (ValueError, LookupError, OSError, BallTooLarge, CacheError, ComplexTooLarge, OracleInconsistency,
            OracleBudgetExceeded) as exc:
        print(f"ripsbound: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dumps(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_CODES[report["status"]]


if __name__ == "__main__":
    sys.exit(main())
