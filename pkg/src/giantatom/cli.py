"""``ga-scatter``: spectra, maps, Markov fits, feature reports and validation.

Exit codes: 0 success, 1 validation failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .core import DomainError
from .distributions import TabulatedFormatError, UnsupportedVariantError
from .features import GridResolutionError
from .runs import resolve_threads, run_features, run_map2d, run_markov, run_spectrum
from .runspec import MODES, GridSpec, RunSpec, SpecError
from .serialize import json_text, plot_script, write_text
from .validate import run_suite, summary

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

BAD_INPUT = (SpecError, DomainError, TabulatedFormatError, UnsupportedVariantError,
             GridResolutionError, FileNotFoundError, IsADirectoryError, ValueError)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ga-scatter", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        s = sub.add_parser(mode)
        s.add_argument("--config", type=Path, required=mode != "validate",
                       help="JSON run specification")
        s.add_argument("--out", help="output path ('-' or omitted: stdout)")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--oracle", action="store_true", default=None,
                       help="add oracle columns and report the max deviation")
        s.add_argument("--grid", help="detuning grid lo:hi:count (overrides the config)")
        s.add_argument("--threads", type=int, help="worker threads (default: $GA_SCATTER_THREADS or 1)")
        s.add_argument("--plot-script", type=Path,
                       help="also write a matplotlib script that plots the output file")
    return p


def load_spec(args) -> RunSpec:
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise SpecError(f"{args.config}: line {exc.lineno}", exc.msg) from None
        if not isinstance(raw, dict):
            raise SpecError(str(args.config), "top level must be an object")
        if raw.get("mode", args.mode) != args.mode:
            raise SpecError("mode", f"config says {raw['mode']!r} but subcommand is {args.mode!r}")
        raw["mode"] = args.mode
        spec = RunSpec.from_dict(raw)
    else:
        spec = RunSpec(mode=args.mode)
    changes = {}
    if args.out is not None:
        changes["out"] = args.out
    if args.format is not None:
        changes["format"] = args.format
    if args.oracle:
        changes["oracle"] = True
    if args.grid is not None:
        changes["grid"] = GridSpec.from_string(args.grid)
    if args.threads is not None:
        changes["threads"] = args.threads
    return dataclasses.replace(spec, **changes) if changes else spec


def execute(spec: RunSpec) -> tuple[str, bool]:
    """Run ``spec``; returns (output text, success flag)."""
    threads = resolve_threads(spec.threads)
    if spec.mode == "spectrum":
        return run_spectrum(spec, threads)[0], True
    if spec.mode == "map2d":
        return run_map2d(spec, threads)[0], True
    if spec.mode == "markov":
        return run_markov(spec, threads)[0], True
    if spec.mode == "features":
        return run_features(spec, threads)[0], True
    results = run_suite(spec.validate)
    if spec.format == "json":
        text = json_text(summary(results))
    else:
        ok = all(r.passed for r in results)
        text = "\n".join([r.line() for r in results] + [f"SUITE {'PASS' if ok else 'FAIL'}"]) + "\n"
    return text, all(r.passed for r in results)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = load_spec(args)
        text, ok = execute(spec)
        write_text(text, spec.out)
        if args.plot_script is not None:
            if spec.out in (None, "-"):
                raise SpecError("--plot-script", "needs --out so the script knows what to read")
            write_text(plot_script(spec.out, spec.mode == "map2d"), args.plot_script)
    except BAD_INPUT as exc:
        print(f"ga-scatter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"ga-scatter: I/O error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
