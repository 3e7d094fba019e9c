"""Command-line front end: `softpc sweep | point | complexity`.

`sweep` and `point` run Monte-Carlo simulations; `complexity` compares the
BDD-step cost of two finished sweeps (proposed vs baseline CSVs).  A
structured config file (INI, section [sim]) can be passed with --config
and overrides any flags it sets; the bundled presets `pc255.cfg` and
`pc127.cfg` carry the published code parameters.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from importlib import resources

from .sim import (
    SimConfig,
    complexity_report,
    format_complexity_table,
    read_records,
    run_point,
    run_sweep,
    write_csv,
)

_CONFIG_INT_KEYS = (
    "nu", "t", "jmax", "iters", "seed", "min_bit_errors", "min_blocks",
    "min_block_errors", "max_blocks", "workers",
)


def _parse_offsets(text: str) -> tuple:
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if token in ("inf", "+inf"):
            out.append(math.inf)
        elif token == "-inf":
            out.append(-math.inf)
        else:
            out.append(float(token))
    return tuple(out)


def _parse_ebn0(text: str) -> tuple:
    """A single dB value or an inclusive start:step:stop sweep."""
    if ":" in text:
        try:
            start, step, stop = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(
                f"--ebn0 expects VALUE or START:STEP:STOP, got {text!r}"
            ) from exc
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("need STEP > 0 and STOP >= START")
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 10) for i in range(count))
    return (float(text),)


def _resolve_config_text(name: str) -> str:
    if os.path.exists(name):
        with open(name) as fh:
            return fh.read()
    base = name if name.endswith(".cfg") else name + ".cfg"
    packaged = resources.files("softpc").joinpath("configs", base)
    if packaged.is_file():
        return packaged.read_text()
    raise FileNotFoundError(f"config file not found: {name}")


def _apply_config_file(args: argparse.Namespace) -> None:
    """Read --config and let it override the parsed flags (keys it sets)."""
    if not getattr(args, "config", None):
        return
    parser = configparser.ConfigParser()
    parser.read_string(_resolve_config_text(args.config))
    if not parser.has_section("sim"):
        raise ValueError(f"config {args.config} is missing a [sim] section")
    section = parser["sim"]
    for key, raw in section.items():
        if key in _CONFIG_INT_KEYS:
            setattr(args, key, int(raw))
        elif key == "threshold":
            args.threshold = float(raw)
        elif key == "decoder":
            args.decoder = raw.strip()
        elif key in ("offsets_a", "offsets_b"):
            setattr(args, key, _parse_offsets(raw))
        elif key == "ebn0":
            args.ebn0 = _parse_ebn0(raw.strip())
        elif key == "out":
            args.out = raw.strip()
        else:
            raise ValueError(f"unknown config key {key!r} in {args.config}")


def _build_sim_config(args: argparse.Namespace) -> SimConfig:
    kwargs = dict(
        nu=args.nu,
        t=args.t,
        decoder=args.decoder,
        jmax=args.jmax,
        iters=args.iters,
        threshold=args.threshold,
        ebn0_grid=args.ebn0 or (),
        min_bit_errors=args.min_bit_errors,
        min_blocks=args.min_blocks,
        min_block_errors=args.min_block_errors,
        max_blocks=args.max_blocks,
        master_seed=args.seed,
        workers=args.workers,
    )
    if args.offsets_a is not None:
        kwargs["offsets_a"] = args.offsets_a
    if args.offsets_b is not None:
        kwargs["offsets_b"] = args.offsets_b
    config = SimConfig(**kwargs)
    config.validate()
    return config


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", type=int, default=8, help="field degree; n = 2^nu - 1")
    p.add_argument("--t", type=int, default=2, help="component error radius")
    p.add_argument("--decoder", choices=("proposed", "ibdd"), default="proposed")
    p.add_argument("--jmax", type=int, default=4,
                   help="max filling-pattern pairs per erased vector")
    p.add_argument("--iters", type=int, default=20, help="max iterations L")
    p.add_argument("--threshold", type=float, default=0.13,
                   help="erasure threshold T")
    p.add_argument("--offsets-a", type=_parse_offsets, default=None,
                   metavar="LIST", help="per-iteration max-score offsets; 'inf' allowed")
    p.add_argument("--offsets-b", type=_parse_offsets, default=None,
                   metavar="LIST", help="per-iteration score-sum offsets; 'inf' allowed")
    p.add_argument("--ebn0", type=_parse_ebn0, default=None,
                   metavar="DB | START:STEP:STOP", help="Eb/N0 grid in dB")
    p.add_argument("--seed", type=int, default=1, help="master seed")
    p.add_argument("--min-block-errors", type=int, default=0,
                   help="extra stop rule: block errors to collect")
    p.add_argument("--min-bit-errors", type=int, default=100, dest="min_bit_errors",
                   help="stop rule: bit errors to collect per point")
    p.add_argument("--min-blocks", type=int, default=100, dest="min_blocks")
    p.add_argument("--max-blocks", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, metavar="CSV",
                   help="write results (BER over information bits only)")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="INI config overriding flags; pc255/pc127 are bundled")


def _record_lines(rec) -> str:
    note = "  (upper bound: min bit errors not reached)" if rec.ber_is_upper_bound else ""
    return (
        f"ebn0_db={rec.ebn0_db:g} decoder={rec.decoder} jmax={rec.jmax} "
        f"blocks={rec.blocks} bit_errors={rec.bit_errors} "
        f"post_fec_ber={rec.post_fec_ber:.3e} block_errors={rec.block_errors} "
        f"bler={rec.bler:.3e} bdd_steps_per_block={rec.bdd_steps_per_block:.1f} "
        f"wall_time_s={rec.wall_time_s:.1f}{note}"
    )


def _cmd_sweep(args) -> int:
    config = _build_sim_config(args)
    progress = lambda rec: print(_record_lines(rec), file=sys.stderr)  # noqa: E731
    records = run_sweep(config, out_csv=args.out, progress=progress)
    if args.out:
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        for rec in records:
            print(_record_lines(rec))
    return 0


def _cmd_point(args) -> int:
    config = _build_sim_config(args)
    if len(config.ebn0_grid) != 1:
        raise SystemExit("point expects a single --ebn0 value")
    rec = run_point(config, config.ebn0_grid[0])
    print(_record_lines(rec))
    if args.out:
        write_csv([rec], args.out)
    return 0


def _cmd_complexity(args) -> int:
    rows = complexity_report(
        read_records(args.proposed), read_records(args.ibdd), args.target_ber
    )
    print(format_complexity_table(rows))
    if args.out:
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(
                ("jmax", "ebn0_proposed", "steps_proposed", "ebn0_baseline",
                 "steps_baseline", "ratio", "added_factor")
            )
            for r in rows:
                writer.writerow(
                    (r.jmax, f"{r.ebn0_proposed:.10g}", f"{r.steps_proposed:.10g}",
                     f"{r.ebn0_baseline:.10g}", f"{r.steps_baseline:.10g}",
                     f"{r.ratio:.6g}", f"{r.added_factor:.6g}")
                )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="softpc",
        description="Monte-Carlo simulation of soft-aided product-code decoding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="simulate every grid point, emit CSV")
    _add_sim_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_point = sub.add_parser("point", help="simulate a single Eb/N0 point")
    _add_sim_flags(p_point)
    p_point.set_defaults(func=_cmd_point)

    p_cx = sub.add_parser(
        "complexity",
        help="BDD-step factors of a proposed sweep vs a 10-iteration iBDD sweep",
    )
    p_cx.add_argument("--proposed", required=True, metavar="CSV")
    p_cx.add_argument("--ibdd", required=True, metavar="CSV")
    p_cx.add_argument("--target-ber", type=float, default=1e-5)
    p_cx.add_argument("--out", default=None, metavar="CSV")
    p_cx.set_defaults(func=_cmd_complexity)

    args = parser.parse_args(argv)
    _apply_config_file(args)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
