"""Monte-Carlo BER/BLER simulation of product-code decoders.

Every block gets its own random stream seeded from (master seed, grid
index, block index), results are accumulated in block-index order, and the
stop rule is evaluated per block, so a run is bit-identical regardless of
the number of workers.  Post-FEC BER counts information (systematic)
positions only.
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .channel import ChannelParams, make_received, quantize_ternary, transmit
from .decoder import (
    PAPER_OFFSETS_A,
    PAPER_OFFSETS_B,
    DecoderConfig,
    StepCounter,
    decode_block,
    ibdd_decode_block,
)
from .galois import ComponentCode
from .product import ProductCode

DECODERS = ("proposed", "ibdd")

CSV_COLUMNS = (
    "ebn0_db", "decoder", "jmax", "blocks", "bit_errors", "post_fec_ber",
    "block_errors", "bler", "bdd_steps_per_block", "wall_time_s",
)


@dataclass
class SimConfig:
    """One simulation campaign: code, decoder, grid, and stop rules."""

    nu: int = 8
    t: int = 2
    decoder: str = "proposed"
    jmax: int = 4
    iters: int = 20
    threshold: float = 0.13
    offsets_a: tuple = PAPER_OFFSETS_A
    offsets_b: tuple = PAPER_OFFSETS_B
    ebn0_grid: tuple = ()
    min_bit_errors: int = 100
    min_blocks: int = 100
    min_block_errors: int = 0
    max_blocks: int = 1000
    master_seed: int = 1
    workers: int = 1

    def __post_init__(self):
        self.offsets_a = tuple(float(x) for x in self.offsets_a)
        self.offsets_b = tuple(float(x) for x in self.offsets_b)
        self.ebn0_grid = tuple(float(x) for x in self.ebn0_grid)

    def validate(self) -> None:
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        if not self.ebn0_grid:
            raise ValueError("ebn0_grid must not be empty")
        if any(b <= a for a, b in zip(self.ebn0_grid, self.ebn0_grid[1:])):
            raise ValueError("ebn0_grid must be strictly increasing")
        if min(self.min_bit_errors, self.min_blocks, self.max_blocks) < 1:
            raise ValueError("stop rules must be positive")
        if self.min_block_errors < 0:
            raise ValueError("min_block_errors must be >= 0")
        if self.master_seed < 0:
            raise ValueError("master_seed must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.decoder == "proposed":
            self.decoder_config()  # validates jmax, iters, offsets, threshold
        elif self.iters < 1:
            raise ValueError("iters must be >= 1")

    def decoder_config(self) -> DecoderConfig:
        return DecoderConfig(
            self.jmax, self.iters, self.offsets_a, self.offsets_b, self.threshold
        )


@dataclass
class SimRecord:
    """Aggregated result of one (Eb/N0, decoder) measurement."""

    ebn0_db: float
    decoder: str
    jmax: int
    blocks: int
    bit_errors: int
    post_fec_ber: float
    block_errors: int
    bler: float
    bdd_steps_total: int
    bdd_steps_per_block: float
    wall_time_s: float
    ber_is_upper_bound: bool  # stopped at max_blocks before min_bit_errors


class _Runtime:
    """Per-process immutable state shared by all blocks of a campaign."""

    def __init__(self, config: SimConfig):
        self.component = ComponentCode(config.nu, config.t)
        self.code = ProductCode(self.component)
        self.dconf = (
            config.decoder_config() if config.decoder == "proposed" else None
        )


def _simulate_block(rt: _Runtime, config: SimConfig, ebn0_db, point_index, block_index):
    """Encode, transmit, decode one block; returns the per-block counts."""
    rng = np.random.default_rng(
        np.random.SeedSequence((config.master_seed, point_index, block_index))
    )
    k, n = rt.code.k, rt.code.n
    message = rng.integers(0, 2, size=(k, k), dtype=np.uint8)
    block = rt.code.encode(message)
    params = ChannelParams.make(ebn0_db, rt.code.rate, config.threshold)
    soft = transmit(block, params, rng)

    counter = StepCounter()
    if config.decoder == "proposed":
        received = make_received(soft, config.threshold)
        result = decode_block(received, rt.code, rt.dconf, rng, counter)
    else:
        hard = quantize_ternary(soft, 0.0)  # threshold 0: plain sign decisions
        result = ibdd_decode_block(hard, rt.code, config.iters, counter)

    bit_errors = int((result.block[n - k:, n - k:] != message).sum())
    return bit_errors, int(bit_errors > 0), result.bdd_steps


_POOL_STATE: dict = {}


def _pool_init(config: SimConfig) -> None:
    _POOL_STATE["config"] = config
    _POOL_STATE["runtime"] = _Runtime(config)


def _pool_block(task):
    point_index, ebn0_db, block_index = task
    return _simulate_block(
        _POOL_STATE["runtime"], _POOL_STATE["config"], ebn0_db, point_index, block_index
    )


def _stop_reached(config, blocks, bit_errors, block_errors) -> bool:
    if blocks >= config.max_blocks:
        return True
    return (
        blocks >= config.min_blocks
        and bit_errors >= config.min_bit_errors
        and block_errors >= config.min_block_errors
    )


def iter_block_results(config: SimConfig, ebn0_db, point_index=None, runtime=None):
    """Yield per-block (bit_errors, block_error, bdd_steps) in block order.

    Serial generator used by run_point with workers=1; also handy for
    callers that need per-block statistics.  Stop rules are NOT applied.
    """
    config.validate()
    if point_index is None:
        point_index = _grid_index(config, ebn0_db)
    rt = runtime or _Runtime(config)
    for b in range(config.max_blocks):
        yield _simulate_block(rt, config, ebn0_db, point_index, b)


def _grid_index(config, ebn0_db) -> int:
    grid = config.ebn0_grid
    return grid.index(ebn0_db) if ebn0_db in grid else 0


def run_point(config: SimConfig, ebn0_db, point_index=None, runtime=None) -> SimRecord:
    """Simulate one Eb/N0 point until the stop rules are met."""
    config.validate()
    if point_index is None:
        point_index = _grid_index(config, ebn0_db)
    start = time.perf_counter()
    blocks = bit_errors = block_errors = steps = 0

    def consume(result) -> bool:
        nonlocal blocks, bit_errors, block_errors, steps
        errs, blk_err, n_steps = result
        blocks += 1
        bit_errors += errs
        block_errors += blk_err
        steps += n_steps
        return _stop_reached(config, blocks, bit_errors, block_errors)

    if config.workers <= 1:
        rt = runtime or _Runtime(config)
        for b in range(config.max_blocks):
            if consume(_simulate_block(rt, config, ebn0_db, point_index, b)):
                break
    else:
        # Workers race ahead speculatively; consuming results in block-index
        # order and truncating at the stop point reproduces the serial run.
        ctx = get_context("fork")
        chunk = max(1, min(16, config.max_blocks // (4 * config.workers) or 1))
        tasks = ((point_index, ebn0_db, b) for b in range(config.max_blocks))
        with ctx.Pool(config.workers, initializer=_pool_init, initargs=(config,)) as pool:
            for result in pool.imap(_pool_block, tasks, chunksize=chunk):
                if consume(result):
                    break

    wall = time.perf_counter() - start
    k = (1 << config.nu) - config.t * config.nu - 2
    info_bits = blocks * k * k
    return SimRecord(
        ebn0_db=float(ebn0_db),
        decoder=config.decoder,
        jmax=config.jmax if config.decoder == "proposed" else 0,
        blocks=blocks,
        bit_errors=bit_errors,
        post_fec_ber=bit_errors / info_bits if info_bits else 0.0,
        block_errors=block_errors,
        bler=block_errors / blocks if blocks else 0.0,
        bdd_steps_total=steps,
        bdd_steps_per_block=steps / blocks if blocks else 0.0,
        wall_time_s=wall,
        ber_is_upper_bound=bit_errors < config.min_bit_errors,
    )


def run_sweep(config: SimConfig, out_csv=None, progress=None) -> list:
    """One SimRecord per grid point; optionally write CSV + plot data."""
    config.validate()
    runtime = _Runtime(config) if config.workers <= 1 else None
    records = []
    for i, ebn0 in enumerate(config.ebn0_grid):
        rec = run_point(config, ebn0, point_index=i, runtime=runtime)
        records.append(rec)
        if progress is not None:
            progress(rec)
    if out_csv:
        write_csv(records, out_csv)
        write_gnuplot_data(records, _gnuplot_path(out_csv, config.decoder))
    return records


def _gnuplot_path(csv_path: str, decoder: str) -> str:
    stem, _ = os.path.splitext(csv_path)
    return f"{stem}_{decoder}.dat"


def _format_row(r: SimRecord) -> list:
    return [
        f"{r.ebn0_db:.10g}", r.decoder, str(r.jmax), str(r.blocks),
        str(r.bit_errors), f"{r.post_fec_ber:.8e}", str(r.block_errors),
        f"{r.bler:.8e}", f"{r.bdd_steps_per_block:.10g}", f"{r.wall_time_s:.3f}",
    ]


def write_csv(records, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow(_format_row(r))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def write_gnuplot_data(records, path) -> None:
    """Two-column Eb/N0-vs-BER data file, gnuplot friendly."""
    try:
        with open(path, "w") as fh:
            fh.write("# ebn0_db post_fec_ber\n")
            for r in records:
                fh.write(f"{r.ebn0_db:.10g} {r.post_fec_ber:.8e}\n")
    except OSError as exc:
        raise OSError(f"cannot write plot data to {path}: {exc}") from exc


def read_records(path) -> list:
    """Load SimRecords back from a CSV produced by write_csv."""
    records = []
    try:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                blocks = int(row["blocks"])
                per_block = float(row["bdd_steps_per_block"])
                records.append(
                    SimRecord(
                        ebn0_db=float(row["ebn0_db"]),
                        decoder=row["decoder"],
                        jmax=int(row["jmax"]),
                        blocks=blocks,
                        bit_errors=int(row["bit_errors"]),
                        post_fec_ber=float(row["post_fec_ber"]),
                        block_errors=int(row["block_errors"]),
                        bler=float(row["bler"]),
                        bdd_steps_total=round(per_block * blocks),
                        bdd_steps_per_block=per_block,
                        wall_time_s=float(row["wall_time_s"]),
                        ber_is_upper_bound=False,
                    )
                )
    except OSError as exc:
        raise OSError(f"cannot read CSV from {path}: {exc}") from exc
    return records


@dataclass
class ComplexityRow:
    """BDD-step cost of the soft-aided decoder relative to the baseline.

    Both decoders are compared at their own operating points (the first
    grid Eb/N0 where measured BER drops to the target).  ``ratio`` is
    proposed/baseline steps per block; ``added_factor`` = ratio - 1 is the
    reading of "increased by a factor of f" as proposed = (1+f)*baseline.
    """

    jmax: int
    ebn0_proposed: float
    steps_proposed: float
    ebn0_baseline: float
    steps_baseline: float
    ratio: float
    added_factor: float


def _operating_point(records, target_ber) -> SimRecord:
    for rec in sorted(records, key=lambda r: r.ebn0_db):
        if rec.post_fec_ber <= target_ber:
            return rec
    raise RuntimeError(
        f"operating point not reached: no record with BER <= {target_ber:g}"
    )


def complexity_report(proposed_records, baseline_records, target_ber=1e-5) -> list:
    """Per-jmax step factors of the proposed decoder vs the baseline runs."""
    base = _operating_point(baseline_records, target_ber)
    rows = []
    for jmax in sorted({r.jmax for r in proposed_records}):
        subset = [r for r in proposed_records if r.jmax == jmax]
        op = _operating_point(subset, target_ber)
        ratio = op.bdd_steps_per_block / base.bdd_steps_per_block
        rows.append(
            ComplexityRow(
                jmax, op.ebn0_db, op.bdd_steps_per_block,
                base.ebn0_db, base.bdd_steps_per_block, ratio, ratio - 1.0,
            )
        )
    return rows


def format_complexity_table(rows) -> str:
    """Render rows with both readings of "increased by a factor of f"."""
    lines = [
        f"{'jmax':>4}  {'Eb/N0':>6}  {'steps/blk':>10}  "
        f"{'base Eb/N0':>10}  {'base steps':>10}  {'ratio':>7}  {'added':>7}"
    ]
    for r in rows:
        lines.append(
            f"{r.jmax:>4}  {r.ebn0_proposed:>6.2f}  {r.steps_proposed:>10.1f}  "
            f"{r.ebn0_baseline:>10.2f}  {r.steps_baseline:>10.1f}  "
            f"{r.ratio:>7.2f}  {r.added_factor:>7.2f}"
        )
    return "\n".join(lines)
