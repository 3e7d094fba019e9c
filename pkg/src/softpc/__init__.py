"""Soft-aided product-code FEC toolkit.

Erasure-assisted list decoding of BCH product codes steered by per-bit
dynamic reliability scores, the classic iBDD baseline, and a reproducible
Monte-Carlo BER harness.
"""

from .channel import (
    BIT0,
    BIT1,
    ERASURE,
    ChannelParams,
    ReceivedBlock,
    erasure_probability,
    init_drs,
    make_received,
    quantize_ternary,
    transmit,
)
from .decoder import (
    PAPER_OFFSETS_A,
    PAPER_OFFSETS_B,
    BlockResult,
    CandidateCodeword,
    ComponentOutcome,
    ComponentResult,
    DecoderConfig,
    StepCounter,
    apply_decision,
    component_candidates,
    decode_block,
    decode_component,
    generate_filling_patterns,
    ibdd_decode_block,
    miscorrection_check,
    update_drs,
)
from .galois import PRIMITIVE_POLYS, BDDResult, ComponentCode, GaloisField
from .product import ProductCode
from .sim import (
    ComplexityRow,
    SimConfig,
    SimRecord,
    complexity_report,
    format_complexity_table,
    read_records,
    run_point,
    run_sweep,
    write_csv,
    write_gnuplot_data,
)

__all__ = [
    "BIT0", "BIT1", "ERASURE",
    "BDDResult", "BlockResult", "CandidateCodeword", "ChannelParams",
    "ComplexityRow", "ComponentCode", "ComponentOutcome", "ComponentResult",
    "DecoderConfig", "GaloisField", "PAPER_OFFSETS_A", "PAPER_OFFSETS_B",
    "PRIMITIVE_POLYS", "ProductCode", "ReceivedBlock", "SimConfig",
    "SimRecord", "StepCounter",
    "apply_decision", "complexity_report", "component_candidates",
    "decode_block", "decode_component", "erasure_probability",
    "format_complexity_table", "generate_filling_patterns", "ibdd_decode_block",
    "init_drs", "make_received", "miscorrection_check", "quantize_ternary",
    "read_records", "run_point", "run_sweep", "transmit", "update_drs",
    "write_csv", "write_gnuplot_data",
]

__version__ = "0.1.0"
