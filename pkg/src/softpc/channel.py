"""BPSK over binary-input AWGN, ternary quantization, and reliability scores.

Bit 0 is modulated to +1 and bit 1 to -1.  Received values with magnitude
below the threshold T become erasures; every bit also gets a 5-bit dynamic
reliability score (DRS) in [0, 31], initialized rank-wise from |y| so that
the 24 magnitude groups map onto scores 8..31.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BIT0 = 0
BIT1 = 1
ERASURE = 2

DRS_MIN, DRS_MAX = 0, 31
DRS_INIT_MIN, DRS_GROUPS = 8, 24


@dataclass(frozen=True)
class ChannelParams:
    """AWGN operating point: sigma^2 = 1 / (2 * rate * 10^(ebn0_db/10))."""

    ebn0_db: float
    rate: float
    sigma: float
    threshold: float

    @classmethod
    def make(cls, ebn0_db: float, rate: float, threshold: float) -> "ChannelParams":
        if not 0 < rate <= 1:
            raise ValueError("rate must be in (0, 1]")
        if threshold < 0:
            raise ValueError("erasure threshold must be >= 0")
        sigma = math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))
        return cls(ebn0_db, rate, sigma, threshold)


@dataclass
class ReceivedBlock:
    """One product-code block as seen by the decoder."""

    soft: np.ndarray     # raw channel values
    ternary: np.ndarray  # {0, 1, ERASURE}
    drs: np.ndarray      # int16 scores in [0, 31]


def transmit(block, params: ChannelParams, rng) -> np.ndarray:
    """BPSK-modulate a binary block and add white Gaussian noise."""
    block = np.asarray(block, dtype=np.uint8)
    return (1.0 - 2.0 * block) + rng.standard_normal(block.shape) * params.sigma


def quantize_ternary(soft, threshold: float) -> np.ndarray:
    """Erase |y| < threshold, otherwise take the sign (boundary is a bit)."""
    soft = np.asarray(soft, dtype=np.float64)
    out = np.where(soft < 0, BIT1, BIT0).astype(np.uint8)
    out[np.abs(soft) < threshold] = ERASURE
    return out


def init_drs(soft) -> np.ndarray:
    """Rank-based initial scores: 8 + floor(24 * rank / count).

    Magnitudes are sorted ascending with a stable order (ties resolved by
    linear index), so the lowest-|y| group gets 8 and the highest gets 31.
    """
    soft = np.asarray(soft, dtype=np.float64)
    count = soft.size
    order = np.argsort(np.abs(soft).ravel(), kind="stable")
    flat = np.empty(count, dtype=np.int16)
    flat[order] = DRS_INIT_MIN + (DRS_GROUPS * np.arange(count, dtype=np.int64)) // count
    return flat.reshape(soft.shape)


def make_received(soft, threshold: float) -> ReceivedBlock:
    soft = np.asarray(soft, dtype=np.float64)
    return ReceivedBlock(soft, quantize_ternary(soft, threshold), init_drs(soft))


def erasure_probability(params: ChannelParams) -> float:
    """P(|y| < T) for BPSK over AWGN: Q((1-T)/sigma) - Q((1+T)/sigma)."""

    def q(x: float) -> float:
        return 0.5 * math.erfc(x / math.sqrt(2.0))

    t, s = params.threshold, params.sigma
    return q((1.0 - t) / s) - q((1.0 + t) / s)
