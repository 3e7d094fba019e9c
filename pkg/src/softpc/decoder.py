"""Iterative product-code decoders.

Two block decoders are provided:

* ``decode_block`` -- the soft-aided decoder.  Rows and columns are decoded
  alternately with an erasure-filling list decoder: the erased positions of
  a vector are filled with complementary random pattern pairs, each filled
  word goes through bounded-distance decoding, candidates that conflict
  with reliable bits are discarded as likely miscorrections, and the
  surviving candidate closest to the received word (Hamming distance over
  unerased positions) is committed in place.  Per-bit reliability scores in
  [0, 31] are nudged up when a vector is already a codeword and down on
  every flipped bit, and the accept thresholds follow the per-iteration
  score mean plus configured offsets.

* ``ibdd_decode_block`` -- the classic hard-decision baseline: plain
  bounded-distance decoding of rows and columns with in-place decisions.

Both count BDD steps the same way: every bounded-distance attempt on a
word with a nonzero syndrome is one step; zero-syndrome short-circuits are
free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .channel import ERASURE, ReceivedBlock
from .galois import ComponentCode
from .product import ProductCode

INF = math.inf

# Offset schedules for 20 iterations: start strict (accept only flips of
# low-score bits), relax over the middle iterations, and end fully
# permissive so the final sweeps reduce to plain list decoding.
PAPER_OFFSETS_A = (-8.0, -8.0) + (-7.0,) * 13 + (1.0,) * 3 + (INF, INF)
PAPER_OFFSETS_B = (0.0, 0.0, 1.0) + (2.0,) * 15 + (INF, INF)


class StepCounter:
    """Mutable BDD-step tally; merge counters by adding their counts."""

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def add(self, n: int = 1) -> None:
        self.count += n


class ComponentOutcome(Enum):
    SKIP = "skip"
    ALREADY_CODEWORD = "already_codeword"
    FAILURE = "failure"
    SUCCESS = "success"


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs of the soft-aided decoder.

    ``offsets_a`` shifts the max-flipped-score threshold and ``offsets_b``
    the flipped-score-sum threshold, one entry per iteration (``inf``
    disables the corresponding check).  ``jmax`` caps the number of
    complementary filling-pattern pairs tried per erased vector.
    """

    jmax: int
    iters: int
    offsets_a: tuple
    offsets_b: tuple
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "offsets_a", tuple(float(x) for x in self.offsets_a))
        object.__setattr__(self, "offsets_b", tuple(float(x) for x in self.offsets_b))
        if self.jmax < 1:
            raise ValueError("jmax must be >= 1")
        if self.iters < 1:
            raise ValueError("iters must be >= 1")
        if len(self.offsets_a) != self.iters or len(self.offsets_b) != self.iters:
            raise ValueError(f"offset vectors must have exactly {self.iters} entries")
        if self.threshold < 0:
            raise ValueError("erasure threshold must be >= 0")


@dataclass
class CandidateCodeword:
    """One bounded-distance decoding result and its acceptance metrics."""

    word: np.ndarray
    pattern_index: int  # 0 for the single no-erasure candidate
    member: int         # 1 or 2, which half of the complementary pair
    max_flipped_score: float
    flipped_score_sum: int
    dist: int           # Hamming distance to the input on unerased positions
    valid: bool


@dataclass
class BlockResult:
    block: np.ndarray
    converged: bool
    iterations_used: int
    bdd_steps: int


@dataclass
class ComponentResult:
    outcome: ComponentOutcome
    codeword: Optional[np.ndarray]


def _pattern_classes(n_erased: int, jmax: int, rng) -> np.ndarray:
    """Pick J = min(2^(E-1), jmax) distinct complementary-pair classes.

    A class is identified by the integer whose bits fill erased positions
    1..E-1 (position 0 is fixed to 0, its complement covers the other
    orientation), so classes enumerate all unordered complementary pairs.
    """
    total = 1 << (n_erased - 1)
    if total <= jmax:
        return np.arange(total)
    return rng.choice(total, size=jmax, replace=False)


def generate_filling_patterns(n_erased: int, jmax: int, rng) -> list:
    """Distinct complementary pattern pairs for ``n_erased`` erasures."""
    if n_erased < 1:
        raise ValueError("need at least one erasure")
    pairs = []
    for v in _pattern_classes(n_erased, jmax, rng):
        v = int(v)
        first = np.zeros(n_erased, dtype=np.uint8)
        for b in range(n_erased - 1):
            first[b + 1] = (v >> b) & 1
        pairs.append((first, first ^ 1))
    return pairs


def miscorrection_check(candidate, ternary, drs, max_threshold, sum_threshold):
    """Score a candidate against the reliability of the bits it flips.

    Returns (max flipped score, sum of flipped scores + 1 each, valid).
    Erased positions never count as flips.  The max is -inf when nothing
    was flipped, and the candidate is rejected when either statistic
    reaches its threshold.
    """
    candidate = np.asarray(candidate)
    ternary = np.asarray(ternary)
    flipped = (candidate != ternary) & (ternary != ERASURE)
    if flipped.any():
        scores = np.asarray(drs)[flipped]
        max_score = float(scores.max())
        score_sum = int(scores.sum()) + int(flipped.sum())
    else:
        max_score = -INF
        score_sum = 0
    return max_score, score_sum, not (max_score >= max_threshold or score_sum >= sum_threshold)


def _component_core(
    code: ComponentCode,
    syn_odd,
    parity,
    erased,
    drs_row,
    max_threshold,
    sum_threshold,
    jmax,
    rng,
    counter,
    trace=None,
    trace_word=None,
):
    """Decode one row/column from its zero-filled syndromes.

    ``syn_odd``/``parity`` describe the word with erasures taken as 0 and
    ``erased`` lists the erased positions ascending.  Returns
    ``(outcome, unerased_flips, fill_bits)`` where the flips and fills are
    relative to the input word; the caller materializes the codeword.
    """
    n_erased = len(erased)

    if n_erased == 0:
        if parity == 0 and not any(syn_odd):
            return ComponentOutcome.ALREADY_CODEWORD, (), ()
        counter.count += 1
        pos = code._solve(syn_odd, parity)
        if pos is None:
            return ComponentOutcome.FAILURE, (), ()
        max_score = -INF
        score_sum = 0
        for p in pos:
            d = int(drs_row[p])
            if d > max_score:
                max_score = d
            score_sum += d + 1
        valid = not (max_score >= max_threshold or score_sum >= sum_threshold)
        if trace is not None:
            word = trace_word.copy()
            word[list(pos)] ^= 1
            trace.append(
                CandidateCodeword(word, 0, 1, max_score, score_sum, len(pos), valid)
            )
        if not valid:
            return ComponentOutcome.FAILURE, (), ()
        return ComponentOutcome.SUCCESS, tuple(sorted(pos)), ()

    if n_erased > code.d_des:
        return ComponentOutcome.SKIP, (), ()

    t = code.t
    odd_powers = code._odd_powers
    syn_contrib = [[odd_powers[s][p] for s in range(t)] for p in erased]
    full_fill = [0] * t
    for row in syn_contrib:
        for s in range(t):
            full_fill[s] ^= row[s]
    erased_index = {p: e for e, p in enumerate(erased)}

    candidates = {}  # (flips, fills) -> (dist, valid)
    for j, cls in enumerate(_pattern_classes(n_erased, jmax, rng)):
        cls = int(cls)
        bits_first = [0] * n_erased
        weight_first = 0
        contrib = [0] * t
        for b in range(n_erased - 1):
            if (cls >> b) & 1:
                bits_first[b + 1] = 1
                weight_first += 1
                row = syn_contrib[b + 1]
                for s in range(t):
                    contrib[s] ^= row[s]
        for member in (1, 2):
            if member == 1:
                fill_syn = [syn_odd[s] ^ contrib[s] for s in range(t)]
                fill_par = parity ^ (weight_first & 1)
                fill_bits = bits_first
            else:
                fill_syn = [syn_odd[s] ^ contrib[s] ^ full_fill[s] for s in range(t)]
                fill_par = parity ^ ((n_erased - weight_first) & 1)
                fill_bits = [1 - b for b in bits_first]
            if fill_par == 0 and not any(fill_syn):
                pos = ()  # the filled word is itself a codeword: zero steps
            else:
                counter.count += 1
                pos = code._solve(fill_syn, fill_par)
                if pos is None:
                    continue
            final_bits = list(fill_bits)
            flips = []
            for p in pos:
                e = erased_index.get(p)
                if e is None:
                    flips.append(p)
                else:
                    final_bits[e] ^= 1
            flips.sort()
            max_score = -INF
            score_sum = 0
            for p in flips:
                d = int(drs_row[p])
                if d > max_score:
                    max_score = d
                score_sum += d + 1
            valid = not (max_score >= max_threshold or score_sum >= sum_threshold)
            if trace is not None:
                word = trace_word.copy()
                if flips:
                    word[flips] ^= 1
                word[erased] = final_bits
                trace.append(
                    CandidateCodeword(
                        word, j + 1, member, max_score, score_sum, len(flips), valid
                    )
                )
            key = (tuple(flips), tuple(final_bits))
            if key not in candidates:
                candidates[key] = (len(flips), valid)

    best_dist = None
    pool = []
    for key, (dist, valid) in candidates.items():
        if not valid:
            continue
        if best_dist is None or dist < best_dist:
            best_dist = dist
            pool = [key]
        elif dist == best_dist:
            pool.append(key)
    if not pool:
        return ComponentOutcome.FAILURE, (), ()
    if len(pool) == 1:
        chosen = pool[0]
    else:
        chosen = pool[int(rng.integers(len(pool)))]  # exact ties: uniform pick
    return ComponentOutcome.SUCCESS, chosen[0], chosen[1]


def _base_state(code: ComponentCode, ternary):
    """Zero-filled odd syndromes, parity, and erased positions of a vector."""
    ternary = np.asarray(ternary, dtype=np.uint8)
    ones = ternary == 1
    powers = code.syndrome_powers[0::2]
    syn = np.bitwise_xor.reduce(np.where(ones[None, :], powers, 0), axis=1)
    erased = [int(p) for p in np.flatnonzero(ternary == ERASURE)]
    return [int(s) for s in syn], int(ones.sum() & 1), erased


def decode_component(
    ternary,
    drs_row,
    max_threshold,
    sum_threshold,
    code: ComponentCode,
    jmax: int,
    rng,
    counter: StepCounter | None = None,
) -> ComponentResult:
    """Decode one received row/column (ternary symbols) into a codeword.

    Outcomes: ``ALREADY_CODEWORD`` (erasure-free with zero syndromes),
    ``SKIP`` (more erasures than the design distance), ``SUCCESS`` with the
    selected codeword, or ``FAILURE``.
    """
    ternary = np.asarray(ternary, dtype=np.uint8)
    if counter is None:
        counter = StepCounter()
    syn_odd, parity, erased = _base_state(code, ternary)
    outcome, flips, fills = _component_core(
        code, syn_odd, parity, erased, drs_row,
        max_threshold, sum_threshold, jmax, rng, counter,
    )
    if outcome is ComponentOutcome.ALREADY_CODEWORD:
        return ComponentResult(outcome, ternary.copy())
    if outcome is not ComponentOutcome.SUCCESS:
        return ComponentResult(outcome, None)
    codeword = ternary.copy()
    if flips:
        codeword[list(flips)] ^= 1
    if erased:
        codeword[erased] = fills
    return ComponentResult(outcome, codeword)


def component_candidates(
    ternary, drs_row, max_threshold, sum_threshold, code, jmax, rng
) -> list:
    """All decoded candidates with their metrics (diagnostic helper)."""
    ternary = np.asarray(ternary, dtype=np.uint8)
    syn_odd, parity, erased = _base_state(code, ternary)
    trace: list = []
    _component_core(
        code, syn_odd, parity, erased, drs_row,
        max_threshold, sum_threshold, jmax, rng, StepCounter(),
        trace=trace, trace_word=ternary,
    )
    return trace


def update_drs(outcome: ComponentOutcome, ternary, codeword, drs_row) -> None:
    """Score update after one component decode, clipped to [0, 31].

    Already-a-codeword: +1 everywhere.  Success: -1 on every unerased
    flipped bit (resolved erasures keep their score).  Failure/skip: no
    change.
    """
    if outcome is ComponentOutcome.ALREADY_CODEWORD:
        drs_row += 1
        np.minimum(drs_row, 31, out=drs_row)
    elif outcome is ComponentOutcome.SUCCESS:
        ternary = np.asarray(ternary)
        flipped = (np.asarray(codeword) != ternary) & (ternary != ERASURE)
        if flipped.any():
            drs_row[flipped] = np.maximum(drs_row[flipped] - 1, 0)


def apply_decision(ternary, codeword) -> None:
    """Commit a decoding decision in place, resolving any erasures."""
    ternary[:] = codeword


def _axis_state(code: ComponentCode, ones, erased):
    """Per-vector odd syndromes, parities, erasure counts (plain lists)."""
    powers = code.syndrome_powers[0::2]
    syn = np.bitwise_xor.reduce(
        np.where(ones[:, None, :], powers[None, :, :], 0), axis=2
    )
    return (
        [list(map(int, row)) for row in syn],
        [int(x) for x in ones.sum(axis=1) & 1],
        [int(x) for x in erased.sum(axis=1)],
    )


def _half_pass(
    code, view, drs_view,
    own_syn, own_par, own_erased,
    cross_syn, cross_par, cross_erased,
    max_threshold, sum_threshold, jmax, rng, counter,
):
    """Decode every vector along one axis, committing decisions in place.

    Decisions only touch the vector being decoded, so vectors within a
    pass are independent; the cross-axis syndromes are patched
    incrementally for each committed change.
    """
    t = code.t
    d_des = code.d_des
    odd_powers = code._odd_powers
    clean = []
    for i in range(code.n):
        n_erased = own_erased[i]
        syn = own_syn[i]
        if n_erased == 0 and own_par[i] == 0 and not any(syn):
            clean.append(i)
            continue
        if n_erased > d_des:
            continue
        row = view[i]
        erased = [int(p) for p in np.flatnonzero(row == ERASURE)] if n_erased else []
        drs_row = drs_view[i]
        outcome, flips, fills = _component_core(
            code, syn, own_par[i], erased, drs_row,
            max_threshold, sum_threshold, jmax, rng, counter,
        )
        if outcome is not ComponentOutcome.SUCCESS:
            continue
        for p in flips:
            row[p] ^= 1
            score = int(drs_row[p])
            if score > 0:
                drs_row[p] = score - 1
            cs = cross_syn[p]
            for s in range(t):
                cs[s] ^= odd_powers[s][i]
            cross_par[p] ^= 1
        for p, bit in zip(erased, fills):
            row[p] = bit
            cross_erased[p] -= 1
            if bit:
                cs = cross_syn[p]
                for s in range(t):
                    cs[s] ^= odd_powers[s][i]
                cross_par[p] ^= 1
        own_syn[i] = [0] * t
        own_par[i] = 0
        own_erased[i] = 0
    if clean:
        # Batched +1 for all already-codeword vectors; their scores are not
        # read by any other vector of the same pass, so this is equivalent
        # to updating them inline.
        drs_view[clean] = np.minimum(drs_view[clean] + 1, 31)


def _all_zero(syn, par, erased=None):
    if erased is not None and any(erased):
        return False
    if any(par):
        return False
    return all(not any(row) for row in syn)


def decode_block(
    received: ReceivedBlock,
    code: ProductCode,
    config: DecoderConfig,
    rng,
    counter: StepCounter | None = None,
) -> BlockResult:
    """Iteratively decode one block with the soft-aided row/column decoder.

    Runs up to ``config.iters`` iterations of a row pass followed by a
    column pass, recomputing the accept thresholds from the score mean at
    the start of each iteration, and stops early once every row and column
    is a codeword and no erasures remain.  Erasures still unresolved at
    the end are replaced by fair coin flips.
    """
    component = code.component
    if counter is None:
        counter = StepCounter()
    start_steps = counter.count

    block = received.ternary.copy()
    drs = received.drs.astype(np.int16, copy=True)
    ones = block == 1
    erased = block == ERASURE
    row_syn, row_par, row_erased = _axis_state(component, ones, erased)
    col_syn, col_par, col_erased = _axis_state(component, ones.T, erased.T)

    block_t = block.T
    drs_t = drs.T
    converged = False
    iterations_used = config.iters
    for it in range(config.iters):
        mean_score = float(drs.mean())
        max_threshold = mean_score + config.offsets_a[it]
        sum_threshold = mean_score + config.offsets_b[it]
        _half_pass(
            component, block, drs, row_syn, row_par, row_erased,
            col_syn, col_par, col_erased,
            max_threshold, sum_threshold, config.jmax, rng, counter,
        )
        _half_pass(
            component, block_t, drs_t, col_syn, col_par, col_erased,
            row_syn, row_par, row_erased,
            max_threshold, sum_threshold, config.jmax, rng, counter,
        )
        if _all_zero(row_syn, row_par, row_erased) and _all_zero(col_syn, col_par):
            converged = True
            iterations_used = it + 1
            break

    if not converged:
        holes = block == ERASURE
        n_holes = int(holes.sum())
        if n_holes:
            block[holes] = rng.integers(0, 2, size=n_holes, dtype=np.uint8)
    return BlockResult(block, converged, iterations_used, counter.count - start_steps)


def _ibdd_half(code, view, own_syn, own_par, cross_syn, cross_par, counter):
    t = code.t
    odd_powers = code._odd_powers
    changed = False
    for i in range(code.n):
        syn = own_syn[i]
        if own_par[i] == 0 and not any(syn):
            continue
        counter.count += 1
        pos = code._solve(syn, own_par[i])
        if pos is None:
            continue
        row = view[i]
        for p in pos:
            row[p] ^= 1
            cs = cross_syn[p]
            for s in range(t):
                cs[s] ^= odd_powers[s][i]
            cross_par[p] ^= 1
        own_syn[i] = [0] * t
        own_par[i] = 0
        changed = True
    return changed


def ibdd_decode_block(
    hard, code: ProductCode, iters: int, counter: StepCounter | None = None
) -> BlockResult:
    """Iterative bounded-distance decoding of a hard-decision block."""
    component = code.component
    if counter is None:
        counter = StepCounter()
    start_steps = counter.count

    block = np.array(hard, dtype=np.uint8, copy=True)
    ones = block == 1
    no_erasures = np.zeros_like(ones)
    row_syn, row_par, _ = _axis_state(component, ones, no_erasures)
    col_syn, col_par, _ = _axis_state(component, ones.T, no_erasures)

    block_t = block.T
    converged = False
    iterations_used = iters
    for it in range(iters):
        changed = _ibdd_half(component, block, row_syn, row_par, col_syn, col_par, counter)
        changed |= _ibdd_half(component, block_t, col_syn, col_par, row_syn, row_par, counter)
        if _all_zero(row_syn, row_par) and _all_zero(col_syn, col_par):
            converged = True
            iterations_used = it + 1
            break
        if not changed:
            # Deterministic stall: every remaining iteration would attempt
            # exactly the same failing vectors, so charge their steps and
            # stop scanning.
            stuck = sum(1 for i in range(component.n) if row_par[i] or any(row_syn[i]))
            stuck += sum(1 for i in range(component.n) if col_par[i] or any(col_syn[i]))
            counter.count += (iters - it - 1) * stuck
            break
    return BlockResult(block, converged, iterations_used, counter.count - start_steps)
