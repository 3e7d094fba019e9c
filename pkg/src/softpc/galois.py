"""GF(2^m) arithmetic and even-weight BCH component codes.

Component codes are even-weight subcodes of primitive t-error-correcting
BCH codes of length n = 2^m - 1: the parent generator polynomial is
multiplied by (x + 1), which raises the design distance to 2t + 2 while
bounded-distance decoding keeps radius t.  Bit ``i`` of a codeword vector
is the coefficient of x^i, so the message occupies positions n-k..n-1 and
parity occupies positions 0..n-k-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

# Minimal-weight primitive polynomials, bit i = coefficient of x^i.
PRIMITIVE_POLYS = {
    3: 0b1011,            # x^3 + x + 1
    4: 0b10011,           # x^4 + x + 1
    5: 0b100101,          # x^5 + x^2 + 1
    6: 0b1000011,         # x^6 + x + 1
    7: 0b10001001,        # x^7 + x^3 + 1
    8: 0b100011101,       # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,      # x^9 + x^4 + 1
    10: 0b10000001001,    # x^10 + x^3 + 1
    11: 0b100000000101,   # x^11 + x^2 + 1
    12: 0b1000001010011,  # x^12 + x^6 + x^4 + x + 1
}


class GaloisField:
    """GF(2^m) with log/antilog tables and a quadratic-equation solver.

    The antilog table is stored doubled so that products of two logs can be
    looked up without a modulo.  ``half_trace[u]`` holds a solution z of
    z^2 + z = u, or -1 when the equation has no root in the field.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 3 <= m <= 12:
            raise ValueError(f"extension degree must be in [3, 12], got {m}")
        self.m = m
        self.size = 1 << m
        self.order = self.size - 1
        self.primitive_poly = (
            PRIMITIVE_POLYS[m] if primitive_poly is None else primitive_poly
        )

        exp = [0] * (2 * self.order)
        log = [0] * self.size
        x = 1
        for i in range(self.order):
            if i and x == 1:
                raise ValueError(
                    f"0b{self.primitive_poly:b} is not primitive over GF(2^{m})"
                )
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.size:
                x ^= self.primitive_poly
        if x != 1:
            raise ValueError(f"0b{self.primitive_poly:b} is not primitive")
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self.exp = exp
        self.log = log

        self.sq = [0] * self.size
        for a in range(1, self.size):
            self.sq[a] = exp[2 * log[a] % self.order]

        # z -> z^2 + z is linear and 2-to-1; invert it once.
        half = [-1] * self.size
        for z in range(self.size):
            u = self.sq[z] ^ z
            if half[u] < 0:
                half[u] = z
        self.half_trace = half

        self.exp_np = np.array(exp, dtype=np.uint16)
        self.log_np = np.array(log, dtype=np.uint16)
        self.exp_np.flags.writeable = False
        self.log_np.flags.writeable = False

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        return self.exp[self.order - self.log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in GF(2^m)")
        if a == 0:
            return 0
        return self.exp[self.log[a] - self.log[b] + self.order]

    def alpha_power(self, i: int) -> int:
        """alpha^i for any integer exponent i."""
        return self.exp[i % self.order]


def poly_mul_gf2(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials packed into ints."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod_gf2(a: int, g: int) -> int:
    """Remainder of a modulo g over GF(2); g must be nonzero."""
    dg = g.bit_length() - 1
    while a and a.bit_length() - 1 >= dg:
        a ^= g << (a.bit_length() - 1 - dg)
    return a


def _cyclotomic_coset(s: int, order: int) -> list[int]:
    coset = []
    x = s % order
    while x not in coset:
        coset.append(x)
        x = 2 * x % order
    return coset


def _minimal_poly(field: GaloisField, coset: list[int]) -> int:
    """Minimal polynomial of alpha^s over GF(2), packed into an int."""
    poly = [1]
    for j in coset:
        root = field.alpha_power(j)
        nxt = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            if c:
                nxt[d + 1] ^= c
                nxt[d] ^= field.mul(c, root)
        poly = nxt
    assert all(c in (0, 1) for c in poly), "minimal polynomial not binary"
    return sum(1 << d for d, c in enumerate(poly) if c)


@dataclass
class BDDResult:
    """Outcome of a bounded-distance decode: at most t flips, or failure."""

    decoded: bool
    codeword: Optional[np.ndarray]
    flips: int


class ComponentCode:
    """[n, k] even-weight BCH subcode with radius-t bounded-distance decoding.

    n = 2^nu - 1 and k = 2^nu - t*nu - 2; construction fails for parameter
    pairs where the dimension formula does not hold (degenerate cosets).
    """

    def __init__(self, nu: int, t: int):
        if t < 1:
            raise ValueError("t must be >= 1")
        field = GaloisField(nu)
        n = field.order

        seen = set()
        g = 0b11  # the (x + 1) factor forces even codeword weight
        for s in range(1, 2 * t, 2):
            coset = _cyclotomic_coset(s, n)
            key = min(coset)
            if key in seen:
                continue
            seen.add(key)
            g = poly_mul_gf2(g, _minimal_poly(field, coset))

        k = n - (g.bit_length() - 1)
        expected_k = (1 << nu) - t * nu - 2
        if k != expected_k:
            raise ValueError(
                f"nu={nu}, t={t} gives k={k}, not the supported k={expected_k}"
            )

        self.field = field
        self.nu = nu
        self.n = n
        self.k = k
        self.t = t
        self.d_des = 2 * t + 2
        self.generator_poly = g

        # Systematic encoder: parity bits of each unit message, so that
        # encode() is a single binary matrix product.
        nk = n - k
        parity = np.zeros((k, nk), dtype=np.uint8)
        for j in range(k):
            rem = poly_mod_gf2(1 << (nk + j), g)
            parity[j] = [(rem >> d) & 1 for d in range(nk)]
        self._parity = parity
        self._parity_i64 = parity.astype(np.int64)

        # alpha^(j*i) for syndrome j at bit position i.
        powers = np.zeros((2 * t, n), dtype=np.uint16)
        idx = np.arange(n)
        for j in range(1, 2 * t + 1):
            powers[j - 1] = field.exp_np[(j * idx) % n]
        powers.flags.writeable = False
        self.syndrome_powers = powers
        # Plain-list copies of the odd rows for the scalar decoding path.
        self._odd_powers = [
            [field.exp[((2 * s + 1) * i) % n] for i in range(n)] for s in range(t)
        ]

    # -- encoding ----------------------------------------------------------

    def encode(self, message) -> np.ndarray:
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (self.k,):
            raise ValueError(f"message must have shape ({self.k},)")
        return self.encode_rows(message[None, :])[0]

    def encode_rows(self, messages) -> np.ndarray:
        """Encode a batch of messages, one per row."""
        messages = np.asarray(messages, dtype=np.uint8)
        if messages.ndim != 2 or messages.shape[1] != self.k:
            raise ValueError(f"messages must have shape (m, {self.k})")
        par = (messages.astype(np.int64) @ self._parity_i64) & 1
        return np.hstack([par.astype(np.uint8), messages])

    # -- syndromes ---------------------------------------------------------

    def syndromes(self, word) -> tuple[np.ndarray, int]:
        """S_j = word(alpha^j) for j = 1..2t, plus the overall parity bit.

        All of them are zero iff the word is a codeword.
        """
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.n,):
            raise ValueError(f"word must have shape ({self.n},)")
        ones = word == 1
        syn = np.bitwise_xor.reduce(
            np.where(ones[None, :], self.syndrome_powers, 0), axis=1
        )
        return syn, int(ones.sum() & 1)

    # -- bounded-distance decoding ------------------------------------------

    def decode(self, word) -> BDDResult:
        """Return the unique codeword within Hamming radius t, if it exists."""
        syn, par = self.syndromes(word)
        pos = self._solve([int(syn[2 * s]) for s in range(self.t)], par)
        if pos is None:
            return BDDResult(False, None, 0)
        codeword = np.asarray(word, dtype=np.uint8).copy()
        for p in pos:
            codeword[p] ^= 1
        return BDDResult(True, codeword, len(pos))

    def _solve(self, syn_odd, parity) -> Optional[tuple]:
        """Error positions from odd syndromes [S_1, S_3, ...] and parity.

        Returns None on failure (no codeword of the even-weight subcode
        within radius t).  The even orders S_2j = S_j^2 are implicit for
        binary words, so only the odd ones are needed.
        """
        if self.t == 2:
            s1, s3 = syn_odd
            if s1 == 0 and s3 == 0:
                pos = ()
            elif s1 == 0:
                return None
            else:
                exp, log = self.field.exp, self.field.log
                n = self.n
                s1_cubed = exp[3 * log[s1] % n]
                if s3 == s1_cubed:
                    pos = (log[s1],)
                else:
                    # Locator 1 + s1*x + l2*x^2; roots via z^2 + z = l2/s1^2.
                    l2 = exp[(log[s3 ^ s1_cubed] - log[s1]) % n]
                    z = self.field.half_trace[exp[(log[l2] - 2 * log[s1]) % n]]
                    if z < 0:
                        return None
                    log_b = (log[s1] - log[l2]) % n
                    x1 = exp[log_b + log[z]]
                    x2 = x1 ^ exp[log_b]
                    pos = ((n - log[x1]) % n, (n - log[x2]) % n)
        else:
            pos = self._solve_general(syn_odd)
            if pos is None:
                return None
        if parity ^ (len(pos) & 1):
            return None  # result would have odd weight, outside the subcode
        return pos

    def _solve_general(self, syn_odd) -> Optional[tuple]:
        """Berlekamp-Massey plus Chien search, for any t."""
        t, field = self.t, self.field
        syn = [0] * (2 * t + 1)
        for s in range(t):
            syn[2 * s + 1] = syn_odd[s]
        for e in range(2, 2 * t + 1, 2):
            syn[e] = field.sq[syn[e // 2]]
        if not any(syn[1:]):
            return ()

        # Berlekamp-Massey over the syndrome sequence.
        cur = [1] + [0] * (2 * t)
        prev = [1] + [0] * (2 * t)
        deg, shift, prev_d = 0, 1, 1
        for i in range(2 * t):
            d = syn[i + 1]
            for j in range(1, deg + 1):
                if cur[j] and syn[i + 1 - j]:
                    d ^= field.mul(cur[j], syn[i + 1 - j])
            if d == 0:
                shift += 1
                continue
            coef = field.div(d, prev_d)
            if 2 * deg <= i:
                saved = cur[:]
                for j in range(2 * t + 1 - shift):
                    if prev[j]:
                        cur[j + shift] ^= field.mul(coef, prev[j])
                deg = i + 1 - deg
                prev, prev_d, shift = saved, d, 1
            else:
                for j in range(2 * t + 1 - shift):
                    if prev[j]:
                        cur[j + shift] ^= field.mul(coef, prev[j])
                shift += 1
        if deg > t:
            return None

        # Chien search: evaluate the locator at every nonzero field element.
        n = self.n
        logs = np.arange(n, dtype=np.int64)
        acc = np.full(n, cur[0], dtype=np.uint16)
        for d in range(1, deg + 1):
            if cur[d]:
                acc ^= field.exp_np[(field.log[cur[d]] + d * logs) % n]
        roots = np.flatnonzero(acc == 0)
        if len(roots) != deg:
            return None  # locator degree and root count disagree
        return tuple(int((n - s) % n) for s in roots)
