"""Square product codes built from one component code for rows and columns.

Blocks are contiguous row-major n x n uint8 matrices; column operations go
through strided views, so rows and columns share the same code paths.  The
k x k message sits in the high-index corner ``block[n-k:, n-k:]``.
"""

from __future__ import annotations

import numpy as np

from .galois import ComponentCode


class ProductCode:
    """n^2-bit product code whose rows and columns are all component codewords."""

    def __init__(self, component: ComponentCode):
        self.component = component
        self.n = component.n
        self.k = component.k
        self.t = component.t

    @property
    def rate(self) -> float:
        return self.k**2 / self.n**2

    def encode(self, message) -> np.ndarray:
        """Systematically encode a k x k message into an n x n block.

        Rows are encoded first, then every column; by linearity the
        checks-on-checks corner satisfies the row code as well, so the
        encoding order does not matter.
        """
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (self.k, self.k):
            raise ValueError(f"message must have shape ({self.k}, {self.k})")
        msg_rows = self.component.encode_rows(message)  # (k, n)
        par = self.component._parity_i64
        col_par = ((msg_rows.T.astype(np.int64) @ par) & 1).astype(np.uint8)
        return np.vstack([col_par.T, msg_rows])

    def is_codeword(self, block) -> bool:
        """True iff all 2n component syndromes (and parities) are zero."""
        block = np.asarray(block, dtype=np.uint8)
        if block.shape != (self.n, self.n):
            raise ValueError(f"block must have shape ({self.n}, {self.n})")
        powers = self.component.syndrome_powers
        for ones in (block == 1, block.T == 1):
            syn = np.bitwise_xor.reduce(
                np.where(ones[:, None, :], powers[None, :, :], 0), axis=2
            )
            if syn.any() or (ones.sum(axis=1) & 1).any():
                return False
        return True
