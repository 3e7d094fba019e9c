import numpy as np
import pytest

from softpc import ComponentCode, ProductCode


def all_codewords(code):
    """Full codebook of a small component code, one codeword per row."""
    if code.k > 16:
        raise ValueError("codebook enumeration is for small codes only")
    msgs = ((np.arange(1 << code.k)[:, None] >> np.arange(code.k)[None, :]) & 1)
    return code.encode_rows(msgs.astype(np.uint8))


@pytest.fixture(scope="session")
def code15():
    return ComponentCode(4, 2)


@pytest.fixture(scope="session")
def codebook15(code15):
    book = all_codewords(code15)
    book.flags.writeable = False
    return book


@pytest.fixture(scope="session")
def pc15(code15):
    return ProductCode(code15)
