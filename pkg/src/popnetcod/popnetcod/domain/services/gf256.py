"""Arithmetic over GF(2^8) with the reduction polynomial x^8+x^4+x^3+x+1 (0x11B).

Elements are plain ints in [0, 255] for scalar use and ``np.uint8`` arrays for
bulk row operations. Log/antilog tables are built once at import time from the
generator 0x03; the full 256x256 product table is derived from them so that
coding operations reduce to numpy fancy indexing.
"""

import numpy as np

from popnetcod.domain.exceptions import FieldDomainException

POLYNOMIAL = 0x11B
GENERATOR = 0x03
ORDER = 256


def gf_add(a: int, b: int) -> int:
    """Add two field elements (bitwise XOR; every element is its own negative)."""
    return a ^ b


def gf_mul_slow(a: int, b: int) -> int:
    """Multiply by shift-and-reduce, independent of the lookup tables."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= POLYNOMIAL
    return result & 0xFF


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    exp = np.zeros(2 * (ORDER - 1), dtype=np.int32)
    log = np.full(ORDER, -1, dtype=np.int32)
    x = 1
    for i in range(ORDER - 1):
        exp[i] = x
        log[x] = i
        x = gf_mul_slow(x, GENERATOR)
    exp[ORDER - 1 :] = exp[: ORDER - 1]
    return exp, log


EXP_TABLE, LOG_TABLE = _build_tables()


def _build_mul_table() -> np.ndarray:
    logs = LOG_TABLE
    table = EXP_TABLE[(logs[:, None] + logs[None, :]) % (ORDER - 1)].astype(np.uint8)
    table[0, :] = 0
    table[:, 0] = 0
    return table


MUL_TABLE = _build_mul_table()
MUL_TABLE.setflags(write=False)

INV_TABLE = np.zeros(ORDER, dtype=np.uint8)
INV_TABLE[1:] = EXP_TABLE[(ORDER - 1 - LOG_TABLE[1:]) % (ORDER - 1)]
INV_TABLE.setflags(write=False)


def gf_mul(a: int, b: int) -> int:
    """Multiply two field elements using the log/antilog tables."""
    if a == 0 or b == 0:
        return 0
    return int(EXP_TABLE[LOG_TABLE[a] + LOG_TABLE[b]])


def gf_inv(a: int) -> int:
    """Multiplicative inverse.

    Raises:
        FieldDomainException: If ``a`` is zero.
    """
    if a == 0:
        raise FieldDomainException("gf_inv", "Zero has no multiplicative inverse in GF(2^8).")
    return int(INV_TABLE[a])


# ---- bulk helpers on uint8 vectors ----

def scale(vector: np.ndarray, factor: int) -> np.ndarray:
    """Multiply every element of ``vector`` by ``factor``."""
    return MUL_TABLE[factor][vector]


def combine(factors: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Linear combination ``sum_j factors[j] * rows[j]`` of the rows of a 2-D uint8 array."""
    if rows.shape[0] == 0:
        return np.zeros(rows.shape[1], dtype=np.uint8)
    products = MUL_TABLE[factors[:, None], rows]
    return np.bitwise_xor.reduce(products, axis=0)
