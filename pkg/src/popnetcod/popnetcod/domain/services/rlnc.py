"""Random linear network coding over GF(2^8).

A ``CodingMatrix`` keeps two views of the same row space:

* the raw rows exactly as they were appended (coefficients and payload side by
  side), which recoding combines and eviction removes from;
* an incrementally maintained reduced row-echelon basis of those rows, which
  answers rank and innovativeness queries with a single vectorised reduction
  and, once full rank, holds the decoded generation.
"""

from __future__ import annotations

import numpy as np

from popnetcod.domain.exceptions import (
    DimensionMismatchException,
    EmptyMatrixException,
    RankDeficientException,
)
from popnetcod.domain.models.packets import CodedPacket, NamePrefix

from .gf256 import INV_TABLE, MUL_TABLE, combine

RandomSource = np.random.Generator

ANONYMOUS = NamePrefix("", 0)


class CodingMatrix:
    """Coded rows of one generation plus their echelon basis.

    Attributes:
        width: Generation size, i.e. length of every coefficient vector.
        payload_len: Bytes of payload carried by every row.
        prefix: Generation the rows belong to, stamped on recoded packets.
    """

    def __init__(self, width: int, payload_len: int, prefix: NamePrefix | None = None):
        self.width = width
        self.payload_len = payload_len
        self.prefix = prefix if prefix is not None else ANONYMOUS
        self._rows: list[np.ndarray] = []
        self._stack: np.ndarray | None = None
        self._basis = np.zeros((width, width + payload_len), dtype=np.uint8)
        self._pivots: list[int] = []

    @classmethod
    def from_rows(
        cls, coeffs: np.ndarray, payloads: np.ndarray, prefix: NamePrefix | None = None
    ) -> CodingMatrix:
        """Build a matrix from 2-D coefficient and payload arrays (one row per packet)."""
        coeffs = np.asarray(coeffs, dtype=np.uint8)
        payloads = np.asarray(payloads, dtype=np.uint8)
        if coeffs.ndim != 2 or payloads.ndim != 2 or coeffs.shape[0] != payloads.shape[0]:
            raise DimensionMismatchException("from_rows", "Coefficient and payload rows must pair up.")
        matrix = cls(coeffs.shape[1], payloads.shape[1], prefix)
        for c, p in zip(coeffs, payloads):
            matrix.append(c, p)
        return matrix

    # ---- views ----

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def row_count(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> np.ndarray:
        """Raw rows as one (row_count, width + payload_len) array."""
        if self._stack is None:
            if self._rows:
                self._stack = np.vstack(self._rows)
            else:
                self._stack = np.zeros((0, self.width + self.payload_len), dtype=np.uint8)
        return self._stack

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.width

    # ---- mutation ----

    def append(self, coeffs: np.ndarray, payload: np.ndarray) -> bool:
        """Append a raw row; returns True when it increased the rank."""
        self._check_dims("append", coeffs, payload)
        row = np.concatenate((np.asarray(coeffs, dtype=np.uint8), np.asarray(payload, dtype=np.uint8)))
        self._rows.append(row)
        self._stack = None
        return self._absorb(row)

    def remove_rows(self, indices: list[int]) -> None:
        """Delete raw rows by index and rebuild the echelon basis from what remains."""
        drop = set(indices)
        self._rows = [row for i, row in enumerate(self._rows) if i not in drop]
        self._stack = None
        self._basis[:] = 0
        self._pivots = []
        for row in self._rows:
            self._absorb(row)

    # ---- queries ----

    def reduce_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Residual of ``coeffs`` after elimination against the basis."""
        r = self.rank
        if r == 0:
            return np.asarray(coeffs, dtype=np.uint8)
        basis = self._basis[:r, : self.width]
        return coeffs ^ combine(coeffs[self._pivots], basis)

    def decoded_payloads(self) -> np.ndarray:
        """Payload columns of the basis ordered by pivot (valid at full rank only)."""
        order = np.argsort(self._pivots)
        return self._basis[: self.rank][order, self.width :].copy()

    # ---- internals ----

    def _check_dims(self, operation: str, coeffs: np.ndarray, payload: np.ndarray) -> None:
        if len(coeffs) != self.width or len(payload) != self.payload_len:
            raise DimensionMismatchException(
                operation,
                f"Expected coefficient width {self.width} and payload {self.payload_len}, "
                f"got {len(coeffs)} and {len(payload)}.",
            )

    def _absorb(self, row: np.ndarray) -> bool:
        r = self.rank
        if r:
            row = row ^ combine(row[self._pivots], self._basis[:r])
        nonzero = np.flatnonzero(row[: self.width])
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        row = MUL_TABLE[int(INV_TABLE[row[pivot]])][row]
        if r:
            factors = self._basis[:r, pivot].copy()
            self._basis[:r] ^= MUL_TABLE[factors[:, None], row[None, :]]
        self._basis[r] = row
        self._pivots.append(pivot)
        return True


def rank(m: CodingMatrix) -> int:
    """Rank of the coefficient rows of ``m``; 0 for an empty matrix."""
    return m.rank


def rank_of(coeffs: np.ndarray) -> int:
    """Rank of an arbitrary 2-D coefficient array by plain Gaussian elimination."""
    work = np.array(coeffs, dtype=np.uint8, copy=True)
    if work.size == 0:
        return 0
    n_rows, n_cols = work.shape
    r = 0
    for col in range(n_cols):
        candidates = np.flatnonzero(work[r:, col])
        if candidates.size == 0:
            continue
        pivot_row = r + int(candidates[0])
        work[[r, pivot_row]] = work[[pivot_row, r]]
        work[r] = MUL_TABLE[int(INV_TABLE[work[r, col]])][work[r]]
        below = work[r + 1 :, col].copy()
        work[r + 1 :] ^= MUL_TABLE[below[:, None], work[r][None, :]]
        r += 1
        if r == n_rows:
            break
    return r


def is_innovative(m: CodingMatrix, p: CodedPacket) -> bool:
    """True iff appending ``p`` would increase the rank of ``m``.

    Raises:
        DimensionMismatchException: If the packet does not fit the matrix.
    """
    m._check_dims("is_innovative", p.coeffs, p.payload)
    if m.is_full_rank:
        return False
    return bool(np.any(m.reduce_coeffs(p.coeffs)))


def recode(m: CodingMatrix, rng: RandomSource) -> CodedPacket:
    """Random linear combination of the rows of ``m`` with factors uniform in [0, 255].

    Draws yielding an all-zero coefficient vector are rejected and redrawn.

    Raises:
        EmptyMatrixException: If ``m`` has no row of nonzero rank.
    """
    if m.rank == 0:
        raise EmptyMatrixException("recode", f"Cannot recode {m.prefix} from an empty matrix.")
    rows = m.rows
    while True:
        factors = rng.integers(0, 256, size=rows.shape[0], dtype=np.uint8)
        combined = combine(factors, rows)
        if np.any(combined[: m.width]):
            return CodedPacket(prefix=m.prefix, coeffs=combined[: m.width], payload=combined[m.width :])


def decode(m: CodingMatrix) -> np.ndarray:
    """Recover the generation's source payloads, one row per source packet in index order.

    Raises:
        RankDeficientException: If ``m`` is not full rank.
    """
    if not m.is_full_rank:
        raise RankDeficientException(
            "decode", f"Rank {m.rank} below generation size {m.width}.", details={"rank": m.rank}
        )
    return m.decoded_payloads()


def encode(payloads: np.ndarray, coeffs: np.ndarray, prefix: NamePrefix) -> list[CodedPacket]:
    """Encode source payloads with the given coefficient rows."""
    payloads = np.asarray(payloads, dtype=np.uint8)
    coeffs = np.asarray(coeffs, dtype=np.uint8)
    out = []
    for row in coeffs:
        out.append(CodedPacket(prefix=prefix, coeffs=row.copy(), payload=combine(row, payloads)))
    return out


def source_matrix(payloads: np.ndarray, prefix: NamePrefix | None = None) -> CodingMatrix:
    """Full-rank matrix of source packets with unit coefficient vectors."""
    payloads = np.asarray(payloads, dtype=np.uint8)
    size = payloads.shape[0]
    return CodingMatrix.from_rows(np.eye(size, dtype=np.uint8), payloads, prefix)
