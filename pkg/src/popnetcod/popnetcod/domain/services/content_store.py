"""
Coded Content Store

A router's Content Store keeps, per name prefix, a coding matrix of the coded
Data packets it holds. For every downstream face it counts how many packets of
that prefix were already sent over the face (sigma), so the remaining supply of
innovative packets for the face is ``rank - sigma``.

Rows in a store are always linearly independent: only innovative packets are
inserted and eviction removes whole rows, so the row count of an entry equals
its rank and the store's occupancy is the sum of ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from popnetcod.domain.exceptions import ContractViolationException
from popnetcod.domain.models.packets import CodedPacket, Face, NamePrefix

from .rlnc import CodingMatrix, RandomSource, is_innovative, recode


@dataclass
class CsEntry:
    """Cached rows of one prefix.

    Attributes:
        prefix: Name prefix of the entry.
        matrix: Coded rows held for the prefix.
        sigma: Per face, packets of this prefix already sent over the face.
    """

    prefix: NamePrefix
    matrix: CodingMatrix
    sigma: dict[Face, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.matrix.rank

    def xi(self, face: Face) -> int:
        """Innovative packets this entry can still send over ``face``."""
        return max(0, self.matrix.rank - self.sigma.get(face, 0))

    def serve(self, face: Face, rng: RandomSource) -> CodedPacket:
        """Recode the entry for ``face`` and count it as sent.

        Raises:
            ContractViolationException: If the face has no innovative supply left.
        """
        if self.xi(face) == 0:
            raise ContractViolationException("serve", f"No innovative supply of {self.prefix} for face {face}.")
        packet = recode(self.matrix, rng)
        self.note_sent(face)
        return packet

    def note_sent(self, face: Face) -> None:
        """Count a packet drawn from this entry and sent over ``face``."""
        self.sigma[face] = min(self.sigma.get(face, 0) + 1, self.matrix.rank)


def xi(entry: CsEntry | None, face: Face) -> int:
    """Supply of innovative packets for ``face``; 0 without an entry."""
    return 0 if entry is None else entry.xi(face)


class ContentStore:
    """Per-prefix coded store bounded to ``capacity`` packets.

    Args:
        capacity: Maximum number of stored packets over all prefixes.
        unlimited: Ignore ``capacity`` entirely.
    """

    def __init__(self, capacity: int, *, unlimited: bool = False):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.capacity = capacity
        self.unlimited = unlimited
        self.entries: dict[NamePrefix, CsEntry] = {}
        self._occupancy = 0

    def __contains__(self, prefix: object) -> bool:
        return prefix in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def occupancy(self) -> int:
        return self._occupancy

    @property
    def is_full(self) -> bool:
        return not self.unlimited and self._occupancy >= self.capacity

    def get(self, prefix: NamePrefix) -> CsEntry | None:
        return self.entries.get(prefix)

    def xi(self, prefix: NamePrefix, face: Face) -> int:
        return xi(self.entries.get(prefix), face)

    def is_innovative(self, packet: CodedPacket) -> bool:
        """True iff ``packet`` would raise the rank of its prefix's entry (always true without one)."""
        entry = self.entries.get(packet.prefix)
        return entry is None or is_innovative(entry.matrix, packet)

    def insert(self, packet: CodedPacket) -> bool:
        """Store ``packet`` if it is innovative for its prefix.

        Raises:
            ContractViolationException: If the store is full.
        """
        if self.is_full:
            raise ContractViolationException(
                "insert", f"Content Store full ({self._occupancy}/{self.capacity}) while inserting {packet.prefix}."
            )
        entry = self.entries.get(packet.prefix)
        if entry is None:
            matrix = CodingMatrix(packet.width, len(packet.payload), packet.prefix)
            if not matrix.append(packet.coeffs, packet.payload):
                return False
            self.entries[packet.prefix] = CsEntry(packet.prefix, matrix)
        else:
            if not is_innovative(entry.matrix, packet):
                return False
            entry.matrix.append(packet.coeffs, packet.payload)
        self._occupancy += 1
        return True

    def evict(self, prefix: NamePrefix, k: int, rng: RandomSource) -> int:
        """Remove up to ``k`` random rows of ``prefix``; returns the rows removed.

        Every face's sigma drops by one per removed row, never below zero.
        The entry is deleted once it holds no rows.
        """
        entry = self.entries.get(prefix)
        if entry is None or k <= 0:
            return 0
        rows = entry.matrix.row_count
        n = min(k, rows)
        victims = rng.choice(rows, size=n, replace=False)
        entry.matrix.remove_rows([int(i) for i in np.atleast_1d(victims)])
        for face, count in entry.sigma.items():
            entry.sigma[face] = max(0, count - n)
        if entry.matrix.row_count == 0:
            del self.entries[prefix]
        self._occupancy -= n
        return n
