"""
Popularity Measurement for Cache Placement and Eviction

Each router watches, per downstream face, the name prefixes of the Interests
received during the last ``tau`` seconds. The share of a prefix among a face's
recent Interests estimates its request rate on that face, which in turn sets
how many of the prefix's packets the router should keep for that face.

Placement caches a packet when, averaged over the other downstream faces, the
stored supply falls short of the target of the faces that recently asked for
the prefix. Eviction removes the largest number of packets that still leaves
every face with its target.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from popnetcod.domain.models.packets import Face, NamePrefix

from .content_store import CsEntry, xi


class EvictionQueue:
    """FIFO of prefixes whose Interests left the observation window."""

    def __init__(self) -> None:
        self._queue: deque[NamePrefix] = deque()

    def __len__(self) -> int:
        return len(self._queue)

    def __iter__(self) -> Iterator[NamePrefix]:
        return iter(self._queue)

    def push(self, prefix: NamePrefix) -> None:
        self._queue.append(prefix)

    def pop(self) -> NamePrefix:
        return self._queue.popleft()


class RecentInterests:
    """Per-face list of (prefix, arrival time) within the observation window.

    Args:
        tau: Observation window in seconds.
    """

    def __init__(self, tau: float):
        self.tau = tau
        self._lists: dict[Face, deque[tuple[NamePrefix, float]]] = {}
        self._counts: dict[Face, Counter[NamePrefix]] = {}

    def record_interest(self, face: Face, prefix: NamePrefix, t: float) -> None:
        self._lists.setdefault(face, deque()).append((prefix, t))
        self._counts.setdefault(face, Counter())[prefix] += 1

    def expire(self, evictions: EvictionQueue, t: float) -> None:
        """Drop entries older than ``t - tau`` and queue their prefixes for eviction."""
        horizon = t - self.tau
        for face, entries in self._lists.items():
            counts = self._counts[face]
            while entries and entries[0][1] < horizon:
                prefix, _ = entries.popleft()
                counts[prefix] -= 1
                if counts[prefix] == 0:
                    del counts[prefix]
                evictions.push(prefix)

    def total(self, face: Face) -> int:
        entries = self._lists.get(face)
        return len(entries) if entries else 0

    def count(self, face: Face, prefix: NamePrefix) -> int:
        counts = self._counts.get(face)
        return counts.get(prefix, 0) if counts else 0

    def entries(self, face: Face) -> list[tuple[NamePrefix, float]]:
        return list(self._lists.get(face, ()))

    def lambda_(self, face: Face, prefix: NamePrefix) -> float:
        """Share of ``face``'s recent Interests that named ``prefix``; 0 with no Interests."""
        total = self.total(face)
        return self.count(face, prefix) / total if total else 0.0


class ToCacheTable:
    """Outstanding cache reservations per prefix.

    A reservation lapses at its expiry time, like the Interest that made it.
    """

    def __init__(self) -> None:
        self._marks: dict[NamePrefix, deque[float]] = {}

    def __contains__(self, prefix: object) -> bool:
        return prefix in self._marks

    def __len__(self) -> int:
        return len(self._marks)

    def count(self, prefix: NamePrefix) -> int:
        marks = self._marks.get(prefix)
        return len(marks) if marks else 0

    def mark(self, prefix: NamePrefix, expires_at: float = math.inf) -> None:
        self._marks.setdefault(prefix, deque()).append(expires_at)

    def consume(self, prefix: NamePrefix, t: float = -math.inf) -> bool:
        """Use the oldest reservation still live at ``t``; False when there is none."""
        marks = self._marks.get(prefix)
        if marks is None:
            return False
        while marks and marks[0] <= t:
            marks.popleft()
        used = bool(marks)
        if used:
            marks.popleft()
        if not marks:
            del self._marks[prefix]
        return used

    def expire(self, t: float) -> None:
        """Drop every reservation that lapsed at or before ``t``."""
        for prefix in list(self._marks):
            marks = self._marks[prefix]
            while marks and marks[0] <= t:
                marks.popleft()
            if not marks:
                del self._marks[prefix]


def target_cache_count(lam: float, capacity: int, gen_size: int) -> float:
    """Packets of a prefix worth keeping for one face: ``lam * capacity`` capped at the generation size."""
    share = lam * capacity
    return share if share < gen_size else float(gen_size)


@dataclass
class PopularityState:
    """Everything a router keeps to take popularity-based decisions.

    Attributes:
        downstream: Faces toward the clients.
        capacity: Content Store capacity M.
        recent: Recent Interests per face.
        to_cache: Reservations made on Interest arrival.
        evictions: Prefixes considered for eviction.
    """

    downstream: tuple[Face, ...]
    capacity: int
    recent: RecentInterests
    to_cache: ToCacheTable = field(default_factory=ToCacheTable)
    evictions: EvictionQueue = field(default_factory=EvictionQueue)

    @classmethod
    def create(cls, downstream: Iterable[Face], capacity: int, tau: float) -> PopularityState:
        return cls(downstream=tuple(downstream), capacity=capacity, recent=RecentInterests(tau))

    def target(self, face: Face, prefix: NamePrefix, gen_size: int) -> float:
        return target_cache_count(self.recent.lambda_(face, prefix), self.capacity, gen_size)


def placement_score(
    state: PopularityState, entry: CsEntry | None, prefix: NamePrefix, gen_size: int, arrival_face: Face
) -> float:
    """Average shortfall of stored supply over the downstream faces other than ``arrival_face``.

    Faces without recent Interests for ``prefix`` are left out of the sum. Zero when
    the router has a single downstream face. Caching is worthwhile when positive.
    """
    if len(state.downstream) <= 1:
        return 0.0
    total = 0.0
    for face in state.downstream:
        if face == arrival_face or state.recent.count(face, prefix) == 0:
            continue
        total += state.target(face, prefix, gen_size) - xi(entry, face)
    return total / (len(state.downstream) - 1)


def eviction_allowance(state: PopularityState, entry: CsEntry | None, gen_size: int) -> int:
    """Packets of ``entry`` that can go while every downstream face keeps its target."""
    if entry is None:
        return 0
    if not state.downstream:
        return entry.rank
    slack = min(entry.rank - state.target(face, entry.prefix, gen_size) for face in state.downstream)
    return max(0, math.floor(slack))
