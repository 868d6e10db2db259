"""
NDN Forwarder with a Coded Content Store

A router receives Interests from downstream faces and Data packets from
upstream faces. Interests are answered by the Content Store Manager, aggregated
in the PIT when the replies already expected upstream will cover them, or
forwarded on a FIB-chosen upstream face. A Data packet satisfies at most one
pending Interest per face; when the packet was cached, further pending
Interests are served from the store as long as it holds innovative supply.

PIT bookkeeping keeps one expiry time per pending Interest and per Interest
forwarded upstream; expired records are purged lazily whenever the entry is
touched.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from popnetcod.domain.exceptions import NoRouteException
from popnetcod.domain.models.decisions import ForwardData, ReplyData
from popnetcod.domain.models.metrics import InterestOutcome, MetricsLog
from popnetcod.domain.models.packets import CodedPacket, Face, Interest, NamePrefix
from popnetcod.domain.ports import CachingPolicyPort

from .content_store import ContentStore
from .rlnc import RandomSource
from .simnet.metrics import record_interest_outcome

Emission = tuple[Face, Interest | CodedPacket]


@dataclass
class PitEntry:
    """Pending state of one prefix.

    Attributes:
        prefix: The prefix.
        pending: Per downstream face, expiry times of unsatisfied Interests.
        outstanding: Expiry times of Interests forwarded upstream and not yet answered.
    """

    prefix: NamePrefix
    pending: dict[Face, deque[float]] = field(default_factory=dict)
    outstanding: deque[float] = field(default_factory=deque)

    def purge(self, t: float) -> None:
        for face in list(self.pending):
            expiries = self.pending[face]
            while expiries and expiries[0] <= t:
                expiries.popleft()
            if not expiries:
                del self.pending[face]
        while self.outstanding and self.outstanding[0] <= t:
            self.outstanding.popleft()

    def pending_count(self, face: Face) -> int:
        expiries = self.pending.get(face)
        return len(expiries) if expiries else 0

    def add_pending(self, face: Face, expiry: float) -> None:
        self.pending.setdefault(face, deque()).append(expiry)

    def satisfy(self, face: Face, n: int) -> None:
        expiries = self.pending[face]
        for _ in range(min(n, len(expiries))):
            expiries.popleft()
        if not expiries:
            del self.pending[face]

    @property
    def is_empty(self) -> bool:
        return not self.pending and not self.outstanding


@dataclass(frozen=True)
class FibEntry:
    """Upstream faces for names starting with ``pattern``."""

    pattern: str
    faces: tuple[Face, ...]
    weights: tuple[float, ...]


class Fib:
    """Forwarding table with longest-pattern match on object names."""

    def __init__(self) -> None:
        self._entries: dict[str, FibEntry] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, pattern: str, faces: list[Face], weights: list[float] | None = None) -> None:
        if not faces:
            raise ValueError(f"FIB entry '{pattern}' needs at least one face")
        weights = weights if weights is not None else [1.0] * len(faces)
        if len(weights) != len(faces) or any(w <= 0 for w in weights):
            raise ValueError(f"FIB entry '{pattern}' needs one positive weight per face")
        self._entries[pattern] = FibEntry(pattern, tuple(faces), tuple(float(w) for w in weights))

    def match(self, prefix: NamePrefix) -> FibEntry | None:
        best: FibEntry | None = None
        for pattern, entry in self._entries.items():
            if prefix.object_name.startswith(pattern) and (best is None or len(pattern) > len(best.pattern)):
                best = entry
        return best


def fib_next_face(fib: Fib, prefix: NamePrefix, rng: RandomSource, node: str = "") -> Face:
    """Weighted random choice among the upstream faces routing ``prefix``.

    Raises:
        NoRouteException: If no FIB entry matches.
    """
    entry = fib.match(prefix)
    if entry is None:
        raise NoRouteException(node, prefix)
    if len(entry.faces) == 1:
        return entry.faces[0]
    total = sum(entry.weights)
    idx = rng.choice(len(entry.faces), p=[w / total for w in entry.weights])
    return entry.faces[int(idx)]


class Router:
    """An NDN router driven by simulator events.

    Args:
        name: Router name.
        policy: The router's Content Store Manager.
        fib: Forwarding table.
        rng: The run's random source.
        metrics: Run metrics.
        interest_lifetime_s: Lifetime of PIT records.
    """

    def __init__(
        self,
        name: str,
        policy: CachingPolicyPort,
        fib: Fib,
        rng: RandomSource,
        metrics: MetricsLog,
        interest_lifetime_s: float = 2.0,
    ):
        self.name = name
        self.policy = policy
        self.fib = fib
        self.rng = rng
        self.metrics = metrics
        self.interest_lifetime_s = interest_lifetime_s
        self.pit: dict[NamePrefix, PitEntry] = {}
        metrics.outcomes.setdefault(name, Counter())

    @property
    def store(self) -> ContentStore:
        return self.policy.store

    def _pit_entry(self, prefix: NamePrefix, t: float) -> PitEntry | None:
        entry = self.pit.get(prefix)
        if entry is not None:
            entry.purge(t)
            if entry.is_empty:
                del self.pit[prefix]
                return None
        return entry

    def will_aggregate(self, interest: Interest, face: Face, t: float) -> bool:
        """Whether replies already expected (plus store supply for ``face``) cover one more Interest."""
        entry = self._pit_entry(interest.prefix, t)
        outstanding = len(entry.outstanding) if entry else 0
        pending = entry.pending_count(face) if entry else 0
        return outstanding + self.store.xi(interest.prefix, face) >= pending + 1

    def on_interest(self, face: Face, interest: Interest, t: float) -> list[Emission]:
        prefix = interest.prefix
        aggregate = self.will_aggregate(interest, face, t)
        decision = self.policy.process_interest(interest, face, aggregate, t)

        if isinstance(decision, ReplyData):
            record_interest_outcome(self.metrics, self.name, InterestOutcome.CS_HIT, t)
            return [(face, decision.packet)]

        expiry = t + self.interest_lifetime_s
        if aggregate:
            self.pit.setdefault(prefix, PitEntry(prefix)).add_pending(face, expiry)
            record_interest_outcome(self.metrics, self.name, InterestOutcome.AGGREGATED, t)
            return []

        try:
            upstream = fib_next_face(self.fib, prefix, self.rng, self.name)
        except NoRouteException:
            record_interest_outcome(self.metrics, self.name, InterestOutcome.DROPPED, t)
            return []
        entry = self.pit.setdefault(prefix, PitEntry(prefix))
        entry.add_pending(face, expiry)
        entry.outstanding.append(expiry)
        record_interest_outcome(self.metrics, self.name, InterestOutcome.FORWARDED, t)
        return [(upstream, decision.interest)]

    def on_data(self, face: Face, packet: CodedPacket, t: float) -> list[Emission]:
        prefix = packet.prefix
        entry = self._pit_entry(prefix, t)
        if entry is None:
            self.metrics.unsolicited[self.name] += 1
            return []
        if entry.outstanding:
            entry.outstanding.popleft()

        if self.store.is_innovative(packet):
            forward = self.policy.process_data(packet, t)
        elif entry.pending:
            forward = ForwardData(packet)
        else:
            self.metrics.discarded[self.name] += 1
            forward = None

        emissions = self._emit(entry, forward) if forward is not None else []
        if entry.is_empty:
            del self.pit[prefix]
        return emissions

    def _emit(self, entry: PitEntry, forward: ForwardData) -> list[Emission]:
        emissions: list[Emission] = []
        cached = self.store.get(entry.prefix) if forward.cached else None
        for i, face in enumerate(list(entry.pending)):
            if cached is None:
                emissions.append((face, forward.packet))
                entry.satisfy(face, 1)
                continue
            sent = 0
            if i == 0:
                emissions.append((face, forward.packet))
                cached.note_sent(face)
                sent = 1
            while sent < entry.pending_count(face) and cached.xi(face) > 0:
                served = cached.serve(face, self.rng).with_cached_up(forward.packet.cached_up)
                emissions.append((face, served))
                sent += 1
            if sent:
                entry.satisfy(face, sent)
        return emissions
