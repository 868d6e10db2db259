"""Recorded results of one simulation run."""

import enum
from collections import Counter
from dataclasses import dataclass, field


class InterestOutcome(enum.Enum):
    """What a router did with a received Interest."""

    CS_HIT = "cs_hit"
    AGGREGATED = "aggregated"
    FORWARDED = "forwarded"
    DROPPED = "dropped"


@dataclass
class MetricsLog:
    """Counters and series recorded during a run.

    Attributes:
        hit_samples: Per router, the (time, h) samples of every received Interest.
        outcomes: Per router, count of each InterestOutcome.
        unsolicited: Per router, Data packets received without a PIT entry.
        discarded: Per router, non-innovative Data packets dropped.
        goodput: Per client, goodput estimate after each completed segment (bits/s).
        segments: Per client, completed segments per representation name.
        source_sent: Data packets sent by the source.
        client_received: Data packets received by all clients.
        decoded_segments: Segments decoded and verified against the catalog.
        cache_marks: (router, Interest nonce) for every A-table mark, when instrumented.
        cache_insertions: (router, packet id, cached_up flag of the inserted packet) for every CS
            insertion, when instrumented.
        link_enqueued: Packets handed to links.
        link_delivered: Packets delivered by links.
        end_time: Simulated time at which the run stopped.
    """

    hit_samples: dict[str, list[tuple[float, int]]] = field(default_factory=dict)
    outcomes: dict[str, Counter[InterestOutcome]] = field(default_factory=dict)
    unsolicited: Counter[str] = field(default_factory=Counter)
    discarded: Counter[str] = field(default_factory=Counter)
    goodput: dict[str, list[float]] = field(default_factory=dict)
    segments: dict[str, Counter[str]] = field(default_factory=dict)
    source_sent: int = 0
    client_received: int = 0
    decoded_segments: int = 0
    cache_marks: list[tuple[str, int]] = field(default_factory=list)
    cache_insertions: list[tuple[str, int, bool]] = field(default_factory=list)
    link_enqueued: int = 0
    link_delivered: int = 0
    end_time: float = 0.0

    @property
    def routers(self) -> list[str]:
        return sorted(self.outcomes)

    @property
    def clients(self) -> list[str]:
        return sorted(self.segments)
