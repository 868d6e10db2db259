"""Domain port for Content Store Managers.

A router hands every received Interest and every innovative Data packet to its
Content Store Manager, which owns the router's Content Store and decides what
to serve, what to reserve and what to cache. Concrete policies live in the
infrastructure layer and are selected per router by configuration.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass

from popnetcod.domain.models.catalog import ContentLibrary
from popnetcod.domain.models.decisions import CsmDecision, ForwardData
from popnetcod.domain.models.metrics import MetricsLog
from popnetcod.domain.models.packets import CodedPacket, Face, Interest
from popnetcod.domain.services.content_store import ContentStore
from popnetcod.domain.services.rlnc import RandomSource


@dataclass
class PolicyContext:
    """What a policy gets from the router it runs in.

    Attributes:
        router: Router name, used in logs and instrumentation.
        capacity: Content Store capacity in packets.
        downstream: Faces toward the clients.
        library: Content library, for generation sizes.
        rng: The run's random source.
        observation_window_s: Popularity observation window.
        interest_lifetime_s: Lifetime of the router's PIT records.
        metrics: Run metrics; marks and insertions are recorded here when ``instrument`` is set.
        instrument: Record every reservation and insertion.
    """

    router: str
    capacity: int
    downstream: tuple[Face, ...]
    library: ContentLibrary
    rng: RandomSource
    observation_window_s: float = 10.0
    interest_lifetime_s: float = 2.0
    metrics: MetricsLog | None = None
    instrument: bool = False

    def record_mark(self, nonce: int) -> None:
        if self.instrument and self.metrics is not None:
            self.metrics.cache_marks.append((self.router, nonce))

    def record_insertion(self, packet: CodedPacket) -> None:
        if self.instrument and self.metrics is not None:
            self.metrics.cache_insertions.append((self.router, packet.packet_id, packet.cached_up))


class CachingPolicyPort(ABC):
    """Port for Content Store Managers.

    Attributes:
        store: The Content Store the policy manages.
    """

    store: ContentStore

    @abstractmethod
    def process_interest(self, interest: Interest, face: Face, will_aggregate: bool, t: float) -> CsmDecision:
        """Decide whether an Interest is answered from the store or travels on.

        Args:
            interest: The received Interest.
            face: Face it arrived on.
            will_aggregate: Whether the PIT expects enough pending replies to cover it.
            t: Current simulated time.

        Returns:
            ReplyData with a packet for ``face``, or ForwardInterest with the
            (possibly flagged) Interest.
        """
        ...

    @abstractmethod
    def process_data(self, packet: CodedPacket, t: float) -> ForwardData:
        """Process an innovative Data packet and return what goes downstream.

        Args:
            packet: Packet that is innovative with respect to the store.
            t: Current simulated time.

        Returns:
            ForwardData holding the packet to send, flagged ``cached`` when the
            store now holds it.
        """
        ...


PolicyFactory = Callable[[PolicyContext], CachingPolicyPort]
