"""Leave Copy Everywhere policies.

Every router on the path stores every innovative packet it forwards. With a
bounded store, room is made by removing coded rows of the prefix whose last
Interest is the oldest; with ``LceNoLimitPolicy`` the store never fills.
Recency is kept only for prefixes that are stored or still awaited.
"""

from collections import OrderedDict

from popnetcod.domain.models.decisions import CsmDecision, ForwardData
from popnetcod.domain.models.packets import CodedPacket, Face, Interest, NamePrefix
from popnetcod.domain.ports import PolicyContext
from popnetcod.domain.services.content_store import ContentStore
from popnetcod.logging import get_logger

from . import BaseCachingPolicy

logger = get_logger(__name__)


class LceLruPolicy(BaseCachingPolicy):
    """Leave Copy Everywhere placement with per-prefix Least Recently Used eviction."""

    def __init__(self, context: PolicyContext):
        super().__init__(context)
        self._recency: OrderedDict[NamePrefix, float] = OrderedDict()
        self._evicts = not self.store.unlimited and self.store.capacity > 0

    def _touch(self, prefix: NamePrefix, t: float) -> None:
        if not self._evicts:
            return
        self._recency[prefix] = t
        self._recency.move_to_end(prefix)

    def process_interest(self, interest: Interest, face: Face, will_aggregate: bool, t: float) -> CsmDecision:
        self._touch(interest.prefix, t)
        return self._serve_or_forward(interest, face)

    def process_data(self, packet: CodedPacket, t: float) -> ForwardData:
        if not self.store.unlimited and self.store.capacity == 0:
            return ForwardData(packet)
        if packet.prefix not in self._recency:
            self._touch(packet.prefix, t)
        if self.store.is_full:
            self._evict_least_recent()
        if not self.store.insert(packet):
            return ForwardData(packet)
        self.context.record_insertion(packet)
        return ForwardData(packet, cached=True)

    def _evict_least_recent(self) -> None:
        """Remove one row of the least recently requested stored prefix.

        Prefixes older than it that hold nothing are forgotten on the way, as is
        the victim once its last row is gone.
        """
        while self._recency:
            prefix = next(iter(self._recency))
            if prefix in self.store:
                self.store.evict(prefix, 1, self.context.rng)
                if prefix not in self.store:
                    del self._recency[prefix]
                return
            del self._recency[prefix]


class LceNoLimitPolicy(LceLruPolicy):
    """Leave Copy Everywhere with a store large enough for the whole library."""

    def _build_store(self, context: PolicyContext) -> ContentStore:
        return ContentStore(context.capacity, unlimited=True)
