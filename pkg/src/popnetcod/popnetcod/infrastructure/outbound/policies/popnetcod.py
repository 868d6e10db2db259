"""
Popularity-based placement for network-coded caches.

Interest processing:

1. Interests flagged ``caching_down`` were already claimed by a router further
   downstream; they are answered from the store if possible and otherwise
   forwarded untouched, without updating popularity.
2. Other Interests are recorded in the face's recent-Interest list, answered
   from the store when it holds innovative supply for the face, or left to the
   PIT when it expects enough replies.
3. Otherwise the observation window is refreshed and, if the placement score is
   positive, one packet of the prefix is reserved and the Interest is flagged so
   that no upstream router caches the same reply. A reservation lapses with the
   Interest that made it.

Data processing: packets flagged ``cached_up`` or without a reservation pass
through. A reserved packet is inserted (making room from the eviction queue if
the store is full) and a recode of the entry, flagged ``cached_up``, is sent
downstream instead.
"""

from popnetcod.domain.models.decisions import CsmDecision, ForwardData, ForwardInterest, ReplyData
from popnetcod.domain.models.packets import CodedPacket, Face, Interest, NamePrefix
from popnetcod.domain.ports import PolicyContext
from popnetcod.domain.services.popularity import PopularityState, eviction_allowance, placement_score
from popnetcod.domain.services.rlnc import recode
from popnetcod.logging import get_logger

from . import BaseCachingPolicy

logger = get_logger(__name__)


class PopNetCodPolicy(BaseCachingPolicy):
    """Popularity-aware Content Store Manager.

    Args:
        context: Router-provided context.
    """

    def __init__(self, context: PolicyContext):
        super().__init__(context)
        self.state = PopularityState.create(context.downstream, context.capacity, context.observation_window_s)
        self._last_interest: dict[NamePrefix, float] = {}

    def process_interest(self, interest: Interest, face: Face, will_aggregate: bool, t: float) -> CsmDecision:
        prefix = interest.prefix
        self._last_interest[prefix] = t
        entry = self.store.get(prefix)

        if interest.caching_down:
            if entry is not None and entry.xi(face) > 0:
                return ReplyData(entry.serve(face, self.context.rng))
            return ForwardInterest(interest)

        self.state.recent.record_interest(face, prefix, t)
        if entry is not None and entry.xi(face) > 0:
            return ReplyData(entry.serve(face, self.context.rng))
        if will_aggregate:
            return ForwardInterest(interest)

        self.state.recent.expire(self.state.evictions, t)
        self.state.to_cache.expire(t)
        score = placement_score(self.state, entry, prefix, self._gen_size(interest), face)
        if score > 0:
            self.state.to_cache.mark(prefix, t + self.context.interest_lifetime_s)
            self.context.record_mark(interest.nonce)
            return ForwardInterest(interest.with_caching_down())
        return ForwardInterest(interest)

    def process_data(self, packet: CodedPacket, t: float) -> ForwardData:
        if packet.cached_up:
            return ForwardData(packet)
        if not self.state.to_cache.consume(packet.prefix, t):
            return ForwardData(packet)
        if self.store.is_full:
            self._make_room(t)
        if self.store.is_full or not self.store.insert(packet):
            return ForwardData(packet)

        self.context.record_insertion(packet)
        entry = self.store.get(packet.prefix)
        assert entry is not None
        return ForwardData(recode(entry.matrix, self.context.rng).with_cached_up(), cached=True)

    def _make_room(self, t: float) -> None:
        """Evict from the eviction queue until one packet fits, falling back to the stalest entry."""
        self.state.recent.expire(self.state.evictions, t)
        evictions = self.state.evictions
        while self.store.is_full and len(evictions):
            prefix = evictions.pop()
            entry = self.store.get(prefix)
            if entry is None:
                continue
            allowance = eviction_allowance(self.state, entry, entry.matrix.width)
            if allowance > 0:
                removed = self.store.evict(prefix, allowance, self.context.rng)
                logger.debug(f"{self.context.router}: evicted {removed} packets of {prefix}")

        if self.store.is_full and len(self.store):
            stalest = min(self.store.entries, key=lambda p: (self._last_interest.get(p, float("-inf")), p))
            self.store.evict(stalest, 1, self.context.rng)
            logger.debug(f"{self.context.router}: fallback eviction of one packet of {stalest}")
