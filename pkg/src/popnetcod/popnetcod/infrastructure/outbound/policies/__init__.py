"""Content Store Manager policies.

This module provides the shared base class of every caching policy. Concrete
policies are imported by dotted path from the policy registry in settings.
"""

from popnetcod.domain.models.decisions import CsmDecision, ForwardData, ForwardInterest, ReplyData
from popnetcod.domain.models.packets import CodedPacket, Face, Interest
from popnetcod.domain.ports import CachingPolicyPort, PolicyContext
from popnetcod.domain.services.catalog import generation_of
from popnetcod.domain.services.content_store import ContentStore


class BaseCachingPolicy(CachingPolicyPort):
    """Base class for policies that answer from a Content Store when they can.

    Args:
        context: Router-provided context.
    """

    def __init__(self, context: PolicyContext):
        self.context = context
        self.store = self._build_store(context)

    def _build_store(self, context: PolicyContext) -> ContentStore:
        return ContentStore(context.capacity)

    def _gen_size(self, packet_or_interest: CodedPacket | Interest) -> int:
        return generation_of(self.context.library, packet_or_interest.prefix).size

    def _serve_or_forward(self, interest: Interest, face: Face) -> CsmDecision:
        entry = self.store.get(interest.prefix)
        if entry is not None and entry.xi(face) > 0:
            return ReplyData(entry.serve(face, self.context.rng))
        return ForwardInterest(interest)

    def process_interest(self, interest: Interest, face: Face, will_aggregate: bool, t: float) -> CsmDecision:
        return self._serve_or_forward(interest, face)

    def process_data(self, packet: CodedPacket, t: float) -> ForwardData:
        return ForwardData(packet)
