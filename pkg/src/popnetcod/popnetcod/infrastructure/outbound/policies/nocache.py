"""Policy for routers without a Content Store."""

from popnetcod.domain.models.decisions import CsmDecision, ForwardInterest
from popnetcod.domain.models.packets import Face, Interest
from popnetcod.domain.ports import PolicyContext
from popnetcod.domain.services.content_store import ContentStore

from . import BaseCachingPolicy


class NoCachePolicy(BaseCachingPolicy):
    """Forwards every Interest and passes every Data packet through."""

    def _build_store(self, context: PolicyContext) -> ContentStore:
        return ContentStore(0)

    def process_interest(self, interest: Interest, face: Face, will_aggregate: bool, t: float) -> CsmDecision:
        return ForwardInterest(interest)
