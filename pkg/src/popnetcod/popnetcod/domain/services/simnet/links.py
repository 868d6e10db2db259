"""Point-to-point links with per-direction FIFO serialization."""

from dataclasses import dataclass, field

from popnetcod.domain.models.packets import Face


@dataclass(frozen=True)
class LinkEnd:
    node: str
    face: Face


@dataclass
class Link:
    """A bidirectional link; each direction transmits one packet at a time.

    Attributes:
        upstream: End toward the source.
        downstream: End toward the clients.
        bandwidth_bps: Bits per second in each direction.
        delay_s: Propagation delay.
        enqueued: Packets handed to the link.
        delivered: Packets that reached the far end.
    """

    upstream: LinkEnd
    downstream: LinkEnd
    bandwidth_bps: float
    delay_s: float
    enqueued: int = 0
    delivered: int = 0
    _busy_until: dict[str, float] = field(default_factory=dict, repr=False)

    @property
    def in_flight(self) -> int:
        return self.enqueued - self.delivered

    def peer(self, node: str) -> LinkEnd:
        if node == self.upstream.node:
            return self.downstream
        if node == self.downstream.node:
            return self.upstream
        raise KeyError(node)

    def transmit(self, sender: str, size_bytes: int, t: float) -> float:
        """Queue ``size_bytes`` from ``sender`` at ``t``; returns the arrival time at the peer."""
        start = max(t, self._busy_until.get(sender, 0.0))
        finish = start + size_bytes * 8 / self.bandwidth_bps
        self._busy_until[sender] = finish
        self.enqueued += 1
        return finish + self.delay_s

    def mark_delivered(self) -> None:
        self.delivered += 1
