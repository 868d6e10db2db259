"""Decisions returned by a Content Store Manager to the forwarder."""

from dataclasses import dataclass

from .packets import CodedPacket, Interest


@dataclass(frozen=True)
class ReplyData:
    """Reply to the Interest with this packet generated from the CS."""

    packet: CodedPacket


@dataclass(frozen=True)
class ForwardInterest:
    """Hand the (possibly flagged) Interest back for aggregation or upstream forwarding."""

    interest: Interest


CsmDecision = ReplyData | ForwardInterest


@dataclass(frozen=True)
class ForwardData:
    """Data packet to send downstream.

    Attributes:
        packet: The packet to emit first (the received one, or a recode of the CS entry).
        cached: True when the received packet was inserted into the CS, so that further
            downstream emissions are served from the CS entry.
    """

    packet: CodedPacket
    cached: bool = False
