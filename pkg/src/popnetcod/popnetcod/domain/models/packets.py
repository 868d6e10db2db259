"""
Domain Models for Named, Network-Coded Packets

Interests request *any* innovative coded packet of a name prefix; Data packets
carry a random linear combination of a generation's source packets together
with the coefficient vector that produced it. Sources, routers and clients all
share the one CodedPacket type: a source packet is simply a coded packet whose
coefficient vector is a unit vector.
"""

from dataclasses import dataclass, replace

import numpy as np

Face = int
"""A node-local interface identifier."""


@dataclass(frozen=True, order=True)
class NamePrefix:
    """Content object name plus generation id, the unit of caching.

    Attributes:
        object_name: Video id, segment index and representation (e.g. '/video0/seg3/720p').
        generation_id: Index of the generation inside the object.
    """

    object_name: str
    generation_id: int

    def __str__(self) -> str:
        return f"{self.object_name}/g{self.generation_id}"


@dataclass(frozen=True)
class Interest:
    """Request for any innovative coded packet of ``prefix``.

    Attributes:
        prefix: Requested name prefix.
        nonce: Unique request id.
        caching_down: Set by a router that decided to cache the expected reply.
    """

    prefix: NamePrefix
    nonce: int
    caching_down: bool = False

    def with_caching_down(self) -> "Interest":
        return replace(self, caching_down=True)


@dataclass(frozen=True, eq=False)
class CodedPacket:
    """A network-coded Data packet.

    Attributes:
        prefix: Name prefix of the generation this packet belongs to.
        coeffs: Coding vector over GF(2^8), one byte per source packet.
        payload: Coded payload bytes.
        cached_up: Set by the router that inserted this packet's content in its CS.
        packet_id: Simulator-assigned id, -1 until the packet is first transmitted.
    """

    prefix: NamePrefix
    coeffs: np.ndarray
    payload: np.ndarray
    cached_up: bool = False
    packet_id: int = -1

    @property
    def width(self) -> int:
        return int(self.coeffs.shape[0])

    def with_cached_up(self, cached_up: bool = True) -> "CodedPacket":
        return replace(self, cached_up=cached_up)

    def with_id(self, packet_id: int) -> "CodedPacket":
        return replace(self, packet_id=packet_id)
