"""
Simulation Run

Wires a validated topology into routers, sources and clients, then drives them
with the event loop. One ``numpy`` random generator seeded from the run seed
feeds every random choice (client bandwidths, videos and start times,
recoding, FIB choices, evictions), so equal inputs give equal metrics.

A run ends when every client has decoded its whole video, when ``duration``
is reached, or when no event is left.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.domain.models.catalog import ContentLibrary
from popnetcod.domain.models.metrics import MetricsLog
from popnetcod.domain.models.packets import CodedPacket, Face, Interest
from popnetcod.domain.ports import PolicyContext, PolicyFactory
from popnetcod.infrastructure.helpers.generators import Helper
from popnetcod.logging import get_logger
from popnetcod.settings import ClientSettings, RouterSettings, WireSettings

from ..endpoints import SourceServer, StreamingClient
from ..forwarder import Emission, Router
from .engine import EventQueue
from .links import Link
from .topology import Topology

logger = get_logger(__name__)

Packet = Interest | CodedPacket


@dataclass(frozen=True)
class RouterAssignment:
    """Policy and capacity of one router.

    Attributes:
        policy: Name of the policy, for logs.
        factory: Builds the router's Content Store Manager.
        capacity: Content Store capacity in packets.
    """

    policy: str
    factory: PolicyFactory
    capacity: int


class Simulation:
    """One run over one topology with one seed.

    Args:
        topology: Validated topology.
        library: Content library.
        policies: Assignment of every router, by router name.
        seed: Seed of the run's random generator.
        routers: Router parameters.
        clients: Client parameters.
        wire: Packet sizes on the wire.
        instrument: Record every cache reservation and insertion.
    """

    def __init__(
        self,
        topology: Topology,
        library: ContentLibrary,
        policies: Mapping[str, RouterAssignment],
        seed: int,
        *,
        routers: RouterSettings | None = None,
        clients: ClientSettings | None = None,
        wire: WireSettings | None = None,
        instrument: bool = False,
    ):
        self.topology = topology
        self.library = library
        self.seed = seed
        self.router_settings = routers or RouterSettings()
        self.client_settings = clients or ClientSettings()
        self.wire = wire or WireSettings()
        self.instrument = instrument

        self.rng = np.random.default_rng(seed)
        self.metrics = MetricsLog()
        self.events = EventQueue()
        self.next_nonce = Helper.id_sequence()
        self.next_packet_id = Helper.id_sequence()
        self.links: list[Link] = topology.instantiate_links(self.rng)

        self.routers: dict[str, Router] = {}
        self.sources: dict[str, SourceServer] = {}
        self.clients: dict[str, StreamingClient] = {}
        self._timers: dict[str, float] = {}
        self._build_nodes(policies)

    # ---- construction ----

    def _build_nodes(self, policies: Mapping[str, RouterAssignment]) -> None:
        for node in self.topology.nodes.values():
            if node.role == "source":
                self.sources[node.name] = SourceServer(node.name, self.library, self.rng, self.metrics)
            elif node.role == "router":
                assignment = policies.get(node.name)
                if assignment is None:
                    raise ConfigurationException(f"No policy assigned to router '{node.name}'.")
                context = PolicyContext(
                    router=node.name,
                    capacity=assignment.capacity,
                    downstream=node.downstream_faces,
                    library=self.library,
                    rng=self.rng,
                    observation_window_s=self.router_settings.observation_window_s,
                    interest_lifetime_s=self.router_settings.interest_lifetime_s,
                    metrics=self.metrics,
                    instrument=self.instrument,
                )
                self.routers[node.name] = Router(
                    node.name,
                    assignment.factory(context),
                    self.topology.fib_for(node.name),
                    self.rng,
                    self.metrics,
                    self.router_settings.interest_lifetime_s,
                )
            else:
                video = node.video if node.video is not None else int(self.rng.integers(self.library.videos))
                if video >= self.library.videos:
                    raise ConfigurationException(
                        f"Client '{node.name}' streams video {video}, library has {self.library.videos}.",
                        details={"node": node.name, "video": video},
                    )
                client = StreamingClient(
                    node.name,
                    video,
                    node.upstream_faces,
                    self.library,
                    self.client_settings,
                    self.rng,
                    self.metrics,
                    self.next_nonce,
                )
                self.clients[node.name] = client
                if node.start_s is not None:
                    start = node.start_s
                else:
                    start = float(self.rng.uniform(0.0, self.client_settings.start_window_s))
                self.events.schedule(start, "start", lambda c=client: self._start_client(c))

    # ---- packet movement ----

    def _wire_bytes(self, packet: Packet) -> int:
        if isinstance(packet, Interest):
            return self.wire.interest_bytes
        return self.library.payload_bytes + packet.width + self.wire.data_header_bytes

    def transmit(self, sender: str, face: Face, packet: Packet) -> None:
        if isinstance(packet, CodedPacket) and packet.packet_id < 0:
            packet = packet.with_id(self.next_packet_id())
        port = self.topology.nodes[sender].ports[face]
        link = self.links[port.link]
        arrival = link.transmit(sender, self._wire_bytes(packet), self.events.now)
        peer = link.peer(sender)
        self.events.schedule(arrival, "deliver", lambda: self._deliver(link, peer.node, peer.face, packet))

    def _emit(self, sender: str, emissions: list[Emission]) -> None:
        for face, packet in emissions:
            self.transmit(sender, face, packet)

    def _deliver(self, link: Link, node: str, face: Face, packet: Packet) -> None:
        link.mark_delivered()
        t = self.events.now
        if node in self.routers:
            router = self.routers[node]
            if isinstance(packet, Interest):
                self._emit(node, router.on_interest(face, packet, t))
            else:
                self._emit(node, router.on_data(face, packet, t))
        elif node in self.sources:
            if isinstance(packet, Interest):
                self._emit(node, self.sources[node].on_interest(face, packet, t))
        elif isinstance(packet, CodedPacket):
            client = self.clients[node]
            client.on_data(face, packet, t)
            self._pump(client)

    # ---- clients ----

    def _start_client(self, client: StreamingClient) -> None:
        self._emit(client.name, client.start(self.events.now))
        self._arm_timer(client)

    def _pump(self, client: StreamingClient) -> None:
        self._emit(client.name, client.pump(self.events.now))
        self._arm_timer(client)

    def _arm_timer(self, client: StreamingClient) -> None:
        deadline = client.next_timeout()
        if deadline is None or self._timers.get(client.name) == deadline:
            return
        self._timers[client.name] = deadline
        self.events.schedule(deadline, "timer", lambda: self._on_timer(client, deadline))

    def _on_timer(self, client: StreamingClient, deadline: float) -> None:
        if self._timers.get(client.name) == deadline:
            del self._timers[client.name]
        self._pump(client)

    # ---- run ----

    def all_finished(self) -> bool:
        return all(c.finished for c in self.clients.values())

    def run(self, duration: float | None = None) -> MetricsLog:
        logger.debug(f"Run seed={self.seed}: {len(self.routers)} routers, {len(self.clients)} clients")
        self.events.run(until=duration, stop=self.all_finished)
        self.metrics.end_time = self.events.now
        self.metrics.link_enqueued = sum(link.enqueued for link in self.links)
        self.metrics.link_delivered = sum(link.delivered for link in self.links)
        logger.debug(
            f"Run seed={self.seed} ended at {self.events.now:.3f}s after {self.events.processed} events, "
            f"{self.metrics.decoded_segments} segments decoded"
        )
        return self.metrics


def run(
    topology: Topology,
    library: ContentLibrary,
    policies: Mapping[str, RouterAssignment],
    seed: int,
    duration: float | None = None,
    **kwargs,
) -> MetricsLog:
    """Simulate one run and return its metrics.

    Raises:
        ConfigurationException: If a router has no policy assignment.
        DecodeMismatchException: If a client decodes bytes that differ from the source.
    """
    return Simulation(topology, library, policies, seed, **kwargs).run(duration)
