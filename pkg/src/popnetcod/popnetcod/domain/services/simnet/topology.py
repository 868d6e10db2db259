"""
Network Topology Construction and Validation

A topology is a set of named nodes (sources, routers, clients) joined by
links with a fixed direction: the upstream end is closer to the content
source. Faces are numbered per node in link order. Routers forward Interests
on upstream faces only, so every router and client must reach a source by
walking upstream links; anything else is rejected before a run starts.

The ``tiered`` layout generates the usual source / core / edge / client
hierarchy from counts, with every edge router attached to ``edge_uplinks``
core routers and every client attached to ``client_homing`` edge routers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.domain.models.packets import Face
from popnetcod.logging import get_logger
from popnetcod.settings import LinkSettings, LinkSpec, NodeSpec, RouteSpec, TopologySettings

from ..forwarder import Fib
from ..rlnc import RandomSource
from .links import Link, LinkEnd

logger = get_logger(__name__)


@dataclass(frozen=True)
class Port:
    """One face of a node.

    Attributes:
        face: Face number on the node.
        neighbor: Node at the other end.
        link: Index of the link in the topology.
        upstream: True when the face leads toward the source.
    """

    face: Face
    neighbor: str
    link: int
    upstream: bool


@dataclass
class NodeInfo:
    """A node with its faces.

    Attributes:
        name: Node name.
        role: 'source', 'router' or 'client'.
        policy: Policy override for a router.
        capacity: Capacity override for a router.
        video: Video override for a client.
        start_s: Start time override for a client.
        ports: Faces in link order.
    """

    name: str
    role: str
    policy: str | None = None
    capacity: int | None = None
    video: int | None = None
    start_s: float | None = None
    ports: list[Port] = field(default_factory=list)

    @property
    def upstream_faces(self) -> tuple[Face, ...]:
        return tuple(p.face for p in self.ports if p.upstream)

    @property
    def downstream_faces(self) -> tuple[Face, ...]:
        return tuple(p.face for p in self.ports if not p.upstream)

    def face_to(self, neighbor: str) -> Face:
        for port in self.ports:
            if port.neighbor == neighbor:
                return port.face
        raise KeyError(neighbor)


@dataclass(frozen=True)
class LinkDef:
    """A validated link; ``bandwidth_bps`` None means a client access draw."""

    upstream: str
    downstream: str
    bandwidth_bps: float | None
    delay_s: float


@dataclass
class Topology:
    """Validated network description.

    Attributes:
        nodes: Nodes by name, in declaration order.
        links: Links, indexed as in every Port.
        routes: FIB overrides.
        link_settings: Defaults for client access bandwidth draws.
    """

    nodes: dict[str, NodeInfo]
    links: list[LinkDef]
    routes: list[RouteSpec]
    link_settings: LinkSettings

    def by_role(self, role: str) -> list[NodeInfo]:
        return [node for node in self.nodes.values() if node.role == role]

    @property
    def sources(self) -> list[NodeInfo]:
        return self.by_role("source")

    @property
    def routers(self) -> list[NodeInfo]:
        return self.by_role("router")

    @property
    def clients(self) -> list[NodeInfo]:
        return self.by_role("client")

    def fib_for(self, name: str) -> Fib:
        """FIB of a router: every upstream face for all names, overridden by configured routes."""
        node = self.nodes[name]
        fib = Fib()
        if node.upstream_faces:
            fib.add("", list(node.upstream_faces))
        for route in self.routes:
            if route.node == name:
                fib.add(route.pattern, [node.face_to(hop) for hop in route.next_hops], route.weights)
        return fib

    def instantiate_links(self, rng: RandomSource) -> list[Link]:
        """Create runtime links, drawing client access bandwidths from ``rng`` in link order."""
        cfg = self.link_settings
        links = []
        for i, ld in enumerate(self.links):
            bandwidth = ld.bandwidth_bps
            if bandwidth is None:
                bandwidth = draw_client_bandwidth(rng, cfg)
            up = LinkEnd(ld.upstream, self._face_of(ld.upstream, i))
            down = LinkEnd(ld.downstream, self._face_of(ld.downstream, i))
            links.append(Link(up, down, bandwidth, ld.delay_s))
        return links

    def _face_of(self, name: str, link: int) -> Face:
        for port in self.nodes[name].ports:
            if port.link == link:
                return port.face
        raise KeyError((name, link))


def draw_client_bandwidth(rng: RandomSource, cfg: LinkSettings) -> float:
    """Normal draw truncated below at ``client_bandwidth_min_bps`` by resampling."""
    while True:
        value = float(rng.normal(cfg.client_bandwidth_mean_bps, cfg.client_bandwidth_std_bps))
        if value >= cfg.client_bandwidth_min_bps:
            return value


def tiered_layout(cfg: TopologySettings) -> tuple[list[NodeSpec], list[LinkSpec]]:
    """Generate nodes and links of the source / core / edge / client hierarchy."""
    cores = [f"core{i}" for i in range(cfg.core_routers)]
    edges = [f"edge{i}" for i in range(cfg.edge_routers)]
    clients = [f"client{i}" for i in range(cfg.clients)]

    nodes = [NodeSpec(name="source", role="source")]
    nodes += [NodeSpec(name=n, role="router") for n in cores + edges]
    nodes += [NodeSpec(name=n, role="client") for n in clients]

    links = [LinkSpec(upstream="source", downstream=core) for core in cores]
    uplinks = min(cfg.edge_uplinks, len(cores))
    for e, edge in enumerate(edges):
        links += [LinkSpec(upstream=cores[(e + j) % len(cores)], downstream=edge) for j in range(uplinks)]
    homing = min(cfg.client_homing, len(edges))
    for c, client in enumerate(clients):
        links += [LinkSpec(upstream=edges[(c + j) % len(edges)], downstream=client) for j in range(homing)]
    return nodes, links


def build_topology(cfg: TopologySettings, link_cfg: LinkSettings) -> Topology:
    """Validate a topology description and number the faces of every node.

    Raises:
        ConfigurationException: On duplicate or unknown node names, links in the wrong
            direction, bad routes, or nodes that cannot reach a source.
    """
    if cfg.layout == "tiered":
        node_specs, link_specs = tiered_layout(cfg)
    else:
        node_specs, link_specs = cfg.nodes, cfg.links

    nodes: dict[str, NodeInfo] = {}
    for spec in node_specs:
        if spec.name in nodes:
            raise ConfigurationException(f"Duplicate node '{spec.name}'.", details={"node": spec.name})
        nodes[spec.name] = NodeInfo(spec.name, spec.role, spec.policy, spec.capacity, spec.video, spec.start_s)
    if not any(n.role == "source" for n in nodes.values()):
        raise ConfigurationException("Topology has no source.")
    if not any(n.role == "client" for n in nodes.values()):
        raise ConfigurationException("Topology has no client.")

    links: list[LinkDef] = []
    for i, spec in enumerate(link_specs):
        for end in (spec.upstream, spec.downstream):
            if end not in nodes:
                raise ConfigurationException(
                    f"Link {spec.upstream} -> {spec.downstream} references unknown node '{end}'.",
                    details={"link": i, "node": end},
                )
        up, down = nodes[spec.upstream], nodes[spec.downstream]
        if up.name == down.name or up.role == "client" or down.role == "source":
            raise ConfigurationException(
                f"Link {up.name} -> {down.name} has an invalid direction.", details={"link": i}
            )
        client_access = "client" in (up.role, down.role)
        bandwidth = spec.bandwidth_bps
        if bandwidth is None and not client_access:
            bandwidth = link_cfg.core_bandwidth_bps
        delay = spec.delay_s if spec.delay_s is not None else link_cfg.propagation_delay_s
        links.append(LinkDef(up.name, down.name, bandwidth, delay))
        up.ports.append(Port(len(up.ports), down.name, i, upstream=False))
        down.ports.append(Port(len(down.ports), up.name, i, upstream=True))

    reachable = _validate_reachability(nodes)
    _validate_routes(nodes, cfg.routes, reachable)

    topology = Topology(nodes=nodes, links=links, routes=list(cfg.routes), link_settings=link_cfg)
    logger.info(
        f"Topology: {len(topology.sources)} sources, {len(topology.routers)} routers, "
        f"{len(topology.clients)} clients, {len(links)} links"
    )
    return topology


def _validate_routes(nodes: dict[str, NodeInfo], routes: list[RouteSpec], reachable: set[str]) -> None:
    for route in routes:
        node = nodes.get(route.node)
        if node is None or node.role != "router":
            raise ConfigurationException(f"Route for unknown router '{route.node}'.", details={"node": route.node})
        upstream = {p.neighbor for p in node.ports if p.upstream}
        bad = [hop for hop in route.next_hops if hop not in upstream or hop not in reachable]
        if not route.next_hops or bad:
            raise ConfigurationException(
                f"Route '{route.pattern}' of '{route.node}' must use upstream neighbors, got {route.next_hops}.",
                details={"node": route.node, "next_hops": route.next_hops},
            )
        if route.weights is not None and (
            len(route.weights) != len(route.next_hops) or any(w <= 0 for w in route.weights)
        ):
            raise ConfigurationException(
                f"Route '{route.pattern}' of '{route.node}' needs one positive weight per next hop.",
                details={"node": route.node},
            )


def _validate_reachability(nodes: dict[str, NodeInfo]) -> set[str]:
    """Every router and client must reach a source through upstream links."""
    reaches: set[str] = {n.name for n in nodes.values() if n.role == "source"}
    frontier = deque(reaches)
    while frontier:
        name = frontier.popleft()
        for port in nodes[name].ports:
            if not port.upstream and port.neighbor not in reaches:
                reaches.add(port.neighbor)
                frontier.append(port.neighbor)
    stranded = sorted(n.name for n in nodes.values() if n.name not in reaches)
    if stranded:
        raise ConfigurationException(f"Nodes without a route to a source: {stranded}.", details={"nodes": stranded})
    return reaches
