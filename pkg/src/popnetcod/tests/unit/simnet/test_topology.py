from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.domain.models.packets import NamePrefix
from popnetcod.domain.services.simnet.topology import build_topology, draw_client_bandwidth
from popnetcod.settings import LinkSettings, LinkSpec, NodeSpec, RouteSpec, TopologySettings
from tests.common.base_test import SimulatorBaseTestCase
from tests.common.builders import chain_topology


def explicit(nodes, links, routes=()) -> TopologySettings:
    return TopologySettings(
        layout="explicit",
        nodes=[NodeSpec(name=n, role=r) for n, r in nodes],
        links=[LinkSpec(upstream=u, downstream=d) for u, d in links],
        routes=list(routes),
    )


DIAMOND_NODES = [("source", "source"), ("a", "router"), ("b", "router"), ("edge", "router"), ("client0", "client")]
DIAMOND_LINKS = [("source", "a"), ("source", "b"), ("a", "edge"), ("b", "edge"), ("edge", "client0")]


class TestTieredLayout(SimulatorBaseTestCase):
    def test_default_desk_scale(self):
        topology = build_topology(TopologySettings(), LinkSettings())
        self.assertEqual(len(topology.sources), 1)
        self.assertEqual(len(topology.routers), 6)
        self.assertEqual(len(topology.clients), 12)
        self.assertEqual(len(topology.links), 2 + 4 * 2 + 12 * 2)
        for client in topology.clients:
            self.assertEqual(len(client.upstream_faces), 2)
            self.assertEqual(client.downstream_faces, ())

    def test_full_scale_counts(self):
        cfg = TopologySettings(core_routers=10, edge_routers=35, clients=123)
        topology = build_topology(cfg, LinkSettings())
        self.assertEqual(len(topology.routers), 45)
        self.assertEqual(len(topology.clients), 123)

    def test_client_access_bandwidths_are_drawn(self):
        topology = build_topology(TopologySettings(clients=3, edge_routers=2), LinkSettings())
        links = topology.instantiate_links(self.rng)
        for link in links:
            if link.downstream.node.startswith("client"):
                self.assertGreaterEqual(link.bandwidth_bps, 0.5e6)
            else:
                self.assertEqual(link.bandwidth_bps, 20e6)
            self.assertEqual(link.delay_s, 0.005)

    def test_draws_are_truncated(self):
        cfg = LinkSettings(client_bandwidth_mean_bps=0.6e6, client_bandwidth_std_bps=1.5e6)
        draws = [draw_client_bandwidth(self.rng, cfg) for _ in range(500)]
        self.assertGreaterEqual(min(draws), cfg.client_bandwidth_min_bps)


class TestExplicitTopology(SimulatorBaseTestCase):
    def test_faces_and_default_fib(self):
        topology = build_topology(explicit(DIAMOND_NODES, DIAMOND_LINKS), LinkSettings())
        edge = topology.nodes["edge"]
        self.assertEqual(edge.upstream_faces, (0, 1))
        self.assertEqual(edge.downstream_faces, (2,))
        self.assertEqual(edge.face_to("b"), 1)
        fib = topology.fib_for("edge")
        self.assertEqual(fib.match(NamePrefix("/video0/seg0/480p", 0)).faces, (0, 1))

    def test_route_override(self):
        routes = [RouteSpec(node="edge", pattern="/video1", next_hops=["b"])]
        topology = build_topology(explicit(DIAMOND_NODES, DIAMOND_LINKS, routes), LinkSettings())
        fib = topology.fib_for("edge")
        self.assertEqual(fib.match(NamePrefix("/video1/seg0/480p", 0)).faces, (1,))
        self.assertEqual(fib.match(NamePrefix("/video0/seg0/480p", 0)).faces, (0, 1))

    def test_chain_builder(self):
        topology = build_topology(chain_topology(3), LinkSettings())
        self.assertEqual([n.name for n in topology.routers], ["r0", "r1", "r2"])
        self.assertEqual(topology.nodes["r1"].upstream_faces, (0,))
        self.assertEqual(topology.nodes["r1"].downstream_faces, (1,))


class TestValidation(SimulatorBaseTestCase):
    def assertRejected(self, cfg: TopologySettings):
        with self.assertRaises(ConfigurationException):
            build_topology(cfg, LinkSettings())

    def test_duplicate_node(self):
        self.assertRejected(explicit(DIAMOND_NODES + [("a", "router")], DIAMOND_LINKS))

    def test_missing_roles(self):
        self.assertRejected(explicit([("r0", "router"), ("client0", "client")], [("r0", "client0")]))
        self.assertRejected(explicit([("source", "source"), ("r0", "router")], [("source", "r0")]))

    def test_dangling_link(self):
        self.assertRejected(explicit(DIAMOND_NODES, DIAMOND_LINKS + [("edge", "ghost")]))

    def test_wrong_direction(self):
        self.assertRejected(explicit(DIAMOND_NODES, DIAMOND_LINKS + [("client0", "a")]))
        self.assertRejected(explicit(DIAMOND_NODES, DIAMOND_LINKS + [("a", "source")]))
        self.assertRejected(explicit(DIAMOND_NODES, DIAMOND_LINKS + [("a", "a")]))

    def test_stranded_router(self):
        nodes = DIAMOND_NODES + [("island", "router"), ("client1", "client")]
        self.assertRejected(explicit(nodes, DIAMOND_LINKS + [("island", "client1")]))

    def test_bad_routes(self):
        for route in (
            RouteSpec(node="edge", next_hops=["client0"]),
            RouteSpec(node="edge", next_hops=[]),
            RouteSpec(node="edge", next_hops=["a", "b"], weights=[1.0]),
            RouteSpec(node="client0", next_hops=["edge"]),
            RouteSpec(node="ghost", next_hops=["a"]),
        ):
            with self.subTest(route=route):
                self.assertRejected(explicit(DIAMOND_NODES, DIAMOND_LINKS, [route]))
