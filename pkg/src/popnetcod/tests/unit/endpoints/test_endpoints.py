import itertools

import numpy as np

from popnetcod.domain.exceptions import DecodeMismatchException, UnknownPrefixException
from popnetcod.domain.models.metrics import MetricsLog
from popnetcod.domain.models.packets import CodedPacket, Interest, NamePrefix
from popnetcod.domain.services.catalog import build_library
from popnetcod.domain.services.endpoints import SourceServer, StreamingClient, choose_representation
from popnetcod.domain.services.rlnc import CodingMatrix, recode, source_matrix
from popnetcod.settings import ClientSettings, LibrarySettings
from tests.common.base_test import SimulatorBaseTestCase
from tests.common.builders import PREFIX, tiny_library


class TestChooseRepresentation(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.reps = build_library(LibrarySettings(videos=1, segments=1)).representations

    def choose(self, goodput_bps, buffered=3):
        return choose_representation(self.reps, goodput_bps, buffered, safety_factor=0.9, low_buffer_threshold=2).name

    def test_highest_fitting_representation(self):
        self.assertEqual(self.choose(6.5e6), "1080p")
        self.assertEqual(self.choose(3.5e6), "720p")
        self.assertEqual(self.choose(2.0e6), "480p")

    def test_low_buffer_forces_lowest(self):
        self.assertEqual(self.choose(20e6, buffered=1), "480p")

    def test_fallbacks_to_lowest(self):
        self.assertEqual(self.choose(None), "480p")
        self.assertEqual(self.choose(0.5e6), "480p")


class TestSourceServer(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.library = tiny_library()
        self.metrics = MetricsLog()
        self.source = SourceServer("source", self.library, self.rng, self.metrics)

    def test_answers_with_generation_width(self):
        [(face, packet)] = self.source.on_interest(3, Interest(PREFIX, 1), 0.0)
        self.assertEqual(face, 3)
        self.assertEqual(packet.width, 4)
        self.assertEqual(packet.prefix, PREFIX)
        self.assertEqual(self.metrics.source_sent, 1)

    def test_unknown_prefix(self):
        with self.assertRaises(UnknownPrefixException):
            self.source.on_interest(0, Interest(NamePrefix("/video5/seg0/low", 0), 1), 0.0)

    def test_generation_size_packets_usually_decode(self):
        full = 0
        trials = 300
        for _ in range(trials):
            receiver = CodingMatrix(4, self.library.carried_payload_bytes)
            for _ in range(4):
                [(face, packet)] = self.source.on_interest(0, Interest(PREFIX, 1), 0.0)
                receiver.append(packet.coeffs, packet.payload)
            full += receiver.is_full_rank
        # 1 - P(rank < 4) is about 0.996 over GF(2^8)
        self.assertGreaterEqual(full / trials, 0.98)


class ClientTestCase(SimulatorBaseTestCase):
    def client(self, library, window: int = 8, faces=(0, 1), timeout: float = 2.0) -> StreamingClient:
        self.library = library
        self.metrics = MetricsLog()
        settings = ClientSettings(window_per_face=window, retransmit_timeout_s=timeout)
        return StreamingClient(
            "client0", 0, faces, library, settings, self.rng, self.metrics, itertools.count().__next__
        )

    def feed_generation(self, client: StreamingClient, t: float, face: int = 0):
        spec = client.current
        source = SourceServer("source", self.library, self.rng, MetricsLog())
        done = None
        while client.current is spec:
            done = client.on_data(face, recode(source.matrix(spec.prefix), self.rng), t)
        return done


class TestClientPump(ClientTestCase):
    def test_window_fills_every_face(self):
        client = self.client(tiny_library(packets=40, generations=2))
        emissions = client.start(0.0)
        self.assertEqual(len(emissions), 16)
        self.assertEqual(client.inflight(0), 8)
        self.assertEqual(client.inflight(1), 8)
        self.assertEqual([face for face, _ in emissions[:4]], [0, 1, 0, 1])
        self.assertEqual(len({i.nonce for _, i in emissions}), 16)
        self.assertEqual(client.pump(0.5), [])

    def test_demand_capped_by_missing_rank(self):
        client = self.client(tiny_library(), window=16)
        self.assertEqual(len(client.start(0.0)), 4)
        source = SourceServer("source", self.library, self.rng, MetricsLog())
        client.on_data(0, recode(source.matrix(PREFIX), self.rng), 0.1)
        self.assertEqual(client.rank, 1)
        self.assertEqual(client.inflight(), 3)
        self.assertEqual(client.pump(0.2), [])

    def test_timeouts_are_replaced(self):
        client = self.client(tiny_library(packets=40, generations=2))
        client.start(0.0)
        self.assertEqual(client.next_timeout(), 2.0)
        self.assertEqual(client.pump(1.9), [])
        replacements = client.pump(2.0)
        self.assertEqual(len(replacements), 16)
        self.assertEqual(client.next_timeout(), 4.0)

    def test_pump_before_start_is_silent(self):
        client = self.client(tiny_library())
        self.assertEqual(client.pump(0.0), [])


class TestClientDecode(ClientTestCase):
    def test_segment_completes_after_last_generation(self):
        client = self.client(tiny_library())
        client.start(0.0)
        self.assertIsNone(self.feed_generation(client, 0.5))
        self.assertEqual(client.current.prefix.generation_id, 1)
        self.assertEqual(client.inflight(), 0)
        done = self.feed_generation(client, 1.0)
        self.assertIsNotNone(done)
        self.assertEqual((done.video, done.segment, done.representation), (0, 0, "low"))
        self.assertEqual((done.requested_at, done.completed_at), (0.0, 1.0))
        self.assertTrue(client.finished)
        self.assertEqual(self.metrics.decoded_segments, 1)
        self.assertEqual(self.metrics.segments["client0"]["low"], 1)
        # 8 packets * 1000 bytes * 8 bits in one second
        self.assertAlmostEqual(self.metrics.goodput["client0"][0], 64_000.0)

    def test_goodput_is_an_ewma_of_segment_samples(self):
        client = self.client(tiny_library(segments=2))
        client.start(0.0)
        self.feed_generation(client, 0.5)
        self.feed_generation(client, 1.0)
        self.feed_generation(client, 1.5)
        self.feed_generation(client, 3.0)
        # samples 64 kb/s then 32 kb/s with alpha 0.5
        self.assertEqual(len(self.metrics.goodput["client0"]), 2)
        self.assertAlmostEqual(self.metrics.goodput["client0"][1], 48_000.0)
        self.assertTrue(client.finished)

    def test_duplicate_is_ignored(self):
        client = self.client(tiny_library())
        client.start(0.0)
        source = SourceServer("source", self.library, self.rng, MetricsLog())
        packet = recode(source.matrix(PREFIX), self.rng)
        client.on_data(0, packet, 0.1)
        client.on_data(1, CodedPacket(PREFIX, packet.coeffs.copy(), packet.payload.copy()), 0.2)
        self.assertEqual(client.rank, 1)
        self.assertEqual(self.metrics.client_received, 2)

    def test_other_prefix_is_ignored(self):
        client = self.client(tiny_library())
        client.start(0.0)
        source = SourceServer("source", self.library, self.rng, MetricsLog())
        other = NamePrefix(PREFIX.object_name, 1)
        self.assertIsNone(client.on_data(0, recode(source.matrix(other), self.rng), 0.1))
        self.assertEqual(client.rank, 0)

    def test_wrong_bytes_fail_decoding(self):
        client = self.client(tiny_library())
        client.start(0.0)
        forged = source_matrix(np.zeros((4, self.library.carried_payload_bytes), dtype=np.uint8), PREFIX)
        with self.assertRaises(DecodeMismatchException):
            while True:
                client.on_data(0, recode(forged, self.rng), 0.1)

    def test_playback_drains_buffer(self):
        client = self.client(tiny_library(segments=3))
        client.start(0.0)
        self.feed_generation(client, 0.5)
        self.feed_generation(client, 1.0)
        self.assertEqual(client.buffered(1.0), 1)
        self.assertEqual(client.played(1.5), 0)
        self.assertEqual(client.played(2.0), 1)
        self.assertEqual(client.buffered(2.0), 0)
