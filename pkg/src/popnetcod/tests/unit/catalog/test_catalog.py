import numpy as np
from pydantic import ValidationError

from popnetcod.domain.exceptions import ConfigurationException, UnknownPrefixException
from popnetcod.domain.models.packets import NamePrefix
from popnetcod.domain.services.catalog import build_library, generation_of, generation_sizes, source_payloads
from popnetcod.settings import LibrarySettings, RepresentationSettings
from tests.common.base_test import SimulatorBaseTestCase


def one_rep_settings(packets: int, generations: int) -> LibrarySettings:
    return LibrarySettings(
        videos=1,
        segments=1,
        representations=[RepresentationSettings(name="480p", bitrate_kbps=1750, packets=packets, generations=generations)],
    )


class TestGenerationSizes(SimulatorBaseTestCase):
    def test_even_split(self):
        self.assertEqual(generation_sizes(10, 2), [5, 5])

    def test_last_generation_absorbs_remainder(self):
        self.assertEqual(generation_sizes(359, 4), [90, 90, 90, 89])
        self.assertEqual(generation_sizes(615, 7), [88] * 6 + [87])
        self.assertEqual(generation_sizes(1188, 12), [99] * 12)

    def test_zero_counts_rejected(self):
        for packets, generations in ((0, 1), (10, 0)):
            with self.subTest(packets=packets, generations=generations):
                with self.assertRaises(ConfigurationException):
                    generation_sizes(packets, generations)

    def test_empty_last_generation_rejected(self):
        # ceil(4 / 3) = 2 leaves nothing for the third generation
        with self.assertRaises(ConfigurationException):
            generation_sizes(4, 3)


class TestBuildLibrary(SimulatorBaseTestCase):
    def test_full_scale_library_total(self):
        library = build_library(LibrarySettings(videos=5, segments=50))
        self.assertEqual(library.total_packets, 540_500)
        self.assertEqual(len(library.generations), 5 * 50 * (4 + 7 + 12))

    def test_total_matches_configuration_sum(self):
        cfg = LibrarySettings(videos=2, segments=3)
        library = build_library(cfg)
        expected = cfg.videos * cfg.segments * sum(r.packets for r in cfg.representations)
        self.assertEqual(library.total_packets, expected)

    def test_representations_sorted_by_bitrate(self):
        cfg = LibrarySettings(
            representations=[
                RepresentationSettings(name="hi", bitrate_kbps=5000, packets=10, generations=2),
                RepresentationSettings(name="lo", bitrate_kbps=1000, packets=10, generations=2),
            ]
        )
        library = build_library(cfg)
        self.assertEqual([r.name for r in library.representations], ["lo", "hi"])

    def test_carried_payload_defaults_to_wire_payload(self):
        self.assertEqual(build_library(LibrarySettings()).carried_payload_bytes, 1250)
        library = build_library(LibrarySettings(payload_bytes=1000))
        self.assertEqual(library.carried_payload_bytes, 1000)

    def test_smaller_carried_payload_is_kept(self):
        library = build_library(LibrarySettings(carried_payload_bytes=32))
        self.assertEqual(library.carried_payload_bytes, 32)
        self.assertEqual(library.payload_bytes, 1250)

    def test_carried_payload_above_wire_payload_rejected(self):
        with self.assertRaises(ValidationError):
            LibrarySettings(payload_bytes=100, carried_payload_bytes=101)

    def test_empty_representation_list_rejected(self):
        with self.assertRaises(ConfigurationException):
            build_library(LibrarySettings(representations=[]))

    def test_segment_generations_in_order(self):
        library = build_library(one_rep_settings(359, 4))
        specs = library.segment_generations(0, 0, "480p")
        self.assertEqual([s.prefix.generation_id for s in specs], [0, 1, 2, 3])
        self.assertEqual([s.size for s in specs], [90, 90, 90, 89])


class TestGenerationOf(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.library = build_library(one_rep_settings(359, 4))

    def test_known_prefix(self):
        spec = generation_of(self.library, NamePrefix("/video0/seg0/480p", 0))
        self.assertEqual(spec.size, 90)
        self.assertEqual(spec.payload_bytes, 1250)

    def test_last_generation(self):
        self.assertEqual(generation_of(self.library, NamePrefix("/video0/seg0/480p", 3)).size, 89)

    def test_unknown_prefix(self):
        with self.assertRaises(UnknownPrefixException):
            generation_of(self.library, NamePrefix("/video9/seg0/480p", 0))
        with self.assertRaises(UnknownPrefixException):
            generation_of(self.library, NamePrefix("/video0/seg0/480p", 4))


class TestSourcePayloads(SimulatorBaseTestCase):
    def test_payloads_are_seeded_by_prefix(self):
        library = build_library(one_rep_settings(10, 2))
        first = generation_of(library, NamePrefix("/video0/seg0/480p", 0))
        second = generation_of(library, NamePrefix("/video0/seg0/480p", 1))
        a = source_payloads(first, 16)
        np.testing.assert_array_equal(a, source_payloads(first, 16))
        self.assertEqual(a.shape, (5, 16))
        self.assertEqual(a.dtype, np.uint8)
        self.assertFalse(np.array_equal(a, source_payloads(second, 16)))
