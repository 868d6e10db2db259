import tempfile
from pathlib import Path

from pydantic import ValidationError

from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.settings import (
    DEFAULT_SETTINGS_PATH,
    ExperimentSettings,
    expand_env_vars,
    load_yaml,
    resolve_capacity,
)
from tests.common.base_test import SimulatorBaseTestCase

APPLICATION_DATA = Path(__file__).resolve().parent.parent / "application" / "data"


class TempDirTestCase(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()
        super().tearDown()

    def write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text, encoding="utf-8")
        return path


class TestExpandEnvVars(SimulatorBaseTestCase):
    def test_known_and_unknown_variables(self):
        env = {"OUT": "/data/runs", "N": "3"}
        self.assertEqual(expand_env_vars("dir: ${OUT}/x", env=env), "dir: /data/runs/x")
        self.assertEqual(expand_env_vars("seeds: $N", env=env), "seeds: 3")
        self.assertEqual(expand_env_vars("dir: ${MISSING}", env=env), "dir: ${MISSING}")


class TestLoadYaml(TempDirTestCase):
    def test_missing_file(self):
        with self.assertRaises(ConfigurationException):
            load_yaml(self.root / "absent.yaml")

    def test_malformed_file(self):
        path = self.write("bad.yaml", "library: [videos: 1\n")
        with self.assertRaises(ConfigurationException):
            load_yaml(path)

    def test_top_level_must_be_mapping(self):
        path = self.write("list.yaml", "- 1\n- 2\n")
        with self.assertRaises(ConfigurationException):
            load_yaml(path)

    def test_empty_file_is_empty_mapping(self):
        self.assertEqual(load_yaml(self.write("empty.yaml", "")), {})


class TestResolveCapacity(SimulatorBaseTestCase):
    def test_percent_and_packets(self):
        self.assertEqual(resolve_capacity("10%", 200), 20)
        self.assertEqual(resolve_capacity(" 1.5% ", 540_500), 8108)
        self.assertEqual(resolve_capacity(900, 540_500), 900)
        self.assertEqual(resolve_capacity("900", 540_500), 900)
        self.assertEqual(resolve_capacity("0%", 540_500), 0)

    def test_invalid_values(self):
        for value in ("ten%", "abc", -1, "-5%"):
            with self.subTest(value=value):
                with self.assertRaises(ConfigurationException):
                    resolve_capacity(value, 1000)


class TestExperimentSettings(TempDirTestCase):
    def test_bundled_settings_load(self):
        settings = ExperimentSettings.from_yaml(DEFAULT_SETTINGS_PATH)
        self.assertEqual(settings.library.videos, 2)
        self.assertIsNone(settings.library.carried_payload_bytes)
        self.assertEqual(settings.library.carried_bytes, settings.library.payload_bytes)
        self.assertEqual([r.name for r in settings.library.representations], ["480p", "720p", "1080p"])
        self.assertEqual(settings.compare, ["popnetcod", "lce_lru", "lce_nolimit", "nocache"])

    def test_full_scale_overlay(self):
        settings = ExperimentSettings.from_yaml(DEFAULT_SETTINGS_PATH, full_scale=True)
        self.assertEqual(settings.library.videos, 5)
        self.assertEqual(settings.library.segments, 50)
        self.assertEqual(settings.topology.clients, 123)
        self.assertEqual(settings.topology.core_routers + settings.topology.edge_routers, 45)
        self.assertEqual(len(settings.capacities), 5)
        # untouched sections keep the base file's values
        self.assertEqual(settings.clients.window_per_face, 16)

    def test_overrides_ignore_none(self):
        settings = ExperimentSettings.from_yaml(
            APPLICATION_DATA / "tiny_experiment.yaml", output_dir=self.root / "out", workers=None
        )
        self.assertEqual(settings.output_dir, self.root / "out")
        self.assertEqual(settings.workers, 1)
        self.assertEqual(settings.seeds, [1, 2, 3])

    def test_empty_compare_rejected(self):
        with self.assertRaises(ValidationError):
            ExperimentSettings(compare=[])
        with self.assertRaises(ValidationError):
            ExperimentSettings(seeds=[])

    def test_unknown_compared_policy_rejected(self):
        with self.assertRaises(ValidationError):
            ExperimentSettings(compare=["popnetcod", "fifo"])
        path = self.write("unknown.yaml", "compare: [fifo]\n")
        with self.assertRaises(ConfigurationException):
            ExperimentSettings.from_yaml(path)

    def test_resolve_policy(self):
        settings = ExperimentSettings(compare=["nocache"])
        self.assertTrue(settings.resolve_policy("nocache").module_class.endswith("NoCachePolicy"))
        with self.assertRaises(ConfigurationException):
            settings.resolve_policy("fifo")

    def test_topology_file_with_topology_key(self):
        settings = ExperimentSettings(topology_path=APPLICATION_DATA / "topology_only.yaml")
        topology = settings.resolved_topology()
        self.assertEqual(topology.layout, "explicit")
        self.assertEqual([n.name for n in topology.nodes], ["source", "r0", "client0"])
        self.assertEqual(topology.nodes[1].capacity, 2)

    def test_topology_file_as_bare_mapping(self):
        path = self.write("bare.yaml", "layout: tiered\ncore_routers: 3\nedge_routers: 5\nclients: 7\n")
        topology = ExperimentSettings(topology_path=path).resolved_topology()
        self.assertEqual((topology.core_routers, topology.edge_routers, topology.clients), (3, 5, 7))

    def test_invalid_topology_file(self):
        path = self.write("bad_topology.yaml", "layout: ring\n")
        with self.assertRaises(ConfigurationException):
            ExperimentSettings(topology_path=path).resolved_topology()
        with self.assertRaises(ConfigurationException):
            ExperimentSettings(topology_path=self.root / "absent.yaml").resolved_topology()
