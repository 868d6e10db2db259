"""
Configuration System for the PopNetCod simulator

Experiment configuration is a pydantic-settings model fed from:

1. Constructor arguments (highest priority; the CLI passes a parsed YAML file here)
2. Environment variables prefixed with ``POPNETCOD_`` (nested keys joined by ``__``)
3. A ``.env`` file
4. The YAML file named by ``POPNETCOD_SETTINGS``, or the bundled ``settings.yaml``

``${VAR}`` placeholders inside YAML files are expanded from the environment
before parsing, so output directories and the like can be injected per host.

Policies are configured as a registry: every entry names the class that
implements it (``module_class``) plus its constructor parameters, and the
bootstrap layer imports it by dotted path.
"""

from __future__ import annotations

import os
import re
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.logging import get_logger

logger = get_logger(__name__)

_VAR_RE = re.compile(r"\$(\w+)|\$\{([^}]+)\}")

PACKAGE_ROOT = Path(__file__).resolve().parent
DEFAULT_SETTINGS_PATH = PACKAGE_ROOT.parent / "settings.yaml"
FULL_SCALE_PATH = PACKAGE_ROOT / "configs" / "full_scale.yaml"


def expand_env_vars(text: str, *, env: Mapping[str, str]) -> str:
    """
    Expand $VAR / ${VAR} from ``env``.
    Unknown variables are left unchanged, like os.path.expandvars().
    """

    def repl(m: re.Match[str]) -> str:
        var = m.group(1) or m.group(2)
        if not var:
            return m.group(0)
        value = env.get(var)
        return value if value is not None else m.group(0)

    return _VAR_RE.sub(repl, text)


def load_yaml(path: Path) -> dict[str, Any]:
    """Read a YAML file with environment expansion.

    Raises:
        ConfigurationException: If the file is missing or is not a mapping.
    """
    if not path.is_file():
        raise ConfigurationException(f"Configuration file not found: {path}", details={"path": str(path)})
    text = expand_env_vars(path.read_text(encoding="utf-8"), env=os.environ)
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ConfigurationException(f"Malformed YAML in {path}: {e}", details={"path": str(path)}) from e
    if not isinstance(data, dict):
        raise ConfigurationException(f"Top level of {path} must be a mapping.", details={"path": str(path)})
    return data


def deep_merge(base: dict[str, Any], overlay: Mapping[str, Any]) -> dict[str, Any]:
    """Recursively merge ``overlay`` into a copy of ``base``."""
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


# ========== LIBRARY ==========
class RepresentationSettings(BaseModel):
    """One representation of every segment.

    Attributes:
        name: Label such as '1080p'.
        bitrate_kbps: Nominal bitrate.
        packets: Data packets per segment.
        generations: Generations per segment.
    """

    name: str
    bitrate_kbps: int = Field(gt=0)
    packets: int
    generations: int


def _default_representations() -> list[RepresentationSettings]:
    return [
        RepresentationSettings(name="480p", bitrate_kbps=1750, packets=359, generations=4),
        RepresentationSettings(name="720p", bitrate_kbps=3000, packets=615, generations=7),
        RepresentationSettings(name="1080p", bitrate_kbps=5800, packets=1188, generations=12),
    ]


class LibrarySettings(BaseModel):
    """Content library description.

    Attributes:
        videos: Number of videos offered by the source.
        segments: Segments per video.
        segment_duration_s: Playback duration of a segment.
        payload_bytes: Payload bytes per Data packet on the wire.
        carried_payload_bytes: Payload bytes actually simulated and decoded; defaults to
            ``payload_bytes``. A smaller value is a fast mode: bandwidth still counts
            ``payload_bytes`` per packet.
        representations: Available representations.
    """

    videos: int = Field(default=2, ge=1)
    segments: int = Field(default=10, ge=1)
    segment_duration_s: float = Field(default=2.0, gt=0)
    payload_bytes: int = Field(default=1250, gt=0)
    carried_payload_bytes: int | None = Field(default=None, gt=0)
    representations: list[RepresentationSettings] = Field(default_factory=_default_representations)

    @model_validator(mode="after")
    def _carried_within_payload(self) -> LibrarySettings:
        if self.carried_payload_bytes is not None and self.carried_payload_bytes > self.payload_bytes:
            raise ValueError("carried_payload_bytes cannot exceed payload_bytes")
        return self

    @property
    def carried_bytes(self) -> int:
        return self.carried_payload_bytes if self.carried_payload_bytes is not None else self.payload_bytes


# ========== TOPOLOGY ==========
class NodeSpec(BaseModel):
    """A node of an explicit topology.

    Attributes:
        name: Unique node name.
        role: 'source', 'router' or 'client'.
        policy: Policy override for this router (defaults to the swept policy).
        capacity: CS capacity override for this router, in packets.
        video: Video streamed by this client (drawn at random when omitted).
        start_s: Start time of this client (drawn within the start window when omitted).
    """

    name: str
    role: Literal["source", "router", "client"]
    policy: str | None = None
    capacity: int | None = None
    video: int | None = Field(default=None, ge=0)
    start_s: float | None = Field(default=None, ge=0)


class LinkSpec(BaseModel):
    """A bidirectional link; ``upstream`` is the end closer to the source.

    Attributes:
        upstream: Node name toward the source.
        downstream: Node name toward the clients.
        bandwidth_bps: Link bandwidth; defaults depend on whether a client is attached.
        delay_s: Propagation delay; defaults to LinkSettings.propagation_delay_s.
    """

    upstream: str
    downstream: str
    bandwidth_bps: float | None = Field(default=None, gt=0)
    delay_s: float | None = Field(default=None, ge=0)


class RouteSpec(BaseModel):
    """A FIB entry overriding the default (every upstream neighbor, equal weights).

    Attributes:
        node: Router owning the entry.
        pattern: Object-name prefix matched by longest match; '' matches everything.
        next_hops: Upstream neighbor names.
        weights: Selection weights, uniform when omitted.
    """

    node: str
    pattern: str = ""
    next_hops: list[str]
    weights: list[float] | None = None


class TopologySettings(BaseModel):
    """Network layout.

    Attributes:
        layout: 'tiered' generates source / core / edge / client tiers from counts,
            'explicit' uses ``nodes`` and ``links`` verbatim.
        core_routers: Routers attached to the source.
        edge_routers: Routers attached to clients.
        clients: Number of streaming clients.
        client_homing: Edge routers each client connects to.
        edge_uplinks: Core routers each edge router connects to.
        nodes: Explicit nodes.
        links: Explicit links.
        routes: FIB overrides.
    """

    layout: Literal["tiered", "explicit"] = "tiered"
    core_routers: int = Field(default=2, ge=1)
    edge_routers: int = Field(default=4, ge=1)
    clients: int = Field(default=12, ge=1)
    client_homing: int = Field(default=2, ge=1)
    edge_uplinks: int = Field(default=2, ge=1)
    nodes: list[NodeSpec] = Field(default_factory=list)
    links: list[LinkSpec] = Field(default_factory=list)
    routes: list[RouteSpec] = Field(default_factory=list)


class LinkSettings(BaseModel):
    """Default link parameters.

    Attributes:
        core_bandwidth_bps: Bandwidth of router-router and source-router links.
        client_bandwidth_mean_bps: Mean of the client access bandwidth distribution.
        client_bandwidth_std_bps: Standard deviation of the client access bandwidth.
        client_bandwidth_min_bps: Truncation floor for client access bandwidth draws.
        propagation_delay_s: Propagation delay of every link.
    """

    core_bandwidth_bps: float = 20e6
    client_bandwidth_mean_bps: float = 4e6
    client_bandwidth_std_bps: float = 1.5e6
    client_bandwidth_min_bps: float = 0.5e6
    propagation_delay_s: float = 0.005


class WireSettings(BaseModel):
    """On-the-wire sizes used for serialization delay."""

    interest_bytes: int = 64
    data_header_bytes: int = 32


class RouterSettings(BaseModel):
    """Per-router parameters.

    Attributes:
        interest_lifetime_s: PIT entry lifetime.
        observation_window_s: Popularity observation window tau.
    """

    interest_lifetime_s: float = Field(default=2.0, gt=0)
    observation_window_s: float = Field(default=10.0, gt=0)


class ClientSettings(BaseModel):
    """Streaming client parameters.

    Attributes:
        window_per_face: Interests kept in flight per face.
        retransmit_timeout_s: Time after which an unanswered Interest is reissued.
        safety_factor: Fraction of the goodput estimate a representation may use.
        low_buffer_threshold: Buffered segments below which the lowest representation is forced.
        ewma_alpha: Weight of the newest goodput sample.
        start_window_s: Clients start uniformly at random within this window.
    """

    window_per_face: int = Field(default=16, ge=1)
    retransmit_timeout_s: float = Field(default=2.0, gt=0)
    safety_factor: float = Field(default=0.9, gt=0)
    low_buffer_threshold: int = Field(default=2, ge=0)
    ewma_alpha: float = Field(default=0.5, gt=0, le=1)
    start_window_s: float = Field(default=5.0, ge=0)


class SimulationSettings(BaseModel):
    """Run control.

    Attributes:
        duration_s: Stop time; None runs until every client finished its video.
        instrument: Record every A-table mark and CS insertion.
        hit_rate_window_s: Window length T of the cache-hit time series.
    """

    duration_s: float | None = Field(default=None, gt=0)
    instrument: bool = False
    hit_rate_window_s: float = Field(default=10.0, gt=0)


# ========== POLICIES ==========
class PolicyConstructor(BaseModel):
    """Constructor information for a caching policy.

    Attributes:
        module_class: Fully qualified path of the class implementing the policy.
        params: Extra keyword arguments for the constructor.
    """

    module_class: str
    params: dict[str, Any] = Field(default_factory=dict)


_POLICIES_PACKAGE = "popnetcod.infrastructure.outbound.policies"


def _default_policies() -> dict[str, PolicyConstructor]:
    return {
        "popnetcod": PolicyConstructor(module_class=f"{_POLICIES_PACKAGE}.popnetcod.PopNetCodPolicy"),
        "lce_lru": PolicyConstructor(module_class=f"{_POLICIES_PACKAGE}.lce.LceLruPolicy"),
        "lce_nolimit": PolicyConstructor(module_class=f"{_POLICIES_PACKAGE}.lce.LceNoLimitPolicy"),
        "nocache": PolicyConstructor(module_class=f"{_POLICIES_PACKAGE}.nocache.NoCachePolicy"),
    }


Capacity = int | str


def resolve_capacity(value: Capacity, total_packets: int) -> int:
    """Turn a capacity point into packets; strings ending in '%' are shares of the library.

    Raises:
        ConfigurationException: If the value cannot be parsed or is negative.
    """
    try:
        if isinstance(value, str) and value.strip().endswith("%"):
            share = float(value.strip()[:-1])
            packets = round(total_packets * share / 100.0)
        else:
            packets = int(value)
    except ValueError as e:
        raise ConfigurationException(f"Invalid capacity '{value}'.", details={"capacity": value}) from e
    if packets < 0:
        raise ConfigurationException(f"Capacity must be non-negative, got '{value}'.", details={"capacity": value})
    return packets


# ========== YAML CONFIGURATION SOURCE ==========
class EnvExpandingYamlSettingsSource(PydanticBaseSettingsSource):
    """Pydantic settings source that loads a YAML file with environment variable expansion.

    Attributes:
        yaml_path: Path to the YAML configuration file.
        data: Parsed and expanded configuration dictionary.
    """

    def __init__(self, settings_cls: type[BaseSettings], yaml_path: Path):
        super().__init__(settings_cls)
        self.yaml_path = yaml_path
        self.data = load_yaml(yaml_path) if yaml_path.exists() else {}

    def get_field_value(self, field, field_name: str) -> tuple[Any, str, bool]:
        key = field.alias or field_name
        value_is_complex = self.field_is_complex(field)
        if key in self.data:
            return self.data[key], key, value_is_complex
        return None, key, value_is_complex

    def __call__(self) -> dict[str, Any]:
        return self.data


# ========== MAIN SETTINGS CLASS ==========
class ExperimentSettings(BaseSettings):
    """Complete experiment configuration.

    Attributes:
        library: Content library description.
        topology: Network layout (ignored when ``topology_path`` is set).
        topology_path: YAML file holding a TopologySettings mapping.
        links: Default link parameters.
        wire: Packet sizes on the wire.
        routers: Router parameters.
        clients: Client parameters.
        simulation: Run control.
        policies: Registry of available caching policies.
        compare: Policies to run, in output order.
        capacities: CS capacity points (packets, or '<x>%' of library packets).
        seeds: Random seeds; every (policy, capacity) runs once per seed.
        output_dir: Where CSV files are written.
        workers: Runs executed concurrently.
    """

    library: LibrarySettings = Field(default_factory=LibrarySettings)
    topology: TopologySettings = Field(default_factory=TopologySettings)
    topology_path: Path | None = None
    links: LinkSettings = Field(default_factory=LinkSettings)
    wire: WireSettings = Field(default_factory=WireSettings)
    routers: RouterSettings = Field(default_factory=RouterSettings)
    clients: ClientSettings = Field(default_factory=ClientSettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    policies: dict[str, PolicyConstructor] = Field(default_factory=_default_policies)
    compare: list[str] = Field(default_factory=lambda: ["popnetcod", "lce_lru", "lce_nolimit", "nocache"])
    capacities: list[Capacity] = Field(default_factory=lambda: ["1.5%"])
    seeds: list[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    output_dir: Path = Path("results")
    workers: int = Field(default=1, ge=1)

    model_config = SettingsConfigDict(
        extra="ignore", env_file=".env", env_prefix="POPNETCOD_", env_nested_delimiter="__", case_sensitive=False
    )

    @field_validator("compare", "capacities", "seeds")
    @classmethod
    def _not_empty(cls, value: list[Any]) -> list[Any]:
        if not value:
            raise ValueError("at least one entry is required")
        return value

    @model_validator(mode="after")
    def _known_policies(self) -> ExperimentSettings:
        unknown = [name for name in self.compare if name not in self.policies]
        if unknown:
            raise ValueError(f"unknown policies {unknown}; available: {sorted(self.policies)}")
        return self

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        """Priority: constructor > environment > .env > YAML.

        The YAML file is only consulted when no constructor arguments were given,
        so a configuration passed explicitly is never mixed with the bundled defaults.
        """
        sources = [init_settings, env_settings, dotenv_settings]
        init_kwargs = getattr(init_settings, "init_kwargs", {}) or {}
        if not init_kwargs:
            yaml_path = Path(os.getenv("POPNETCOD_SETTINGS", str(DEFAULT_SETTINGS_PATH)))
            logger.info(f"Loading settings from YAML: {yaml_path}")
            sources.append(EnvExpandingYamlSettingsSource(settings_cls=settings_cls, yaml_path=yaml_path))
        return tuple(sources)

    @classmethod
    def from_yaml(cls, path: Path, *, full_scale: bool = False, **overrides: Any) -> ExperimentSettings:
        """Build settings from a YAML file, optionally overlaid with the full-scale scenario.

        Raises:
            ConfigurationException: If a file is missing or the result does not validate.
        """
        data = load_yaml(path)
        if full_scale:
            data = deep_merge(data, load_yaml(FULL_SCALE_PATH))
        data = deep_merge(data, {k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except ValueError as e:
            raise ConfigurationException(f"Invalid configuration in {path}: {e}", details={"path": str(path)}) from e

    def resolve_policy(self, name: str) -> PolicyConstructor:
        """Return the registry entry of a policy.

        Raises:
            ConfigurationException: If the policy is not registered.
        """
        try:
            return self.policies[name]
        except KeyError as e:
            raise ConfigurationException(
                f"Could not resolve policy '{name}'", details={"available": sorted(self.policies)}
            ) from e

    def resolved_topology(self) -> TopologySettings:
        """Topology from ``topology_path`` when set, otherwise the inline one.

        Raises:
            ConfigurationException: If the topology file is missing or invalid.
        """
        if self.topology_path is None:
            return self.topology
        data = load_yaml(self.topology_path)
        try:
            return TopologySettings(**data.get("topology", data))
        except ValueError as e:
            raise ConfigurationException(
                f"Invalid topology in {self.topology_path}: {e}", details={"path": str(self.topology_path)}
            ) from e
