"""Naming and packetization of the content library.

Videos are split into segments, each segment is available in every
representation, and each (segment, representation) object is split into
generations of at most ``ceil(packets / generations)`` packets, the final
generation absorbing the remainder.
"""

import math
import zlib

import numpy as np

from popnetcod.domain.exceptions import ConfigurationException, UnknownPrefixException
from popnetcod.domain.models.catalog import ContentLibrary, GenerationSpec, Representation
from popnetcod.domain.models.packets import NamePrefix
from popnetcod.logging import get_logger
from popnetcod.settings import LibrarySettings

logger = get_logger(__name__)


def generation_sizes(packets: int, generations: int) -> list[int]:
    """Split ``packets`` into ``generations`` ceil-sized generations.

    Raises:
        ConfigurationException: If either count is zero or the split leaves an empty generation.
    """
    if packets <= 0 or generations <= 0:
        raise ConfigurationException(
            "Representations need at least one packet and one generation.",
            details={"packets": packets, "generations": generations},
        )
    size = math.ceil(packets / generations)
    last = packets - size * (generations - 1)
    if last < 1:
        raise ConfigurationException(
            f"{packets} packets cannot be split into {generations} non-empty generations.",
            details={"packets": packets, "generations": generations},
        )
    return [size] * (generations - 1) + [last]


def build_library(cfg: LibrarySettings) -> ContentLibrary:
    """Enumerate every generation of every object described by ``cfg``."""
    representations = tuple(
        Representation(name=r.name, bitrate_kbps=r.bitrate_kbps, packets=r.packets, generations=r.generations)
        for r in sorted(cfg.representations, key=lambda r: r.bitrate_kbps)
    )
    if not representations:
        raise ConfigurationException("The library needs at least one representation.")

    generations: dict[NamePrefix, GenerationSpec] = {}
    for rep in representations:
        sizes = generation_sizes(rep.packets, rep.generations)
        for video in range(cfg.videos):
            for segment in range(cfg.segments):
                name = ContentLibrary.object_name(video, segment, rep.name)
                for g, size in enumerate(sizes):
                    prefix = NamePrefix(name, g)
                    generations[prefix] = GenerationSpec(prefix=prefix, size=size, payload_bytes=cfg.payload_bytes)

    library = ContentLibrary(
        videos=cfg.videos,
        segments=cfg.segments,
        segment_duration_s=cfg.segment_duration_s,
        representations=representations,
        payload_bytes=cfg.payload_bytes,
        carried_payload_bytes=cfg.carried_bytes,
        generations=generations,
    )
    logger.info(
        f"Library built: {cfg.videos} videos x {cfg.segments} segments, "
        f"{len(generations)} generations, {library.total_packets} packets"
    )
    return library


def generation_of(lib: ContentLibrary, prefix: NamePrefix) -> GenerationSpec:
    """Look up a generation.

    Raises:
        UnknownPrefixException: If the prefix is not in the library.
    """
    try:
        return lib.generations[prefix]
    except KeyError as e:
        raise UnknownPrefixException(prefix) from e


def source_payloads(spec: GenerationSpec, carried_bytes: int) -> np.ndarray:
    """Pseudorandom source payloads of a generation, seeded by its prefix."""
    seed = zlib.crc32(str(spec.prefix).encode("utf-8"))
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(spec.size, carried_bytes), dtype=np.uint8)
