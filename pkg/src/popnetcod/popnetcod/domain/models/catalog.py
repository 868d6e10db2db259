"""Domain models for the content library (videos, segments, representations, generations)."""

from dataclasses import dataclass, field

from .packets import NamePrefix


@dataclass(frozen=True)
class Representation:
    """One encoding quality of every segment.

    Attributes:
        name: Label such as '480p'.
        bitrate_kbps: Nominal bitrate used by the adaptation logic.
        packets: Data packets per segment in this representation.
        generations: Generations per segment in this representation.
    """

    name: str
    bitrate_kbps: int
    packets: int
    generations: int

    @property
    def bitrate_bps(self) -> float:
        return self.bitrate_kbps * 1000.0


@dataclass(frozen=True)
class GenerationSpec:
    """A generation of an object.

    Attributes:
        prefix: The generation's name prefix.
        size: Number of source packets coded together.
        payload_bytes: Bytes per packet on the wire.
    """

    prefix: NamePrefix
    size: int
    payload_bytes: int


@dataclass(frozen=True)
class ContentLibrary:
    """The whole catalog offered by the source.

    Attributes:
        videos: Number of videos.
        segments: Segments per video.
        segment_duration_s: Playback duration of one segment.
        representations: Available qualities, lowest bitrate first.
        payload_bytes: Wire payload size per packet.
        carried_payload_bytes: Payload bytes actually carried and decoded in simulation.
        generations: Every generation keyed by prefix.
    """

    videos: int
    segments: int
    segment_duration_s: float
    representations: tuple[Representation, ...]
    payload_bytes: int
    carried_payload_bytes: int
    generations: dict[NamePrefix, GenerationSpec] = field(repr=False)

    @property
    def total_packets(self) -> int:
        return sum(spec.size for spec in self.generations.values())

    @staticmethod
    def object_name(video: int, segment: int, representation: str) -> str:
        return f"/video{video}/seg{segment}/{representation}"

    def representation(self, name: str) -> Representation:
        for rep in self.representations:
            if rep.name == name:
                return rep
        raise KeyError(name)

    def segment_generations(self, video: int, segment: int, representation: str) -> list[GenerationSpec]:
        """Return the generations of one segment in generation order."""
        rep = self.representation(representation)
        name = self.object_name(video, segment, representation)
        return [self.generations[NamePrefix(name, g)] for g in range(rep.generations)]
