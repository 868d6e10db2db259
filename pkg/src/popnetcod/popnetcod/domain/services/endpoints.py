"""
Traffic Endpoints: the content source and adaptive-streaming clients.

The source holds every generation at full rank and answers each Interest with
a fresh random combination of the generation's source packets.

A client streams one video segment by segment. For each segment it picks a
representation from its goodput estimate and buffer level, then fetches the
segment's generations one after the other, keeping a window of Interests in
flight on each of its faces. An Interest that stays unanswered past the
retransmission timeout is forgotten and replaced by the next pump. Completed
segments are decoded and checked against the source bytes.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from popnetcod.domain.exceptions import DecodeMismatchException
from popnetcod.domain.models.catalog import ContentLibrary, GenerationSpec, Representation
from popnetcod.domain.models.metrics import MetricsLog
from popnetcod.domain.models.packets import CodedPacket, Face, Interest, NamePrefix
from popnetcod.logging import get_logger
from popnetcod.settings import ClientSettings

from .catalog import generation_of, source_payloads
from .rlnc import CodingMatrix, RandomSource, decode, recode, source_matrix

logger = get_logger(__name__)

Emission = tuple[Face, Interest | CodedPacket]


class SourceServer:
    """Content provider holding the full library.

    Args:
        name: Node name.
        library: Content library.
        rng: The run's random source.
        metrics: Run metrics; every sent packet is counted.
    """

    def __init__(self, name: str, library: ContentLibrary, rng: RandomSource, metrics: MetricsLog):
        self.name = name
        self.library = library
        self.rng = rng
        self.metrics = metrics
        self._matrices: dict[NamePrefix, CodingMatrix] = {}

    def matrix(self, prefix: NamePrefix) -> CodingMatrix:
        matrix = self._matrices.get(prefix)
        if matrix is None:
            spec = generation_of(self.library, prefix)
            matrix = source_matrix(source_payloads(spec, self.library.carried_payload_bytes), prefix)
            self._matrices[prefix] = matrix
        return matrix

    def on_interest(self, face: Face, interest: Interest, t: float) -> list[Emission]:
        """Answer with a fresh recode of the generation.

        Raises:
            UnknownPrefixException: If the prefix is not in the library.
        """
        packet = recode(self.matrix(interest.prefix), self.rng)
        self.metrics.source_sent += 1
        return [(face, packet)]


def choose_representation(
    representations: Sequence[Representation],
    goodput_bps: float | None,
    buffered: int,
    *,
    safety_factor: float = 0.9,
    low_buffer_threshold: int = 2,
) -> Representation:
    """Highest representation within ``safety_factor * goodput``.

    The lowest one is used without a goodput estimate, when nothing fits, or when
    fewer than ``low_buffer_threshold`` segments are buffered.
    """
    lowest = representations[0]
    if goodput_bps is None or buffered < low_buffer_threshold:
        return lowest
    budget = safety_factor * goodput_bps
    fitting = [rep for rep in representations if rep.bitrate_bps <= budget]
    return max(fitting, key=lambda rep: rep.bitrate_kbps) if fitting else lowest


@dataclass(frozen=True)
class DecodedSegment:
    """A segment whose generations all decoded to the source bytes."""

    client: str
    video: int
    segment: int
    representation: str
    requested_at: float
    completed_at: float


class StreamingClient:
    """Adaptive-streaming client requesting one video over several faces.

    Args:
        name: Node name.
        video: Video to stream.
        faces: Faces toward the client's access routers.
        library: Content library.
        settings: Client parameters.
        rng: The run's random source.
        metrics: Run metrics.
        next_nonce: Source of unique Interest nonces.
    """

    def __init__(
        self,
        name: str,
        video: int,
        faces: Sequence[Face],
        library: ContentLibrary,
        settings: ClientSettings,
        rng: RandomSource,
        metrics: MetricsLog,
        next_nonce: Callable[[], int],
    ):
        self.name = name
        self.video = video
        self.faces = tuple(faces)
        self.library = library
        self.settings = settings
        self.rng = rng
        self.metrics = metrics
        self.next_nonce = next_nonce

        self.started = False
        self.finished = False
        self.segment = 0
        self.representation: Representation = library.representations[0]
        self.goodput_bps: float | None = None
        self.completed = 0
        self.playback_start: float | None = None
        self.decoded: list[DecodedSegment] = []

        self._generations: list[GenerationSpec] = []
        self._gen_index = 0
        self._decoder: CodingMatrix | None = None
        self._inflight: dict[Face, deque[float]] = {face: deque() for face in self.faces}
        self._rr = 0
        self._requested_at = 0.0

        metrics.goodput.setdefault(name, [])
        metrics.segments.setdefault(name, Counter())

    # ---- state views ----

    @property
    def current(self) -> GenerationSpec | None:
        if self.finished or not self._generations:
            return None
        return self._generations[self._gen_index]

    @property
    def rank(self) -> int:
        return self._decoder.rank if self._decoder is not None else 0

    def inflight(self, face: Face | None = None) -> int:
        if face is not None:
            return len(self._inflight[face])
        return sum(len(q) for q in self._inflight.values())

    def played(self, t: float) -> int:
        """Segments fully played by ``t``; playback starts when the first segment completes."""
        if self.playback_start is None:
            return 0
        elapsed = math.floor((t - self.playback_start) / self.library.segment_duration_s)
        return max(0, min(self.completed, elapsed))

    def buffered(self, t: float) -> int:
        return self.completed - self.played(t)

    def next_timeout(self) -> float | None:
        """Earliest expiry of an in-flight Interest."""
        heads = [q[0] for q in self._inflight.values() if q]
        return min(heads) if heads else None

    # ---- behaviour ----

    def choose_representation(self, t: float) -> Representation:
        return choose_representation(
            self.library.representations,
            self.goodput_bps,
            self.buffered(t),
            safety_factor=self.settings.safety_factor,
            low_buffer_threshold=self.settings.low_buffer_threshold,
        )

    def start(self, t: float) -> list[Emission]:
        self.started = True
        self._begin_segment(t)
        return self.pump(t)

    def pump(self, t: float) -> list[Emission]:
        """Refill the per-face windows for the current generation, round-robin over faces."""
        spec = self.current
        if not self.started or spec is None:
            return []
        self._expire(t)
        demand = spec.size - self.rank - self.inflight()
        window = self.settings.window_per_face
        emissions: list[Emission] = []
        while demand > 0 and any(len(q) < window for q in self._inflight.values()):
            face = self.faces[self._rr % len(self.faces)]
            self._rr += 1
            if len(self._inflight[face]) >= window:
                continue
            self._inflight[face].append(t + self.settings.retransmit_timeout_s)
            emissions.append((face, Interest(spec.prefix, self.next_nonce())))
            demand -= 1
        return emissions

    def on_data(self, face: Face, packet: CodedPacket, t: float) -> DecodedSegment | None:
        """Absorb a Data packet; returns the segment it completed, if any.

        Raises:
            DecodeMismatchException: If a decoded generation differs from the source bytes.
        """
        self.metrics.client_received += 1
        spec = self.current
        if spec is None or packet.prefix != spec.prefix or self._decoder is None:
            return None
        queue = self._inflight.get(face)
        if queue:
            queue.popleft()
        if not self._decoder.append(packet.coeffs, packet.payload) or not self._decoder.is_full_rank:
            return None

        decoded = decode(self._decoder)
        if not np.array_equal(decoded, source_payloads(spec, self.library.carried_payload_bytes)):
            raise DecodeMismatchException(self.name, spec.prefix)
        self._gen_index += 1
        for q in self._inflight.values():
            q.clear()
        if self._gen_index < len(self._generations):
            self._open_decoder()
            return None
        return self._complete_segment(t)

    # ---- internals ----

    def _expire(self, t: float) -> None:
        for q in self._inflight.values():
            while q and q[0] <= t:
                q.popleft()

    def _begin_segment(self, t: float) -> None:
        self.representation = self.choose_representation(t)
        self._generations = self.library.segment_generations(self.video, self.segment, self.representation.name)
        self._gen_index = 0
        self._requested_at = t
        self._open_decoder()

    def _open_decoder(self) -> None:
        spec = self._generations[self._gen_index]
        self._decoder = CodingMatrix(spec.size, self.library.carried_payload_bytes, spec.prefix)

    def _complete_segment(self, t: float) -> DecodedSegment:
        rep = self.representation
        bits = rep.packets * self.library.payload_bytes * 8
        sample = bits / max(t - self._requested_at, 1e-9)
        alpha = self.settings.ewma_alpha
        self.goodput_bps = sample if self.goodput_bps is None else alpha * sample + (1 - alpha) * self.goodput_bps
        self.metrics.goodput[self.name].append(self.goodput_bps)
        self.metrics.segments[self.name][rep.name] += 1
        self.metrics.decoded_segments += 1

        done = DecodedSegment(self.name, self.video, self.segment, rep.name, self._requested_at, t)
        self.decoded.append(done)
        self.completed += 1
        if self.playback_start is None:
            self.playback_start = t
        logger.debug(f"{self.name}: segment {self.segment} ({rep.name}) done at {t:.3f}s")

        self.segment += 1
        if self.segment >= self.library.segments:
            self.finished = True
            self._decoder = None
        else:
            self._begin_segment(t)
        return done
