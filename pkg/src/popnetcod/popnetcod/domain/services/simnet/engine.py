"""Discrete-event loop ordered by (fire time, scheduling sequence)."""

import heapq
from collections.abc import Callable
from dataclasses import dataclass, field

from popnetcod.domain.exceptions import SimulationException


@dataclass(order=True)
class SimEvent:
    """A scheduled action.

    Attributes:
        fire_time: Simulated time at which the action runs.
        sequence: Scheduling order, breaking ties between equal fire times.
        kind: 'deliver', 'timer' or 'start'.
        action: Callable run when the event fires.
        scheduled_at: Simulated time at which the event was scheduled.
    """

    fire_time: float
    sequence: int
    kind: str = field(compare=False)
    action: Callable[[], None] = field(compare=False, repr=False)
    scheduled_at: float = field(compare=False, default=0.0)


class EventQueue:
    """Min-heap of SimEvents with a simulation clock."""

    def __init__(self) -> None:
        self.now = 0.0
        self.processed = 0
        self._heap: list[SimEvent] = []
        self._sequence = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, fire_time: float, kind: str, action: Callable[[], None]) -> SimEvent:
        """Schedule ``action`` at ``fire_time``.

        Raises:
            SimulationException: If ``fire_time`` lies before the current time.
        """
        if fire_time < self.now:
            raise SimulationException(
                f"Event '{kind}' scheduled at {fire_time} before current time {self.now}.",
                details={"kind": kind, "fire_time": fire_time, "now": self.now},
            )
        event = SimEvent(fire_time, self._sequence, kind, action, self.now)
        self._sequence += 1
        heapq.heappush(self._heap, event)
        return event

    def step(self) -> SimEvent:
        """Advance the clock to the next event and run it."""
        event = heapq.heappop(self._heap)
        self.now = event.fire_time
        event.action()
        self.processed += 1
        return event

    def run(self, until: float | None = None, stop: Callable[[], bool] | None = None) -> None:
        """Run events until the queue drains, ``stop()`` holds, or the next event lies past ``until``."""
        while self._heap:
            if until is not None and self._heap[0].fire_time > until:
                self.now = until
                return
            self.step()
            if stop is not None and stop():
                return
