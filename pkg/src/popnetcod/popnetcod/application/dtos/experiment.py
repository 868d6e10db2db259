"""Data Transfer Objects for experiment sweeps.

This module defines the DTOs used to request a (policy x capacity x seed)
sweep and to hand per-run results to the results writer.
"""

from pathlib import Path

from pydantic import BaseModel, Field


class ExperimentRequestDTO(BaseModel):
    """Request DTO for an experiment sweep.

    Attributes:
        policies: Policy names to compare, in output order.
        capacities: Capacity points, in packets or as '<x>%' of the library.
        seeds: Seeds; each (policy, capacity) runs once per seed.
        output_dir: Directory receiving the CSV files.
        workers: Runs executed concurrently.
    """

    policies: list[str] = Field(..., min_length=1, description="Policies to compare", examples=[["popnetcod", "lce_lru"]])
    capacities: list[int | str] = Field(..., min_length=1, description="CS capacity points", examples=[["1.5%", 900]])
    seeds: list[int] = Field(..., min_length=1, description="Random seeds")
    output_dir: Path = Field(..., description="Output directory for CSV files")
    workers: int = Field(default=1, ge=1, description="Concurrent runs")


class RunRecordDTO(BaseModel):
    """Metrics of one (policy, capacity, seed) run.

    Attributes:
        policy: Policy name.
        capacity: Content Store capacity in packets.
        seed: Run seed.
        router_hit_rates: Whole-run cache-hit rate per router that received Interests.
        hit_series: Per router, (window start, rate) over consecutive windows.
        client_goodput: Mean goodput estimate per client that completed a segment (bits/s).
        representation_shares: Share of completed segments per representation.
        load_reduction: Source load reduction, None when clients received nothing.
        decoded_segments: Segments decoded and verified.
        end_time: Simulated time at which the run stopped.
    """

    policy: str
    capacity: int
    seed: int
    router_hit_rates: dict[str, float] = Field(default_factory=dict)
    hit_series: dict[str, list[tuple[float, float]]] = Field(default_factory=dict)
    client_goodput: dict[str, float] = Field(default_factory=dict)
    representation_shares: dict[str, float] = Field(default_factory=dict)
    load_reduction: float | None = None
    decoded_segments: int = 0
    end_time: float = 0.0

    @property
    def mean_hit_rate(self) -> float | None:
        if not self.router_hit_rates:
            return None
        return sum(self.router_hit_rates.values()) / len(self.router_hit_rates)


class ExperimentResultDTO(BaseModel):
    """Response DTO for an experiment sweep.

    Attributes:
        runs: Per-run records sorted by policy order, capacity and seed.
        files: CSV files written.
        message: A success message.
    """

    runs: list[RunRecordDTO]
    files: list[Path] = Field(default_factory=list)
    message: str = Field(default="Experiment completed successfully")
