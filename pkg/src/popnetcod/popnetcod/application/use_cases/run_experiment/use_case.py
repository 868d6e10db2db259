"""Experiment sweep use case.

This module runs every (policy x capacity x seed) combination of a request,
optionally in a process pool, turns each run's metrics into a RunRecordDTO and
hands the sorted records to the results writer. Nothing is written unless
every run succeeded.
"""

from __future__ import annotations

import statistics
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat

from popnetcod.application.dtos.experiment import ExperimentRequestDTO, ExperimentResultDTO, RunRecordDTO
from popnetcod.application.inbound_ports.experiment_runner import ExperimentRunnerPort
from popnetcod.application.outbound_ports.results_writer import ResultsWriterPort
from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.domain.models.catalog import ContentLibrary
from popnetcod.domain.models.metrics import MetricsLog
from popnetcod.domain.ports import PolicyFactory
from popnetcod.domain.services.catalog import build_library
from popnetcod.domain.services.simnet.metrics import cache_hit_series, load_reduction, overall_hit_rate
from popnetcod.domain.services.simnet.simulator import RouterAssignment, run
from popnetcod.domain.services.simnet.topology import Topology, build_topology
from popnetcod.logging import get_logger
from popnetcod.settings import Capacity, ExperimentSettings, resolve_capacity

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunJob:
    """One point of the sweep."""

    policy: str
    capacity: Capacity
    seed: int


def summarize_run(
    policy: str, capacity: int, seed: int, log: MetricsLog, library: ContentLibrary, window: float
) -> RunRecordDTO:
    """Reduce a run's metrics to the values written to CSV."""
    hit_rates = {}
    for router in log.routers:
        rate = overall_hit_rate(log, router)
        if rate is not None:
            hit_rates[router] = rate

    total_segments = sum(sum(counts.values()) for counts in log.segments.values())
    shares: dict[str, float] = {}
    if total_segments:
        for rep in library.representations:
            count = sum(counts.get(rep.name, 0) for counts in log.segments.values())
            shares[rep.name] = count / total_segments

    return RunRecordDTO(
        policy=policy,
        capacity=capacity,
        seed=seed,
        router_hit_rates=hit_rates,
        hit_series={router: cache_hit_series(log, router, window) for router in hit_rates},
        client_goodput={c: statistics.fmean(g) for c, g in sorted(log.goodput.items()) if g},
        representation_shares=shares,
        load_reduction=load_reduction(log),
        decoded_segments=log.decoded_segments,
        end_time=log.end_time,
    )


def _assignments(
    topology: Topology, factories: Mapping[str, PolicyFactory], policy: str, capacity: int
) -> dict[str, RouterAssignment]:
    assignments = {}
    for node in topology.routers:
        name = node.policy or policy
        if name not in factories:
            raise ConfigurationException(
                f"Router '{node.name}' uses unknown policy '{name}'.", details={"available": sorted(factories)}
            )
        packets = node.capacity if node.capacity is not None else capacity
        assignments[node.name] = RouterAssignment(name, factories[name], packets)
    return assignments


def execute_run(settings: ExperimentSettings, factories: Mapping[str, PolicyFactory], job: RunJob) -> RunRecordDTO:
    """Build library and topology from ``settings`` and simulate one sweep point."""
    library = build_library(settings.library)
    topology = build_topology(settings.resolved_topology(), settings.links)
    capacity = resolve_capacity(job.capacity, library.total_packets)
    log = run(
        topology,
        library,
        _assignments(topology, factories, job.policy, capacity),
        job.seed,
        settings.simulation.duration_s,
        routers=settings.routers,
        clients=settings.clients,
        wire=settings.wire,
        instrument=settings.simulation.instrument,
    )
    record = summarize_run(job.policy, capacity, job.seed, log, library, settings.simulation.hit_rate_window_s)
    logger.info(
        f"Run policy={job.policy} capacity={capacity} seed={job.seed}: "
        f"hit={record.mean_hit_rate} load_reduction={record.load_reduction} "
        f"segments={record.decoded_segments} t_end={record.end_time:.1f}s"
    )
    return record


class RunExperimentUseCase(ExperimentRunnerPort):
    """Use case for running experiment sweeps.

    Attributes:
        settings: Experiment configuration.
        policy_factories: Policy factories by name.
        writer: Port persisting the results.
    """

    def __init__(
        self,
        settings: ExperimentSettings,
        policy_factories: Mapping[str, PolicyFactory],
        writer: ResultsWriterPort,
    ):
        self.settings = settings
        self.policy_factories = dict(policy_factories)
        self.writer = writer
        logger.info("RunExperimentUseCase initialized")

    def _validate(self, request: ExperimentRequestDTO) -> None:
        unknown = [p for p in request.policies if p not in self.policy_factories]
        if unknown:
            raise ConfigurationException(
                f"Unknown policies {unknown}.", details={"available": sorted(self.policy_factories)}
            )
        library = build_library(self.settings.library)
        topology = build_topology(self.settings.resolved_topology(), self.settings.links)
        for capacity in request.capacities:
            packets = resolve_capacity(capacity, library.total_packets)
            _assignments(topology, self.policy_factories, request.policies[0], packets)

    def run_experiment(self, request: ExperimentRequestDTO) -> ExperimentResultDTO:
        self._validate(request)
        jobs = [
            RunJob(policy, capacity, seed)
            for policy in request.policies
            for capacity in request.capacities
            for seed in request.seeds
        ]
        logger.info(f"Running {len(jobs)} runs with {request.workers} worker(s)")

        if request.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=request.workers) as pool:
                records = list(pool.map(execute_run, repeat(self.settings), repeat(self.policy_factories), jobs))
        else:
            records = [execute_run(self.settings, self.policy_factories, job) for job in jobs]

        order = {policy: i for i, policy in enumerate(request.policies)}
        records.sort(key=lambda r: (order[r.policy], r.capacity, r.seed))
        files = self.writer.write(records, request.output_dir)
        logger.info(f"Wrote {len(files)} files to {request.output_dir}")
        return ExperimentResultDTO(runs=records, files=files)
