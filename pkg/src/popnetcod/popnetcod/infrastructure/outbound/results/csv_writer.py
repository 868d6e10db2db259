"""CSV results writer.

One file per figure-style result, plus seed-averaged summaries:

- ``cache_hit.csv``: policy, capacity, seed, router, rate
- ``cache_hit_series.csv``: policy, capacity, seed, router, window_start, rate
- ``goodput.csv``: policy, capacity, seed, client, bits_per_s
- ``representations.csv``: policy, capacity, seed, rep, segment_share
- ``load_reduction.csv``: policy, capacity, seed, value
- ``*_summary.csv``: the same values averaged over seeds per (policy, capacity)

Floats are written with six decimals so that equal runs give identical files.
"""

from pathlib import Path

import pandas as pd

from popnetcod.application.dtos.experiment import RunRecordDTO
from popnetcod.domain.exceptions import OutputException
from popnetcod.logging import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.6f"
KEYS = ["policy", "capacity", "seed"]


def cache_hit_frame(runs: list[RunRecordDTO]) -> pd.DataFrame:
    rows = [(*_key(r), router, rate) for r in runs for router, rate in r.router_hit_rates.items()]
    return pd.DataFrame(rows, columns=[*KEYS, "router", "rate"])


def cache_hit_series_frame(runs: list[RunRecordDTO]) -> pd.DataFrame:
    rows = [
        (*_key(r), router, start, rate)
        for r in runs
        for router, series in r.hit_series.items()
        for start, rate in series
    ]
    return pd.DataFrame(rows, columns=[*KEYS, "router", "window_start", "rate"])


def goodput_frame(runs: list[RunRecordDTO]) -> pd.DataFrame:
    rows = [(*_key(r), client, bps) for r in runs for client, bps in r.client_goodput.items()]
    return pd.DataFrame(rows, columns=[*KEYS, "client", "bits_per_s"])


def representations_frame(runs: list[RunRecordDTO]) -> pd.DataFrame:
    rows = [(*_key(r), rep, share) for r in runs for rep, share in r.representation_shares.items()]
    return pd.DataFrame(rows, columns=[*KEYS, "rep", "segment_share"])


def load_reduction_frame(runs: list[RunRecordDTO]) -> pd.DataFrame:
    rows = [(*_key(r), r.load_reduction) for r in runs if r.load_reduction is not None]
    return pd.DataFrame(rows, columns=[*KEYS, "value"])


def _key(run: RunRecordDTO) -> tuple[str, int, int]:
    return run.policy, run.capacity, run.seed


def _summary(frame: pd.DataFrame, value: str, by: list[str], per_run_first: bool = False) -> pd.DataFrame:
    """Average ``value`` over seeds; with ``per_run_first`` each run is first reduced to its mean."""
    if per_run_first:
        frame = frame.groupby([*KEYS, *by[2:]], sort=False, as_index=False)[value].mean()
    return frame.groupby(by, sort=False, as_index=False)[value].mean()


class CsvResultsWriter:
    """Writes run records as CSV files with pandas."""

    def write(self, runs: list[RunRecordDTO], output_dir: Path) -> list[Path]:
        """Write every per-run and summary file.

        Raises:
            OutputException: If the directory or a file cannot be written.
        """
        hits = cache_hit_frame(runs)
        goodput = goodput_frame(runs)
        reps = representations_frame(runs)
        load = load_reduction_frame(runs)
        frames = {
            "cache_hit.csv": hits,
            "cache_hit_series.csv": cache_hit_series_frame(runs),
            "goodput.csv": goodput,
            "representations.csv": reps,
            "load_reduction.csv": load,
            "cache_hit_summary.csv": _summary(hits, "rate", ["policy", "capacity"], per_run_first=True),
            "goodput_summary.csv": _summary(goodput, "bits_per_s", ["policy", "capacity"], per_run_first=True),
            "representations_summary.csv": _summary(reps, "segment_share", ["policy", "capacity", "rep"]),
            "load_reduction_summary.csv": _summary(load, "value", ["policy", "capacity"]),
        }
        try:
            output_dir.mkdir(parents=True, exist_ok=True)
            paths = []
            for name, frame in frames.items():
                path = output_dir / name
                frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
                paths.append(path)
        except OSError as e:
            raise OutputException(
                f"Cannot write results to {output_dir}: {e}", details={"output_dir": str(output_dir)}
            ) from e
        logger.info(f"Results written: {', '.join(frames)}")
        return paths
