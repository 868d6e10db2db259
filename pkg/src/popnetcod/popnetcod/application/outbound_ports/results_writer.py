from pathlib import Path
from typing import Protocol

from popnetcod.application.dtos.experiment import RunRecordDTO


class ResultsWriterPort(Protocol):
    """Port interface for persisting experiment results."""

    def write(self, runs: list[RunRecordDTO], output_dir: Path) -> list[Path]:
        """Write per-run and seed-averaged results.

        Args:
            runs: Completed runs, already sorted.
            output_dir: Directory receiving the files.

        Returns:
            Paths of the files written.
        """
        ...
