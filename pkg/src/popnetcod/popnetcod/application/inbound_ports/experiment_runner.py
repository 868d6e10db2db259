"""Inbound port for experiment sweeps.

This module defines the port (interface) that the CLI uses to run experiments.
"""

from abc import ABC, abstractmethod

from popnetcod.application.dtos.experiment import ExperimentRequestDTO, ExperimentResultDTO


class ExperimentRunnerPort(ABC):
    """Port for running (policy x capacity x seed) sweeps."""

    @abstractmethod
    def run_experiment(self, request: ExperimentRequestDTO) -> ExperimentResultDTO:
        """Run every combination of the request and write the results.

        Args:
            request: Policies, capacities, seeds and output directory.

        Returns:
            ExperimentResultDTO with the run records and written files.

        Raises:
            ConfigurationException: If the request or the configuration is invalid.
            OutputException: If the results cannot be written.
        """
        ...
