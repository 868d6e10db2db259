"""Application container for dependency injection.

This module composes the policy factories from the settings registry, the
results writer and the experiment use case.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from typing_extensions import Self

from popnetcod.application.use_cases.run_experiment import RunExperimentUseCase
from popnetcod.domain.exceptions import ConfigurationException
from popnetcod.domain.ports import CachingPolicyPort, PolicyFactory
from popnetcod.infrastructure.outbound.results.csv_writer import CsvResultsWriter
from popnetcod.logging import get_logger
from popnetcod.settings import ExperimentSettings, PolicyConstructor

from ._utils import import_class_from_string

logger = get_logger(__name__)


def build_policy_factory(name: str, constructor: PolicyConstructor) -> PolicyFactory:
    """Import a policy class from the registry and bind its parameters.

    Raises:
        ConfigurationException: If the class cannot be imported or is not a caching policy.
    """
    try:
        cls = import_class_from_string(constructor.module_class)
    except (ImportError, AttributeError, ValueError) as e:
        raise ConfigurationException(
            f"Cannot import policy '{name}' from '{constructor.module_class}': {e}",
            details={"policy": name, "module_class": constructor.module_class},
        ) from e
    if not (isinstance(cls, type) and issubclass(cls, CachingPolicyPort)):
        raise ConfigurationException(
            f"Policy '{name}' ({constructor.module_class}) is not a CachingPolicyPort.",
            details={"policy": name},
        )
    logger.debug(f"Policy '{name}' resolved to {cls.__name__}")
    return functools.partial(cls, **constructor.params) if constructor.params else cls


@dataclass
class AppContainer:
    """Main application container.

    Attributes:
        settings: The experiment settings used to build this container.
        policy_factories: Factories of every registered policy, by name.
        results_writer: Adapter writing CSV results.
        run_experiment: The experiment sweep use case.
    """

    settings: ExperimentSettings
    policy_factories: dict[str, PolicyFactory]
    results_writer: CsvResultsWriter
    run_experiment: RunExperimentUseCase

    @classmethod
    def build(cls, settings: ExperimentSettings) -> Self:
        logger.info("Building policies...")
        factories = {name: build_policy_factory(name, ctor) for name, ctor in settings.policies.items()}
        writer = CsvResultsWriter()
        use_case = RunExperimentUseCase(settings, factories, writer)
        logger.info("Container build complete")
        return cls(settings, factories, writer, use_case)
