from .use_case import RunExperimentUseCase, RunJob, execute_run, summarize_run

__all__ = ["RunExperimentUseCase", "RunJob", "execute_run", "summarize_run"]
