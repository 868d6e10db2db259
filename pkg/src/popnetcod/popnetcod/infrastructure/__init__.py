"""Infrastructure layer: policies, results writers, CLI and bootstrap."""
