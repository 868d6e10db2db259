"""Domain ports: abstractions the simulation core depends on."""

from .caching_policy import CachingPolicyPort, PolicyContext, PolicyFactory

__all__ = ["CachingPolicyPort", "PolicyContext", "PolicyFactory"]
