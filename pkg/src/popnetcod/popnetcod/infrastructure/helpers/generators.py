"""Helper class for generating identifiers.

This module provides a centralized location for nonce and packet-id generation,
so every run draws its identifiers from counters it owns and tests can patch
them for fixed values.
"""

import itertools
from collections.abc import Callable


class Helper:
    """Static helper class for generating identifiers.

    Usage:
        next_nonce = Helper.id_sequence()
        nonce = next_nonce()

        # In tests:
        with patch('popnetcod.infrastructure.helpers.generators.Helper.id_sequence', ...):
            ...
    """

    @staticmethod
    def id_sequence(start: int = 0) -> Callable[[], int]:
        """Return a callable yielding ``start``, ``start + 1``, ... on successive calls."""
        counter = itertools.count(start)
        return lambda: next(counter)
