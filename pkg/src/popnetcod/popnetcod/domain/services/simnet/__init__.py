"""Discrete-event network simulation: event loop, links, topology, metrics and runs."""
