"""Outbound ports implemented by infrastructure adapters."""
