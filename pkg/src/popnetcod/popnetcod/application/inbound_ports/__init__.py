"""Inbound ports exposed to the CLI."""
