"""Data Transfer Objects exchanged with the use cases."""
