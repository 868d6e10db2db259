"""Simulator of popularity-based caching for network-coded Named Data Networking."""
