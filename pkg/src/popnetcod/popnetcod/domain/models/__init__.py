"""Domain models: packets, catalog, CSM decisions and run metrics."""
