"""Domain services: coding, caching, forwarding, endpoints and simulation."""
