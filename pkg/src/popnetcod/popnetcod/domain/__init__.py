"""
Domain Layer

The core of the simulator, independent of configuration files and I/O:
- Models (packets, catalog, metrics)
- Exceptions
- Services: finite-field coding, content store, popularity, forwarding,
  endpoints and the discrete-event network
"""
