"""Config-driven construction of policies, adapters and use cases."""
