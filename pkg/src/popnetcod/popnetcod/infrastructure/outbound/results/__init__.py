"""Results writers."""
