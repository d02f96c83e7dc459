"""Run metrics middleware."""
