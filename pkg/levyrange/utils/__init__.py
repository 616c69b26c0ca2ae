"""Utility helpers for levyrange (logging, profiling, numerics, CSV output)."""
