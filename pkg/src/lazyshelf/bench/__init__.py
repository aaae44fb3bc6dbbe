"""Benchmark harness and scene rendering."""
