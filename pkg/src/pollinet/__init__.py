"""Bipartite graph auto-encoder connectivity with feature attribution benchmarks."""

__version__ = "0.1.0"
