"""Quantum-illumination receiver simulator: SFG and feed-forward SFG."""

__version__ = "0.1.0"
