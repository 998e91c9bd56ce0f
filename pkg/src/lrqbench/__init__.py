"""Linear-ramp QAOA benchmarking for Weighted MaxCut."""

__version__ = "0.1.0"
