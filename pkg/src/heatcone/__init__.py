"""Singular heat-trace terms of cones over closed cross-sections."""
__version__ = "0.1.0"
