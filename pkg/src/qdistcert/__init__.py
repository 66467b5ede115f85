"""Certified minimum-distance computation for quantum stabilizer codes via SAT."""

__version__ = "0.1.0"
