"""Exact quantum-corrected cup products for crepant resolutions and orbifolds."""

__version__ = "0.1.0"
