"""Generalized Adler-Moser polynomial generation, balanced vortex-ring
configurations and the elliptic ring potential."""

__version__ = "0.1.0"
