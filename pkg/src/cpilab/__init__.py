"""Chirped-pulse interferometry simulator with a two-photon coincidence oracle."""

__version__ = "0.1.0"
