"""Boltzmann bipartite planar maps from labelled two-type trees."""

__version__ = "0.1.0"
