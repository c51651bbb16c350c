"""Vector-relation configurations on planar bipartite graphs, computed exactly over the rationals."""

__version__ = "0.1.0"
