"""Bypass operations on directed multigraphs, the cyclic category, Eulerian
tours and the itinerary cyclic set, with exact homology for checking them."""

from . import cyclic, enriched, eulerian, graphcat, homology, thh

__all__ = ["cyclic", "enriched", "eulerian", "graphcat", "homology", "thh"]
__version__ = "0.1.0"
