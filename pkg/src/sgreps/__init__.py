"""sgreps: exact tools for dyadic matroids and their signed-graph representations."""

__version__ = "0.1.0"
