"""exchci: conditional independence structure of finitely exchangeable random vectors and random networks."""

__version__ = "0.1.0"
