"""Exact super linear algebra and super Pluecker coordinates."""

__version__ = "0.1.0"
