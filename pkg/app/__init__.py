"""Torus Bundles - classification of finite isometric actions on flat 2-tori and their equivariant vector bundles."""

__version__ = "0.1.0"
