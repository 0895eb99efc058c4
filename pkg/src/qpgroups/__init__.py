"""Primitive deformations of restricted enveloping algebras over finite fields."""

from .gf import Field, Scalar

__version__ = "0.1.0"
__all__ = ["Field", "Scalar"]
