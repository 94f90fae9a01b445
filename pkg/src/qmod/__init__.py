"""Exact quaternion-order arithmetic for field-of-moduli bounds over Q."""

__version__ = "0.1.0"
