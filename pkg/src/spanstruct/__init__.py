"""Dissociated spans of sets with large additive energy or small doubling."""
__version__ = "0.1.0"
