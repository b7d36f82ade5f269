"""Exact certificates for polynomial relations among split period matrices."""

__version__ = "0.1.0"
