"""Decentralized runtime enforcement of LTL specifications."""

__version__ = "0.1.0"
