"""Valuation graphs on quotients ``D^x/N`` of exactly computable division rings."""

__version__ = "0.1.0"
