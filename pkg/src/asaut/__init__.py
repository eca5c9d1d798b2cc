"""Automorphism groups of 2-rank zero Artin-Schreier curves in characteristic 2."""

__version__ = "0.1.0"
