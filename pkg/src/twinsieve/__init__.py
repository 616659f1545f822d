"""Desk-scale laboratory for binary Goldbach convolutions with almost twin primes."""

__version__ = "0.1.0"
