"""Exact intersection calculus for theta divisors of bielliptic Prym varieties."""

__version__ = "0.1.0"
