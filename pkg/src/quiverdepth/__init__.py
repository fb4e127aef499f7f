"""Exact computation of subring depth for subalgebras of acyclic path algebras."""

__version__ = "0.1.0"
