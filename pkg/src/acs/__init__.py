"""Local invariants of almost complex structures."""

__version__ = "0.1.0"
