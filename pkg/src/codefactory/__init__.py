"""Construct and verify classical and quantum LDPC codes as GF(2) chain complexes."""

__version__ = "0.1.0"
