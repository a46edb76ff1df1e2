"""Spectra toolchain: parse, check, lower, synthesize, execute, analyze."""

__version__ = "0.1.0"
