"""Deformed canonical commutation relations: exact operator algebra,
closed-form spectra and an independent numerical eigensolver check."""

__version__ = "0.1.0"
