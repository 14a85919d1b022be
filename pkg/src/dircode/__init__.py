"""Direction spectra in AG(2,q) and the line code of PG(2,q)."""

__version__ = "0.1.0"
