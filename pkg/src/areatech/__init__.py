"""Area and technique extraction from scientific full-text corpora."""

__version__ = "0.1.0"
