"""mcgkit: verification toolkit for finitely presented mapping class groups."""

__version__ = "0.1.0"
