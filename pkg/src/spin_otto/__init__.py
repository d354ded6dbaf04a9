"""Two-spin anisotropic XY quantum Otto cycle."""

__version__ = "0.1.0"
