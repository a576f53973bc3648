"""RPH decagonal tilings built by generalized point substitution."""

__version__ = "0.1.0"
