"""Parliamentary debate synopsis corpus toolkit."""

__version__ = "0.1.0"
