"""One-shot pose-driven face animation platform."""

__version__ = "0.1.0"
