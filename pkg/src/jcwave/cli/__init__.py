"""Command line interface: scenario files, presets and output writers."""
from .main import main

__all__ = ["main"]
