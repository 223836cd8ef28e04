"""Scientometric question answering over a local bibliometric corpus."""

__version__ = "0.1.0"
