"""Hybrid lexicon + supervised classification of short social-media posts."""

__version__ = "0.1.0"
