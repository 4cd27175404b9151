"""Narrative framework discovery: actant networks from relationship tuples."""

__version__ = "0.1.0"
