"""Ends, almost-stable subsets and shift-continuous topologies on groups with zero."""
from __future__ import annotations

__version__ = "0.1.0"

from .groups import Flexibility, Group, make_group, parse_element

__all__ = ["Flexibility", "Group", "make_group", "parse_element", "__version__"]
