"""Exact Grassmann-integral and spanning-hyperforest identities."""

from __future__ import annotations

__version__ = "0.1.0"
