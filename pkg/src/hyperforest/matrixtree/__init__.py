"""Determinants, matrix-tree oracles and the generalized oriented-configuration theorem."""

from __future__ import annotations

from .determinants import det, det_sum_expansion_check, graphical_det_checks

__all__ = ["det", "det_sum_expansion_check", "graphical_det_checks"]
