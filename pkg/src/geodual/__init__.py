"""Geodesic self-dual triangulated surfaces: flag systems, triangle groups,
coset enumeration, classification and voltage lifts."""

from __future__ import annotations

from .classify import classify, verify_collapse_identity, verify_uncollapsed
from .fpgroup import coset_enumeration, geodesic_presentation, triangle_presentation
from .surface import FlagSurface, geodesic_dual, is_geodesic_self_dual, parse_surface, stats, validate

__all__ = [
    "FlagSurface",
    "classify",
    "coset_enumeration",
    "geodesic_dual",
    "geodesic_presentation",
    "is_geodesic_self_dual",
    "parse_surface",
    "stats",
    "triangle_presentation",
    "validate",
    "verify_collapse_identity",
    "verify_uncollapsed",
]
