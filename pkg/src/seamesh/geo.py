"""Planar geometry over the local east-north frame.

All positions are meters in a flat ENU frame anchored at a scenario origin;
sea level is the height datum. Geodetic input is projected once with an
equirectangular projection, which is accurate to well under a meter over the
few-kilometer working areas this tool targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple

from .errors import SeameshError

EARTH_RADIUS_M = 6_371_000.0

_DEG = math.pi / 180.0
_BOUNDARY_EPS = 1e-9


class GeoPoint(NamedTuple):
    lat: float
    lon: float


class EnuPoint(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with counterclockwise vertex order."""

    vertices: tuple[EnuPoint, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise SeameshError("DEGENERATE_HULL", "polygon needs at least 3 vertices")
        for v in self.vertices:
            if not (math.isfinite(v.x) and math.isfinite(v.y)):
                raise SeameshError("DEGENERATE_HULL", "non-finite vertex")


def project(origin: GeoPoint, p: GeoPoint) -> EnuPoint:
    """Project a geodetic point to local ENU meters around ``origin``."""
    dlat = p.lat - origin.lat
    dlon = p.lon - origin.lon
    if abs(dlat) >= 1.0 or abs(dlon) >= 1.0:
        raise SeameshError(
            "PROJECTION_RANGE",
            f"point ({p.lat}, {p.lon}) more than 1 degree from origin",
        )
    x = dlon * math.cos(origin.lat * _DEG) * EARTH_RADIUS_M * _DEG
    y = dlat * EARTH_RADIUS_M * _DEG
    return EnuPoint(x, y)


def unproject(origin: GeoPoint, p: EnuPoint) -> GeoPoint:
    """Inverse of :func:`project` for the same origin."""
    lat = origin.lat + p.y / (EARTH_RADIUS_M * _DEG)
    lon = origin.lon + p.x / (EARTH_RADIUS_M * _DEG * math.cos(origin.lat * _DEG))
    return GeoPoint(lat, lon)


def distance_2d(a: EnuPoint, b: EnuPoint) -> float:
    return math.hypot(b.x - a.x, b.y - a.y)


def distance_3d(a: EnuPoint, height_a: float, b: EnuPoint, height_b: float) -> float:
    """Euclidean distance between two antenna positions (heights above sea)."""
    return math.sqrt((b.x - a.x) ** 2 + (b.y - a.y) ** 2 + (height_b - height_a) ** 2)


def _cross(o: EnuPoint, a: EnuPoint, b: EnuPoint) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def convex_hull(points: Iterable[EnuPoint]) -> Polygon:
    """Monotone-chain convex hull; vertices CCW from the lexicographic minimum.

    Collinear boundary points are excluded, so the result is strictly convex.
    """
    pts = sorted(set((p[0], p[1]) for p in points))
    if len(pts) < 3:
        raise SeameshError("DEGENERATE_HULL", "need at least 3 distinct points")
    pts = [EnuPoint(*p) for p in pts]

    lower: list[EnuPoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[EnuPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise SeameshError("DEGENERATE_HULL", "all points collinear")
    return Polygon(tuple(hull))


def _segment_distance(p: EnuPoint, a: EnuPoint, b: EnuPoint) -> float:
    ax, ay = b.x - a.x, b.y - a.y
    seg_len2 = ax * ax + ay * ay
    if seg_len2 == 0.0:
        return distance_2d(p, a)
    t = ((p.x - a.x) * ax + (p.y - a.y) * ay) / seg_len2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * ax), p.y - (a.y + t * ay))


def point_in_polygon(p: EnuPoint, poly: Polygon) -> Literal["inside", "boundary", "outside"]:
    """Classify a point against a polygon; boundary tolerance is 1e-9 m."""
    vs = poly.vertices
    n = len(vs)
    for i in range(n):
        if _segment_distance(p, vs[i], vs[(i + 1) % n]) <= _BOUNDARY_EPS:
            return "boundary"
    # even-odd ray casting, ray toward +x
    inside = False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_cross:
                inside = not inside
    return "inside" if inside else "outside"


def clamp_to_disk(p: EnuPoint, center: EnuPoint, radius: float) -> EnuPoint:
    """Pull ``p`` back onto the disk around ``center`` if it lies outside.

    ``p == center`` returns ``center`` (the ray is undefined there).
    """
    dx = p.x - center.x
    dy = p.y - center.y
    d = math.hypot(dx, dy)
    if d <= radius:
        return p
    if d == 0.0:
        return center
    scale = radius / d
    return EnuPoint(center.x + dx * scale, center.y + dy * scale)
