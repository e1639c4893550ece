"""Geometry of the solid torus S^1 x D^2: points, angle wrapping, metric.

Angles are stored as fractions of a full turn so that mod-1 arithmetic stays
exact near wrap-around; radians appear only inside trigonometric calls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Fiber coordinates may sit on |z| = 1 plus rounding noise.
DISC_TOL = 1e-9

TWO_PI = 2.0 * math.pi


def wrap_turn(t: float) -> float:
    """Reduce an angle in turns into [0, 1)."""
    r = t % 1.0
    # t % 1.0 rounds up to exactly 1.0 for tiny negative t.
    return 0.0 if r >= 1.0 else r


def unit_vector(t: float) -> tuple[float, float]:
    """Unit vector in the fiber plane at angle t turns."""
    a = TWO_PI * t
    return (math.cos(a), math.sin(a))


def arc_distance(t1: float, t2: float) -> float:
    """Shortest angular separation in turns."""
    d = abs(t1 - t2) % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class TorusPoint:
    """A point of the solid torus: base angle in turns, fiber point in the
    closed unit disc."""

    theta: float
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("torus point coordinates must be finite")
        object.__setattr__(self, "theta", wrap_turn(self.theta))
        if self.x * self.x + self.y * self.y > 1.0 + DISC_TOL:
            raise ValueError(f"fiber point ({self.x}, {self.y}) lies outside the unit disc")

    @property
    def z(self) -> tuple[float, float]:
        return (self.x, self.y)

    def fiber_radius(self) -> float:
        return math.hypot(self.x, self.y)

    def fiber_angle(self) -> float:
        """Angle of the fiber coordinates in turns; 0 at the fiber origin."""
        if self.x == 0.0 and self.y == 0.0:
            return 0.0
        return wrap_turn(math.atan2(self.y, self.x) / TWO_PI)


def torus_distance(a: TorusPoint, b: TorusPoint) -> float:
    """Metric used throughout: base arc on a radius-1 circle combined with the
    straight-line fiber distance."""
    arc = TWO_PI * arc_distance(a.theta, b.theta)
    return math.sqrt(arc * arc + (a.x - b.x) ** 2 + (a.y - b.y) ** 2)


def distances_to_cloud(p: TorusPoint, points: np.ndarray) -> np.ndarray:
    """Distances from p to every row (theta, x, y) of a point array."""
    d = np.abs(points[:, 0] - p.theta) % 1.0
    arc = TWO_PI * np.minimum(d, 1.0 - d)
    return np.sqrt(arc * arc + (points[:, 1] - p.x) ** 2 + (points[:, 2] - p.y) ** 2)
