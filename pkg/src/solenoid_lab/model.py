"""Piecewise dynamics on the glued pair of solid tori.

Forward motion contracts chart 2 onto its limit set, expands inside the
chart-1 sheet discs (the inverse embedding), and moves everything else across
the boundary into chart 2 in a single transit. Backward motion mirrors the
roles. The transit is a surrogate: it preserves the boundary-angle
combinatorics and the once-only absorption property, which is all the
orbit-level statements need, but it is not claimed to be smooth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lens import BoundaryAngles, GluingMatrix, complete_gluing, transfer_boundary
from .seeding import uniforms
from .solenoid import PointCloud, SolenoidMap, make_solenoid_map
from .torus import TWO_PI, TorusPoint, distances_to_cloud, torus_distance, unit_vector, wrap_turn

# Radius at which transit re-inserts a point into the receiving chart.
TRANSIT_RADIUS = 0.9

# Self-reproduction threshold for the repeller test.
FIXED_POINT_TOL = 1e-12

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class BraidGeometry:
    """Closed strand curve winding `strands` times around the base, with a
    disjoint tube of the given radius around it."""

    strands: int
    tube_radius: float
    twist: int = 0

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise ValueError(f"strands must be >= 2, got {self.strands}")
        if not 0.0 < self.tube_radius < 1.0 / self.strands**2:
            raise ValueError("tube radius must lie in (0, 1/strands^2)")


@dataclass(frozen=True)
class ManifoldPoint:
    """A point of the glued manifold: which chart, and where in it."""

    chart: int
    pt: TorusPoint

    def __post_init__(self) -> None:
        if self.chart not in (1, 2):
            raise ValueError(f"chart must be 1 or 2, got {self.chart}")


class OrbitOutcome(Enum):
    CONVERGED_TO_ATTRACTOR = "ConvergedToAttractor"
    ON_REPELLER = "OnRepeller"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class OrbitFate:
    """Classification of one forward orbit."""

    kind: OrbitOutcome
    transit_step: int | None
    final_distance: float

    def __post_init__(self) -> None:
        converged = self.kind is OrbitOutcome.CONVERGED_TO_ATTRACTOR
        if converged != (self.transit_step is not None):
            raise ValueError("transit_step is recorded exactly for converged orbits")


@dataclass(frozen=True)
class GlobalModel:
    """The assembled dynamics: gluing data, winding, one embedding per chart,
    and the braid-tube geometry."""

    gluing: GluingMatrix
    multiplier: int
    winding: int
    chart1_map: SolenoidMap
    chart2_map: SolenoidMap
    braid: BraidGeometry

    def braid_center(self, chart: int, t: float) -> TorusPoint:
        """Point of the strand curve at parameter t (one full traversal).

        The base angle advances `winding` times per traversal; the twist adds
        whole extra turns of the strand ring, which leaves the per-fiber
        strand positions (and hence disjointness) unchanged.
        """
        if chart not in (1, 2):
            raise ValueError(f"chart must be 1 or 2, got {chart}")
        smap = self.chart1_map if chart == 1 else self.chart2_map
        t = wrap_turn(t)
        cx, cy = unit_vector(t * (1 + self.braid.twist * self.winding))
        return TorusPoint(wrap_turn(self.winding * t), smap.offset * cx, smap.offset * cy)

    def canonicalize(self, x: ManifoldPoint) -> ManifoldPoint:
        """Boundary points are stored in chart 1."""
        if x.chart == 2 and x.pt.fiber_radius() >= 1.0 - _BOUNDARY_TOL:
            moved = transfer_boundary(
                self.gluing, BoundaryAngles(x.pt.theta, x.pt.fiber_angle(), 2)
            )
            cx, cy = unit_vector(moved.beta)
            return ManifoldPoint(1, TorusPoint(moved.alpha, cx, cy))
        return x

    def _insert(self, smap: SolenoidMap, b: BoundaryAngles) -> TorusPoint:
        """Re-insert transferred boundary angles into a chart, off the sheets."""
        cx, cy = unit_vector(b.beta)
        cand = TorusPoint(b.alpha, TRANSIT_RADIUS * cx, TRANSIT_RADIUS * cy)
        if smap.locate_sheet(cand) is not None:
            # Push past the sheet ring: midway between its outer edge and the
            # torus boundary. Everything beyond offset + contraction is clear.
            radius = 0.5 * (smap.offset + smap.contraction + 1.0)
            cand = TorusPoint(b.alpha, radius * cx, radius * cy)
        return cand

    def step(self, x: ManifoldPoint) -> ManifoldPoint:
        """One forward move.

        Chart 2 contracts in place; chart-1 points inside the sheet discs
        expand by the inverse embedding; everything else transits into chart 2
        outside the chart-2 sheets. Once in chart 2, orbits stay there.
        """
        x = self.canonicalize(x)
        if x.chart == 2:
            return ManifoldPoint(2, self.chart2_map.apply(x.pt))
        if self.chart1_map.locate_sheet(x.pt) is not None:
            return ManifoldPoint(1, self.chart1_map.apply_inverse(x.pt))
        moved = transfer_boundary(
            self.gluing, BoundaryAngles(x.pt.theta, x.pt.fiber_angle(), 1)
        )
        return ManifoldPoint(2, self._insert(self.chart2_map, moved))

    def step_back(self, x: ManifoldPoint) -> ManifoldPoint:
        """One backward move: the mirror of step with the charts exchanged.

        Inverts step exactly on the contraction and expansion regions; on the
        transit region the two surrogates are not inverse to each other.
        """
        x = self.canonicalize(x)
        if x.chart == 1:
            return ManifoldPoint(1, self.chart1_map.apply(x.pt))
        if self.chart2_map.locate_sheet(x.pt) is not None:
            return ManifoldPoint(2, self.chart2_map.apply_inverse(x.pt))
        moved = transfer_boundary(
            self.gluing, BoundaryAngles(x.pt.theta, x.pt.fiber_angle(), 2)
        )
        return ManifoldPoint(1, self._insert(self.chart1_map, moved))

    def orbit(self, x: ManifoldPoint, steps: int, backward: bool = False) -> list[ManifoldPoint]:
        """[x, f(x), ..., f^steps(x)], or the backward analogue."""
        mover = self.step_back if backward else self.step
        out = [self.canonicalize(x)]
        for _ in range(steps):
            out.append(mover(out[-1]))
        return out

    def classify_orbit(
        self,
        x: ManifoldPoint,
        max_steps: int,
        attractor_ref: PointCloud,
    ) -> OrbitFate:
        """Iterate forward and classify.

        Converged: the distance to the reference cloud drops below
        10 * contraction**k after k post-transit steps. OnRepeller: the point
        reproduces itself to FIXED_POINT_TOL while staying inside the chart-1
        sheets. Undecided otherwise.
        """
        if attractor_ref.meta is not None and attractor_ref.meta.depth < 20:
            raise ValueError("attractor reference must be sampled at depth >= 20")
        if len(attractor_ref) == 0:
            raise ValueError("attractor reference is empty")
        lam = self.chart2_map.contraction
        cur = self.canonicalize(x)
        transit: int | None = 0 if cur.chart == 2 else None
        dist = math.inf
        for n in range(max_steps + 1):
            if cur.chart == 2:
                assert transit is not None
                dist = float(distances_to_cloud(cur.pt, attractor_ref.points).min())
                if dist < 10.0 * lam ** (n - transit):
                    return OrbitFate(OrbitOutcome.CONVERGED_TO_ATTRACTOR, transit, dist)
                if n == max_steps:
                    break
                cur = ManifoldPoint(2, self.chart2_map.apply(cur.pt))
            else:
                if n == max_steps:
                    break
                nxt = self.step(cur)
                if nxt.chart == 1:
                    residual = torus_distance(cur.pt, nxt.pt)
                    if residual < FIXED_POINT_TOL:
                        return OrbitFate(OrbitOutcome.ON_REPELLER, None, residual)
                cur = nxt
                if cur.chart == 2 and transit is None:
                    transit = n + 1
        return OrbitFate(OrbitOutcome.UNDECIDED, None, dist)


def build_model(p: int, q: int, m: int, eps: float = 0.5) -> GlobalModel:
    """Assemble the model on the (p, q) gluing with winding m*p + 1.

    Both charts carry the same embedding parameters; the braid tube radius
    defaults to half the width that keeps strands separated, 1/(2*strands^2).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    gluing = complete_gluing(p, q)
    w = m * gluing.p + 1
    smap = make_solenoid_map(w, eps)
    braid = BraidGeometry(strands=w, tube_radius=1.0 / (2 * w * w), twist=0)
    return GlobalModel(
        gluing=gluing,
        multiplier=m,
        winding=w,
        chart1_map=smap,
        chart2_map=smap,
        braid=braid,
    )


def braid_winding(model: GlobalModel, chart: int = 1, samples: int = 4096) -> int:
    """Longitude winding of the braid curve, read off an accumulated lift.

    Each parameter increment moves the base angle by winding/samples of a
    turn, well under the half-turn ambiguity bound.
    """
    prev = model.braid_center(chart, 0.0).theta
    lift = 0.0
    for i in range(1, samples + 1):
        cur = model.braid_center(chart, (i % samples) / samples).theta
        lift += (cur - prev + 0.5) % 1.0 - 0.5
        prev = cur
    return round(lift)


def random_manifold_points(count: int, seed: int) -> list[ManifoldPoint]:
    """Seeded uniform starts across both charts (counter-based, so the list
    never depends on execution order)."""
    theta = uniforms(seed, 0, count, 0)
    r = np.sqrt(uniforms(seed, 0, count, 1))
    ang = TWO_PI * uniforms(seed, 0, count, 2)
    chart = np.where(uniforms(seed, 0, count, 3) < 0.5, 1, 2)
    return [
        ManifoldPoint(
            int(chart[i]),
            TorusPoint(
                float(theta[i]),
                float(r[i] * math.cos(ang[i])),
                float(r[i] * math.sin(ang[i])),
            ),
        )
        for i in range(count)
    ]
