"""The expanding solid-torus embedding and its dynamics.

The map sends (theta, z) to (w*theta mod 1, z/w^2 + eps*u(theta)) where u is
the unit vector at angle theta. It wraps the torus w times around the base
while shrinking each fiber disc onto one of w disjoint sheet discs of radius
exactly 1/w^2, centered on a circle of radius eps. Iterating it squeezes the
torus onto a nested intersection of thinner and thinner tubes; this module
constructs the map, inverts it on its image, differentiates it, enumerates
its periodic points, and samples the limit set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ImageEscapes, NotInImage, Overflow, SheetOverlap, WindingTooSmall
from .parallel import run_chunks
from .seeding import uniforms
from .torus import DISC_TOL, TWO_PI, TorusPoint, unit_vector, wrap_turn

# Streams of the counter-based sampler, one per independent coordinate.
_STREAM_THETA, _STREAM_RADIUS, _STREAM_ANGLE = 0, 1, 2

# Fiber fixed points are iterated until sweeps move less than this.
FIBER_FIXED_TOL = 1e-13

# Sheet discs are closed; allow a hair of rounding slack on membership.
SHEET_SLACK = 1e-12

DEFAULT_PERIOD_CAP = 12
DEFAULT_ENUM_BUDGET = 5_000_000


@dataclass(frozen=True)
class SolenoidMap:
    """Parameters of the embedding: integer winding and sheet-center offset.

    The fiber contraction is tied to the winding (1/winding^2), which is what
    makes the image discs thin enough to braid disjointly. Use
    make_solenoid_map to get the embedding conditions checked; direct
    construction skips validation (occasionally useful for degenerate
    configurations in tests).
    """

    winding: int
    offset: float

    @property
    def contraction(self) -> float:
        """Fiber scale factor; every image sheet disc has exactly this radius."""
        return 1.0 / (self.winding * self.winding)

    def apply(self, pt: TorusPoint) -> TorusPoint:
        """Forward map; output fiber point lies strictly inside the disc."""
        cx, cy = unit_vector(pt.theta)
        return TorusPoint(
            wrap_turn(self.winding * pt.theta),
            self.contraction * pt.x + self.offset * cx,
            self.contraction * pt.y + self.offset * cy,
        )

    def sheet_centers(self, theta_out: float) -> list[tuple[float, tuple[float, float]]]:
        """(source angle, fiber center) of each sheet over an output angle."""
        t = wrap_turn(theta_out)
        out = []
        for j in range(self.winding):
            src = (t + j) / self.winding
            cx, cy = unit_vector(src)
            out.append((src, (self.offset * cx, self.offset * cy)))
        return out

    def locate_sheet(self, pt: TorusPoint) -> int | None:
        """Index of the sheet disc containing pt, or None when outside the image.

        Sheets are pairwise disjoint for validated parameters, so the first
        hit is the only hit.
        """
        lam = self.contraction
        for j, (_, (cx, cy)) in enumerate(self.sheet_centers(pt.theta)):
            if math.hypot(pt.x - cx, pt.y - cy) <= lam * (1.0 + SHEET_SLACK):
                return j
        return None

    def apply_inverse(self, pt: TorusPoint) -> TorusPoint:
        """Unique preimage of a point of the image; NotInImage otherwise."""
        lam = self.contraction
        for src, (cx, cy) in self.sheet_centers(pt.theta):
            dx, dy = pt.x - cx, pt.y - cy
            if math.hypot(dx, dy) <= lam * (1.0 + SHEET_SLACK):
                return TorusPoint(src, dx / lam, dy / lam)
        raise NotInImage(
            f"point (theta={pt.theta}, z=({pt.x}, {pt.y})) lies in no sheet disc"
        )

    def jacobian(self, pt: TorusPoint) -> np.ndarray:
        """Derivative in (theta, x, y) with the base direction lifted (no mod)."""
        lam = self.contraction
        cx, cy = unit_vector(pt.theta)
        return np.array(
            [
                [float(self.winding), 0.0, 0.0],
                [-TWO_PI * self.offset * cy, lam, 0.0],
                [TWO_PI * self.offset * cx, 0.0, lam],
            ]
        )

    def fixed_point(self) -> TorusPoint:
        """The unique fixed point: base angle 0, fiber on the positive x-axis."""
        return TorusPoint(0.0, self.offset / (1.0 - self.contraction), 0.0)


def make_solenoid_map(w: int, eps: float) -> SolenoidMap:
    """Validated constructor.

    Rejects windings below 2, offsets too small to keep the w sheet discs
    disjoint (chord 2*eps*sin(pi/w) must exceed the disc diameter 2/w^2), and
    offsets so large the image touches the torus boundary.
    """
    w = int(w)
    eps = float(eps)
    if w < 2:
        raise WindingTooSmall(f"winding must be an integer >= 2, got {w}")
    lam = 1.0 / (w * w)
    if not eps * math.sin(math.pi / w) > lam:
        raise SheetOverlap(
            f"eps*sin(pi/w) = {eps * math.sin(math.pi / w):.6g} must exceed 1/w^2 = {lam:.6g}"
        )
    if lam + eps >= 1.0:
        raise ImageEscapes(f"1/w^2 + eps = {lam + eps:.6g} must stay below 1")
    return SolenoidMap(w, eps)


@dataclass(frozen=True)
class CloudMeta:
    """Provenance of a sampled cloud."""

    winding: int
    offset: float
    depth: int
    samples: int
    seed: int


@dataclass(frozen=True)
class PointCloud:
    """Rows of (theta, x, y). meta is None for clouds loaded from disk."""

    points: np.ndarray
    meta: CloudMeta | None = None

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array of (theta, x, y)")
        object.__setattr__(self, "points", pts)
        if pts.size:
            if pts[:, 0].min() < 0.0 or pts[:, 0].max() >= 1.0:
                raise ValueError("theta column must lie in [0, 1)")
            if (pts[:, 1] ** 2 + pts[:, 2] ** 2).max() > 1.0 + DISC_TOL:
                raise ValueError("fiber columns must lie in the unit disc")
        if self.meta is not None and self.meta.depth < 1:
            raise ValueError("cloud meta depth must be >= 1")

    def __len__(self) -> int:
        return len(self.points)


def _iterate_arrays(
    smap: SolenoidMap,
    theta: np.ndarray,
    zx: np.ndarray,
    zy: np.ndarray,
    depth: int,
) -> None:
    """Forward-iterate coordinate arrays in place."""
    w = float(smap.winding)
    lam = smap.contraction
    eps = smap.offset
    for _ in range(depth):
        ang = TWO_PI * theta
        zx *= lam
        zx += eps * np.cos(ang)
        zy *= lam
        zy += eps * np.sin(ang)
        theta *= w
        theta %= 1.0
        theta[theta >= 1.0] = 0.0  # guard the mod-rounding edge


def sample_attractor(
    smap: SolenoidMap,
    depth: int,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> PointCloud:
    """Push seeded uniform starts through `depth` iterations of the map.

    Start i is a pure function of (seed, i), so the cloud is bit-identical for
    any thread count or execution order. Each returned point lies within
    contraction**depth * 2 of the true limit set.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    out = np.empty((samples, 3))

    def work(lo: int, hi: int) -> None:
        n = hi - lo
        theta = uniforms(seed, lo, n, _STREAM_THETA)
        r = np.sqrt(uniforms(seed, lo, n, _STREAM_RADIUS))
        a = TWO_PI * uniforms(seed, lo, n, _STREAM_ANGLE)
        zx = r * np.cos(a)
        zy = r * np.sin(a)
        _iterate_arrays(smap, theta, zx, zy, depth)
        out[lo:hi, 0] = theta
        out[lo:hi, 1] = zx
        out[lo:hi, 2] = zy

    run_chunks(work, samples, threads)
    return PointCloud(out, CloudMeta(smap.winding, smap.offset, depth, samples, seed))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def periodic_arrays(
    smap: SolenoidMap,
    n: int,
    *,
    n_cap: int = DEFAULT_PERIOD_CAP,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All points fixed by the n-th iterate, as coordinate arrays.

    Base angles are the k/(w^n - 1); over each, the n-step fiber map is an
    affine contraction whose fixed point we iterate out to FIBER_FIXED_TOL.
    Minimal periods come from exact integer divisibility of the base
    rationals, never from floating comparisons.

    Returns (theta, x, y, minimal_period) arrays of length w^n - 1.
    """
    if not 1 <= n <= n_cap:
        raise ValueError(f"n must lie in [1, {n_cap}], got {n}")
    w = smap.winding
    count = w**n - 1
    if count > budget:
        raise Overflow(f"w^n - 1 = {count} exceeds the enumeration budget {budget}")

    lam = smap.contraction
    eps = smap.offset
    k = np.arange(count, dtype=np.int64)
    zx = np.zeros(count)
    zy = np.zeros(count)
    # Each sweep applies the n-step fiber contraction once (rate lam^n).
    for _ in range(200):
        px, py = zx.copy(), zy.copy()
        kj = k
        for _ in range(n):
            ang = (TWO_PI / count) * kj
            zx = lam * zx + eps * np.cos(ang)
            zy = lam * zy + eps * np.sin(ang)
            kj = (kj * w) % count
        delta = max(np.abs(zx - px).max(), np.abs(zy - py).max())
        if delta < FIBER_FIXED_TOL:
            break
    else:
        raise RuntimeError("fiber fixed-point iteration failed to converge")

    period = np.full(count, n, dtype=np.int64)
    assigned = np.zeros(count, dtype=bool)
    for d in _divisors(n)[:-1]:
        mask = ~assigned & ((k * (w**d - 1)) % count == 0)
        period[mask] = d
        assigned |= mask

    return k / count, zx, zy, period


def periodic_points(
    smap: SolenoidMap,
    n: int,
    *,
    n_cap: int = DEFAULT_PERIOD_CAP,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> list[tuple[TorusPoint, int]]:
    """Points fixed by the n-th iterate with their minimal periods.

    Exactly w^n - 1 of them; every minimal period divides n.
    """
    theta, zx, zy, period = periodic_arrays(smap, n, n_cap=n_cap, budget=budget)
    return [
        (TorusPoint(float(theta[i]), float(zx[i]), float(zy[i])), int(period[i]))
        for i in range(len(theta))
    ]


def attractor_fiber_distance(
    smap: SolenoidMap, pt: TorusPoint, depth: int, tol: float = 1e-14
) -> float:
    """Distance from pt's fiber coordinates to the depth-`depth` forward image
    of the solid torus over the same base angle, exact to +-tol.

    The image slice over a base angle is a union of winding**depth discs
    indexed by preimage chains. Branch-and-bound over the chain tree prunes
    far branches and settles a branch once the envelope its center can still
    reach is below tol; without the tolerance the number of chains inside the
    best-ball grows like a power of the ball/scale ratio and the walk degrades
    to enumerating Cantor dust.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    w = smap.winding
    lam = smap.contraction
    eps = smap.offset
    disc_radius = lam**depth
    # Bound on how far the sheet center can still move after level k.
    tail = eps / (1.0 - lam)

    best = math.inf
    # Stack entries: (level, theta, cx, cy); center accrues lam^level * eps * u.
    stack: list[tuple[int, float, float, float]] = [(0, pt.theta, 0.0, 0.0)]
    while stack:
        level, theta, cx, cy = stack.pop()
        envelope = tail * lam**level
        gap = math.hypot(pt.x - cx, pt.y - cy)
        if gap - envelope - disc_radius >= best:
            continue
        if level == depth or envelope <= tol:
            best = min(best, max(gap - disc_radius, 0.0))
            continue
        scale = lam**level
        children = []
        for j in range(w):
            src = (theta + j) / w
            ux, uy = unit_vector(src)
            ncx = cx + scale * eps * ux
            ncy = cy + scale * eps * uy
            children.append((math.hypot(pt.x - ncx, pt.y - ncy), src, ncx, ncy))
        # Nearest child explored last (popped first).
        children.sort(key=lambda c: -c[0])
        for _, src, ncx, ncy in children:
            stack.append((level + 1, src, ncx, ncy))
    return best
