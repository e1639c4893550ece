"""Quantitative diagnostics: Lyapunov spectrum, periodic-orbit entropy,
box-counting dimension, and cone-field hyperbolicity checks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFit
from .parallel import CHUNK, chunk_spans, run_chunks
from .seeding import uniforms
from .solenoid import PointCloud, SolenoidMap, periodic_arrays
from .torus import TWO_PI, TorusPoint

_CONE_SEED = 0x5EED


def lyapunov_exponents(
    smap: SolenoidMap,
    x0: TorusPoint | None = None,
    steps: int = 10_000,
    *,
    transient: int = 100,
    ortho_every: int = 1,
) -> np.ndarray:
    """Average log growth rates along an orbit via QR re-orthonormalization.

    A transient is run before accumulation starts so the orthonormal frame can
    align with the invariant splitting; without it the estimate carries an
    O(1/steps) boundary term from the initial frame. x0 defaults to the map's
    fixed point, where the alignment is exact and the spectrum converges to
    machine precision. Returns the three exponents sorted descending.
    """
    if steps < 100:
        raise ValueError("steps must be >= 100")
    if ortho_every < 1:
        raise ValueError("ortho_every must be >= 1")
    if transient < 0:
        raise ValueError("transient must be >= 0")
    pt = smap.fixed_point() if x0 is None else x0
    frame = np.eye(3)
    for _ in range(transient):
        frame, _ = np.linalg.qr(smap.jacobian(pt) @ frame)
        pt = smap.apply(pt)
    sums = np.zeros(3)
    pending = 0
    for i in range(steps):
        frame = smap.jacobian(pt) @ frame
        pt = smap.apply(pt)
        pending += 1
        if pending == ortho_every or i == steps - 1:
            frame, r = np.linalg.qr(frame)
            sums += np.log(np.abs(np.diag(r)))
            pending = 0
    return np.sort(sums / steps)[::-1]


def entropy_estimate(smap: SolenoidMap, n_max: int) -> float:
    """log(number of points fixed by the n_max-th iterate) / n_max.

    Converges to log(winding) from below as n_max grows. n_max = 1 is the
    degenerate single-fixed-point case and returns 0.
    """
    if not 1 <= n_max <= 14:
        raise ValueError(f"n_max must lie in [1, 14], got {n_max}")
    theta, _, _, _ = periodic_arrays(smap, n_max, n_cap=14)
    return math.log(len(theta)) / n_max


@dataclass(frozen=True)
class DimensionReport:
    """Box-counting record: occupancy per scale and the fitted log-log slope."""

    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    r2: float

    def __post_init__(self) -> None:
        if any(s2 >= s1 for s1, s2 in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly decreasing")
        if any(c2 < c1 for c1, c2 in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be non-decreasing as scales shrink")
        if not 0.0 <= self.r2 <= 1.0:
            raise ValueError(f"r2 must lie in [0, 1], got {self.r2}")


def occupied_boxes(points: np.ndarray, scale: float, threads: int | None = None) -> int:
    """Number of occupied boxes of the given edge on the (theta, x, y) grid,
    theta treated periodically."""
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    n_theta = max(1, math.ceil(1.0 / scale))
    n_xy = math.ceil(2.0 / scale) + 1
    spans = chunk_spans(len(points))
    partial: list[np.ndarray | None] = [None] * len(spans)

    def work(lo: int, hi: int) -> None:
        block = points[lo:hi]
        it = np.floor(block[:, 0] / scale).astype(np.int64) % n_theta
        ix = np.floor((block[:, 1] + 1.0) / scale).astype(np.int64)
        iy = np.floor((block[:, 2] + 1.0) / scale).astype(np.int64)
        partial[lo // CHUNK] = np.unique((it * n_xy + ix) * n_xy + iy)

    run_chunks(work, len(points), threads)
    return len(np.unique(np.concatenate([p for p in partial if p is not None])))


def box_dimension(
    cloud: PointCloud,
    scales: list[float],
    threads: int | None = None,
) -> DimensionReport:
    """Fit the box-counting dimension of a cloud over the given scales.

    With six or more scales the largest and smallest are dropped from the fit;
    the end scales saturate first and bend the line.
    """
    if len(cloud) == 0:
        raise ValueError("cloud is empty")
    sc = sorted({float(s) for s in scales}, reverse=True)
    if len(sc) < 2:
        raise ValueError("need at least two distinct scales")
    counts = [occupied_boxes(cloud.points, s, threads) for s in sc]
    if len(set(counts)) == 1:
        raise DegenerateFit("occupancy does not change across scales")
    window = slice(1, -1) if len(sc) >= 6 else slice(None)
    logs = np.log(1.0 / np.asarray(sc[window]))
    logc = np.log(np.asarray(counts[window], dtype=float))
    slope, intercept = np.polyfit(logs, logc, 1)
    resid = logc - (slope * logs + intercept)
    total = logc - logc.mean()
    ss_tot = float(total @ total)
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - float(resid @ resid) / ss_tot)
    return DimensionReport(tuple(sc), tuple(counts), float(slope), min(r2, 1.0))


@dataclass(frozen=True)
class HyperbolicityReport:
    """Result of the cone-field check at aperture kappa."""

    kappa: float
    expansion_min: float
    contraction_max: float
    verified: bool

    def __post_init__(self) -> None:
        if self.verified and not (self.expansion_min > 1.0 and self.contraction_max < 1.0):
            raise ValueError("verified reports require expansion > 1 and contraction < 1")


def cone_check(smap: SolenoidMap, kappa: float, samples: int = 1000) -> HyperbolicityReport:
    """Check forward-invariance of the cone |v_fiber| <= kappa * |v_base|.

    At sampled points the derivative sends the cone boundary to tilt at most
    (2*pi*offset + contraction*kappa)/winding; verified means that stays
    within kappa while the base direction grows by at least the winding and
    pure fiber vectors by at most the contraction. A failed check is a result,
    not an error.
    """
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    thetas = uniforms(_CONE_SEED, 0, samples, 0)
    radii = np.sqrt(uniforms(_CONE_SEED, 0, samples, 1))
    angs = TWO_PI * uniforms(_CONE_SEED, 0, samples, 2)
    psis = TWO_PI * uniforms(_CONE_SEED, 0, samples, 3)

    max_tilt = 0.0
    expansion_min = math.inf
    contraction_max = 0.0
    for theta, r, a, psi in zip(thetas, radii, angs, psis):
        pt = TorusPoint(float(theta), float(r * math.cos(a)), float(r * math.sin(a)))
        jac = smap.jacobian(pt)
        base_ang = TWO_PI * pt.theta
        # A random cone-boundary direction plus the worst one, where the
        # fiber part aligns with the coupling column.
        for fx, fy in (
            (math.cos(psi), math.sin(psi)),
            (-math.sin(base_ang), math.cos(base_ang)),
        ):
            img = jac @ (1.0, kappa * fx, kappa * fy)
            max_tilt = max(max_tilt, math.hypot(img[1], img[2]) / abs(img[0]))
            expansion_min = min(expansion_min, abs(img[0]))
            fiber_img = jac @ (0.0, fx, fy)
            contraction_max = max(contraction_max, math.hypot(fiber_img[1], fiber_img[2]))
    verified = max_tilt <= kappa and expansion_min > 1.0 and contraction_max < 1.0
    return HyperbolicityReport(kappa, expansion_min, contraction_max, verified)
