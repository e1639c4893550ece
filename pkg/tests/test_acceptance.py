"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its elapsed time (run with `pytest -s` to see the lines as they pass).
"""
import contextlib
import json
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import solenoid_lab as sl
from solenoid_lab.torus import TWO_PI


@contextlib.contextmanager
def criterion(label, budget=None):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[acceptance] {label}: FAIL ({time.perf_counter() - t0:.2f}s)")
        raise
    elapsed = time.perf_counter() - t0
    if budget is not None and elapsed >= budget:
        print(f"[acceptance] {label}: FAIL (runtime {elapsed:.2f}s over {budget:.0f}s budget)")
        raise AssertionError(f"{label}: runtime {elapsed:.2f}s exceeds {budget}s")
    print(f"[acceptance] {label}: PASS ({elapsed:.2f}s)")


def iterate_oracle(w, eps, theta, zx, zy, steps):
    # test-side forward iteration, independent of the library's vector path
    lam = 1.0 / (w * w)
    for _ in range(steps):
        ang = TWO_PI * theta
        zx, zy = lam * zx + eps * np.cos(ang), lam * zy + eps * np.sin(ang)
        theta = (w * theta) % 1.0
        theta[theta >= 1.0] = 0.0
    return theta, zx, zy


def test_criterion_1_periodic_count_law():
    with criterion("1 periodic-count law", budget=10):
        for w in (2, 3, 6):
            smap = sl.make_solenoid_map(w, 0.5)
            for n in range(1, 7):
                pts = sl.periodic_points(smap, n)
                assert len(pts) == w**n - 1
                theta = np.array([p.theta for p, _ in pts])
                zx = np.array([p.x for p, _ in pts])
                zy = np.array([p.y for p, _ in pts])
                t2, x2, y2 = iterate_oracle(w, 0.5, theta.copy(), zx.copy(), zy.copy(), n)
                darc = np.abs(t2 - theta) % 1.0
                arc = TWO_PI * np.minimum(darc, 1.0 - darc)
                dist = np.sqrt(arc**2 + (x2 - zx) ** 2 + (y2 - zy) ** 2)
                assert dist.max() < 1e-10
                assert all(n % period == 0 for _, period in pts)


def test_criterion_2_lyapunov_spectrum():
    with criterion("2 Lyapunov spectrum", budget=1):
        for w in (2, 3):
            exps = sl.lyapunov_exponents(sl.make_solenoid_map(w, 0.5), steps=10_000)
            want = np.array([math.log(w), -2 * math.log(w), -2 * math.log(w)])
            assert np.abs(exps - want).max() < 1e-6


def test_criterion_3_entropy():
    with criterion("3 entropy", budget=5):
        est = sl.entropy_estimate(sl.make_solenoid_map(2, 0.5), 12)
        assert est == pytest.approx(math.log(4095) / 12, abs=1e-12)
        assert abs(est - math.log(2)) <= 0.0005


def test_criterion_4_dimension():
    with criterion("4 box dimension", budget=60):
        cloud = sl.sample_attractor(sl.make_solenoid_map(2, 0.5), 40, 10**6, seed=1234)
        report = sl.box_dimension(cloud, [2.0**-k for k in range(3, 10)])
        assert 1.35 <= report.slope <= 1.65
        assert report.r2 >= 0.99


def test_criterion_5_gluing_algebra():
    with criterion("5 gluing algebra", budget=1):
        assert (lambda g: (g.p, g.q, g.r, g.s))(sl.complete_gluing(5, -2)) == (5, -2, -2, 1)
        for p in range(1, 51):
            for q in range(-(p - 1), p):
                if math.gcd(p, abs(q)) != 1:
                    continue
                g = sl.complete_gluing(p, q)
                assert g.p * g.s - g.q * g.r == 1
                # exact round trip: the integer transfer matrices invert
                (a, b), (c, d) = g.angle_matrix()
                (e, f), (gg, h) = g.angle_matrix_inverse()
                assert (a * e + b * gg, a * f + b * h) == (1, 0)
                assert (c * e + d * gg, c * f + d * h) == (0, 1)
                probe = sl.transfer_boundary(
                    g, sl.transfer_boundary(g, sl.BoundaryAngles(0.3, 0.7, 2))
                )
                assert abs(probe.alpha - 0.3) < 1e-12 and abs(probe.beta - 0.7) < 1e-12
                assert sl.h1_order(g) == p


def test_criterion_6_embedding_conditions():
    with criterion("6 embedding conditions", budget=5):
        grid = np.arange(10**4) / 10**4
        for w in range(2, 65):
            smap = sl.make_solenoid_map(w, 0.5)
            lam, eps = smap.contraction, smap.offset
            assert lam == 1.0 / (w * w)
            # all sheet centers over the full grid
            ang = TWO_PI * (grid[:, None] + np.arange(w)[None, :]) / w
            cx, cy = eps * np.cos(ang), eps * np.sin(ang)
            # adjacent strands realize the minimal separation
            dmin = float(np.hypot(cx - np.roll(cx, -1, 1), cy - np.roll(cy, -1, 1)).min())
            margin = 2 * (eps * math.sin(math.pi / w) - lam)
            assert margin > 0
            assert dmin - 2 * lam >= margin * (1 - 1e-9)
            # full pairwise scan on a subgrid
            pts = np.stack([cx[::200], cy[::200]], axis=-1)
            pw = np.linalg.norm(pts[:, :, None, :] - pts[:, None, :, :], axis=-1)
            pw[:, np.arange(w), np.arange(w)] = np.inf
            assert float(pw.min()) - 2 * lam >= margin * (1 - 1e-9)
            # realized fiber radius is exactly the contraction
            center = smap.apply(sl.TorusPoint(0.37, 0, 0))
            for a in np.linspace(0, 1, 9)[:-1]:
                rim = smap.apply(
                    sl.TorusPoint(0.37, math.cos(TWO_PI * a), math.sin(TWO_PI * a))
                )
                r = math.hypot(rim.x - center.x, rim.y - center.y)
                assert abs(r - lam) < 1e-15


def test_criterion_7_global_dynamics():
    with criterion("7 global dynamics", budget=30):
        model = sl.build_model(5, -2, 1, 0.5)
        lam = model.chart2_map.contraction
        assert lam == 1 / 36
        reference = sl.sample_attractor(model.chart2_map, 40, 10**5, seed=99)
        starts = sl.random_manifold_points(1000, seed=7)

        fates = [model.classify_orbit(x, 60, reference) for x in starts]
        assert all(f.kind is sl.OrbitOutcome.CONVERGED_TO_ATTRACTOR for f in fates)
        assert max(f.transit_step for f in fates) <= 2

        # contraction toward the attractor: exact fiber distance to the
        # depth-40 image drops by at least the fiber factor per step after a
        # 3-step burn-in (oracle is exact to ~1e-14, hence the absolute slack;
        # below 1e-10 the ratio drowns in that tolerance and is not checked)
        checked = 0
        for x in starts:
            orb = model.orbit(x, 12)
            tr = next(i for i, mp in enumerate(orb) if mp.chart == 2)
            assert tr <= 2
            d = [sl.attractor_fiber_distance(model.chart2_map, mp.pt, 40) for mp in orb[tr:]]
            for k in range(3, len(d) - 1):
                if d[k] > 1e-10:
                    assert d[k + 1] <= d[k] * lam + 5e-14, (k, d[k], d[k + 1])
                    checked += 1
        assert checked > 1000

        # symmetric under backward steps toward the chart-1 set
        checked = 0
        for x in starts:
            orb = model.orbit(x, 12, backward=True)
            tr = next(i for i, mp in enumerate(orb) if mp.chart == 1)
            assert tr <= 2
            d = [sl.attractor_fiber_distance(model.chart1_map, mp.pt, 40) for mp in orb[tr:]]
            for k in range(3, len(d) - 1):
                if d[k] > 1e-10:
                    assert d[k + 1] <= d[k] * lam + 5e-14, (k, d[k], d[k + 1])
                    checked += 1
        assert checked > 1000


def test_criterion_8_homology_witnesses():
    with criterion("8 homology witnesses", budget=1):
        cases = {(5, 1): -2, (5, 2): -2, (1, 1): 0, (7, 1): 3}
        for (p, m), q in cases.items():
            model = sl.build_model(p, q, m, 0.5)
            assert sl.braid_winding(model, 1) == m * p + 1
            assert sl.braid_winding(model, 2) == m * p + 1
            core_class = sl.loop_class(model.gluing, 1, 0)
            assert (core_class != 0) == (p > 1)


CLI_CASES = [
    ("verify", ["verify", "--p", "5", "--q", "-2"], []),
    (
        "attractor",
        ["attractor", "--w", "2", "--eps", "0.5", "--depth", "12",
         "--samples", "4000", "--seed", "11", "--out", "{tmp}/cloud.csv"],
        ["{tmp}/cloud.csv"],
    ),
    ("periodic", ["periodic", "--w", "2", "--n", "6"], []),
    (
        "simulate",
        ["simulate", "--p", "5", "--q", "-2", "--m", "1", "--starts", "40",
         "--max-steps", "40", "--seed", "3", "--samples", "4000",
         "--out", "{tmp}/sim.json"],
        ["{tmp}/sim.json"],
    ),
    (
        "dimension",
        ["dimension", "--in", "{tmp}/fixed.csv",
         "--scales", "0.25,0.125,0.0625,0.03125"],
        [],
    ),
    ("lyapunov", ["lyapunov", "--w", "2", "--steps", "2000"], []),
    ("entropy", ["entropy", "--w", "2", "--n-max", "8"], []),
]


def test_criterion_9_determinism(tmp_path):
    with criterion("9 CLI determinism"):
        fixed = tmp_path / "fixed.csv"
        subprocess.run(
            [sys.executable, "-m", "solenoid_lab", "attractor", "--w", "2",
             "--depth", "10", "--samples", "3000", "--seed", "5", "--out", str(fixed)],
            check=True, capture_output=True,
        )
        for name, argv, outputs in CLI_CASES:
            argv = [a.format(tmp=tmp_path) for a in argv]
            outputs = [o.format(tmp=tmp_path) for o in outputs]
            captures = []
            for threads in ("1", "1", "8"):
                env = {**os.environ, "SOLENOID_LAB_THREADS": threads}
                proc = subprocess.run(
                    [sys.executable, "-m", "solenoid_lab", *argv],
                    capture_output=True, env=env,
                )
                assert proc.returncode == 0, (name, proc.stderr)
                captures.append(
                    (proc.stdout, [Path(o).read_bytes() for o in outputs])
                )
            assert captures[0] == captures[1] == captures[2], name
            # sanity: the document parses back
            json.loads(captures[0][0])
