"""The two-solid-torus gluing: matrix completion, boundary-angle transfer,
and first homology via integer normal forms.

Conventions, fixed once: the boundary-angle matrix has columns (r, s) and
(p, q), i.e. the chart-2 longitude maps to r*longitude + s*meridian of chart 1
and the chart-2 meridian to the (p, q)-curve. Every sign in this module flows
from that single choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveP, NotCoprime
from .torus import wrap_turn


@dataclass(frozen=True)
class GluingMatrix:
    """Integer data (p, q, r, s) of the boundary identification, ps - qr = 1."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise NonPositiveP(f"p must be a positive integer, got {self.p}")
        if math.gcd(self.p, abs(self.q)) != 1:
            raise NotCoprime(f"p={self.p} and q={self.q} share a nontrivial factor")
        det = self.p * self.s - self.q * self.r
        if det != 1:
            raise ValueError(f"ps - qr must equal 1, got {det}")

    def angle_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Rows of the chart-2 -> chart-1 transfer acting on (alpha, beta).

        Determinant -1: the identification reverses orientation.
        """
        return ((self.r, self.p), (self.s, self.q))

    def angle_matrix_inverse(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Exact integer inverse of angle_matrix (unimodular, so it exists)."""
        return ((-self.q, self.p), (self.s, -self.r))


def complete_gluing(p: int, q: int) -> GluingMatrix:
    """Extend coprime (p, q) to a full matrix with ps - qr = 1.

    The completion is unique up to adding multiples of (p, q) to (r, s); the
    representative with -p/2 < r <= p/2 is returned, which makes the output
    deterministic.
    """
    p = int(p)
    q = int(q)
    if p < 1:
        raise NonPositiveP(f"p must be a positive integer, got {p}")
    if math.gcd(p, abs(q)) != 1:
        raise NotCoprime(f"p={p} and q={q} share a nontrivial factor")
    # ps - qr = 1 means q*r = -1 (mod p).
    r = (-pow(q, -1, p)) % p if p > 1 else 0
    if 2 * r > p:
        r -= p
    s = (1 + q * r) // p
    return GluingMatrix(p, q, r, s)


@dataclass(frozen=True)
class BoundaryAngles:
    """Angles in turns along the longitude (alpha) and meridian (beta) of one
    chart's boundary torus."""

    alpha: float
    beta: float
    chart: int

    def __post_init__(self) -> None:
        if self.chart not in (1, 2):
            raise ValueError(f"chart must be 1 or 2, got {self.chart}")
        object.__setattr__(self, "alpha", wrap_turn(self.alpha))
        object.__setattr__(self, "beta", wrap_turn(self.beta))


def transfer_boundary(g: GluingMatrix, a: BoundaryAngles) -> BoundaryAngles:
    """Carry boundary angles across the identification.

    Chart-2 input uses the angle matrix as printed; chart-1 input uses its
    integer inverse, so transfer composed with transfer is the identity.
    """
    if a.chart == 2:
        return BoundaryAngles(g.r * a.alpha + g.p * a.beta, g.s * a.alpha + g.q * a.beta, 1)
    return BoundaryAngles(-g.q * a.alpha + g.p * a.beta, g.s * a.alpha - g.r * a.beta, 2)


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of a small integer matrix.

    Entries come out nonnegative with each dividing the next; zeros trail.
    """
    m = [[int(v) for v in row] for row in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag: list[int] = []
    t = 0
    while t < min(nr, nc):
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            m[t], m[i0] = m[i0], m[t]
            for row in m:
                row[t], row[j0] = row[j0], row[t]
            if m[t][t] < 0:
                m[t] = [-v for v in m[t]]
            # Reduce column then row by the pivot; a nonzero remainder becomes
            # the strictly smaller next pivot, so this terminates.
            piv = None
            for i in range(t + 1, nr):
                qv = m[i][t] // m[t][t]
                if qv:
                    m[i] = [a - qv * b for a, b in zip(m[i], m[t])]
                if m[i][t] != 0:
                    piv = (i, t)
            if piv is None:
                for j in range(t + 1, nc):
                    qv = m[t][j] // m[t][t]
                    if qv:
                        for row in m:
                            row[j] -= qv * row[t]
                    if m[t][j] != 0:
                        piv = (t, j)
            if piv is None:
                break
        diag.append(m[t][t])
        t += 1
    diag += [0] * (min(nr, nc) - len(diag))
    # Enforce the divisibility chain (gcd/lcm exchange preserves the group).
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if a == 0 and b != 0:
                diag[i], diag[i + 1] = b, 0
                changed = True
            elif a != 0 and b % a != 0:
                g = math.gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
    return diag


def h1_order(g: GluingMatrix) -> int:
    """Order of the first homology of the glued manifold.

    Computed from the relation matrix [[0, 1], [p, q]] over generators
    (longitude, meridian) of chart 1 by Smith normal form, not by reading p.
    """
    order = 1
    for d in smith_diagonal([[0, 1], [g.p, g.q]]):
        if d == 0:
            raise ValueError("first homology is infinite; gluing data is inconsistent")
        order *= d
    return order


def loop_class(g: GluingMatrix, n1: int, n2: int) -> int:
    """Homology class mod p of a closed loop with longitude windings n1, n2
    in charts 1 and 2.

    The chart-2 core is homologous to r times the chart-1 core, which
    generates the cyclic group.
    """
    return (n1 + g.r * n2) % g.p
