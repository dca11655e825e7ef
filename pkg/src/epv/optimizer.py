"""The eigenvalue relaxation of the maximum-energy problem.

For fixed k and m, maximize ``sum(lam)`` over ``lam`` in ``[0, k]^m`` subject to

    sum(lam**2) == m*k              (trace of A^2)
    sum(lam**4) >= m*k*(2k - 1)     (trace of A^4, girth-6 walks)

For ``m = t(k^2 - k + 1)`` the unique optimum has t entries equal to k and the
rest equal to sqrt(k - 1).  ``numeric_optimum`` is an independent multi-start
augmented-Lagrangian search used to confirm that, and ``kkt_residual`` fits
multipliers to test first-order stationarity of any feasible point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import lsq_linear, minimize

from .errors import BadArgs, NoFeasiblePoint

ORACLE_MAX_M = 12
ORACLE_MAX_K = 4
MASTER_SEED = 0


def constraint_values(values, k: int, m: int) -> tuple[float, float]:
    """``(g, h0)``: trace-of-square residual and trace-of-fourth-power slack."""
    lam = np.asarray(values, dtype=float)
    return float(np.sum(lam**2) - m * k), float(np.sum(lam**4) - m * k * (2 * k - 1))


@dataclass(frozen=True)
class OptPoint:
    entries: tuple[tuple[float, int], ...]
    objective: float
    g_residual: float
    h0_value: float

    @classmethod
    def from_values(cls, values, k: int) -> OptPoint:
        lam = sorted((float(v) for v in values), reverse=True)
        entries = tuple((v, 1) for v in lam)
        g, h0 = constraint_values(lam, k, len(lam))
        return cls(entries, math.fsum(lam), g, h0)

    @property
    def m(self) -> int:
        return sum(c for _, c in self.entries)

    def values(self) -> np.ndarray:
        return np.array([v for v, c in self.entries for _ in range(c)], dtype=float)

    def clustered(self, gap: float) -> list[tuple[float, int]]:
        """Merge sorted values whose neighbours differ by at most ``gap``."""
        groups: list[list[float]] = []
        for v in sorted(self.values(), reverse=True):
            if groups and groups[-1][-1] - v <= gap:
                groups[-1].append(v)
            else:
                groups.append([v])
        return [(sum(g) / len(g), len(g)) for g in groups]


@dataclass(frozen=True)
class KKTCertificate:
    c1: float
    c2: float
    d: dict[int, float] = field(default_factory=dict)
    active: tuple[int, ...] = ()
    h0_active: bool = False
    stationarity_residual: float = 0.0


def closed_form_optimum(k: int, t: int) -> OptPoint:
    if k < 2 or t < 1:
        raise BadArgs(f"need k >= 2 and t >= 1, got k={k}, t={t}")
    m = t * (k * k - k + 1)
    r = math.sqrt(k - 1)
    entries = ((float(k), t), (r, t * (k * k - k)))
    vals = [v for v, c in entries for _ in range(c)]
    g, h0 = constraint_values(vals, k, m)
    return OptPoint(entries, t * k + t * (k * k - k) * r, g, h0)


def feasibility_check(p: OptPoint, k: int, m: int, tol: float = 1e-8) -> tuple[bool, dict[str, float]]:
    if p.m != m:
        raise BadArgs(f"point has {p.m} entries, expected {m}")
    lam = p.values()
    g, h0 = constraint_values(lam, k, m)
    diag = {
        "g": g,
        "h0": h0,
        "min_value": float(lam.min()),
        "max_value": float(lam.max()),
    }
    ok = abs(g) <= tol and h0 >= -tol and diag["min_value"] >= -tol and diag["max_value"] <= k + tol
    return ok, diag


# -- numeric oracle ----------------------------------------------------------


class _Scaled:
    """Objective and constraints divided by their natural magnitudes."""

    def __init__(self, k: int, m: int):
        self.k, self.m = k, m
        self.fs = m * k
        self.gs = m * k
        self.hs = m * k * (2 * k - 1)

    def f(self, x):
        return -np.sum(x) / self.fs, -np.ones_like(x) / self.fs

    def g(self, x):
        return (np.sum(x * x) - self.gs) / self.gs, 2 * x / self.gs

    def h(self, x):
        return (np.sum(x**4) - self.hs) / self.hs, 4 * x**3 / self.hs


def _augmented_lagrangian(x0: np.ndarray, prob: _Scaled, rounds: int = 8) -> np.ndarray:
    k = prob.k
    bounds = [(0.0, float(k))] * len(x0)
    x, y, z, mu = x0.copy(), 0.0, 0.0, 10.0

    def merit(v):
        f, df = prob.f(v)
        g, dg = prob.g(v)
        h, dh = prob.h(v)
        s = max(0.0, z - mu * h)
        val = f - y * g + 0.5 * mu * g * g + (s * s - z * z) / (2 * mu)
        grad = df + (mu * g - y) * dg - s * dh
        return val, grad

    for _ in range(rounds):
        res = minimize(merit, x, jac=True, method="L-BFGS-B", bounds=bounds,
                       options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-12})
        x = res.x
        g, _ = prob.g(x)
        h, _ = prob.h(x)
        y -= mu * g
        z = max(0.0, z - mu * h)
        if abs(g) < 1e-13 and h > -1e-13:
            break
        mu *= 10.0
    return x


def _project(x: np.ndarray, prob: _Scaled, iters: int = 30) -> np.ndarray:
    """Gauss-Newton correction onto g = 0 (and h0 = 0 when h0 is violated or
    nearly active) moving only coordinates strictly inside the box."""
    k = prob.k
    x = np.clip(x, 0.0, k)
    for _ in range(iters):
        g, dg = prob.g(x)
        h, dh = prob.h(x)
        free = (x > 1e-12) & (x < k - 1e-12)
        if not free.any():
            break
        rows, rhs = [dg[free]], [g]
        if h < 1e-8:
            rows.append(dh[free])
            rhs.append(min(h, 0.0))
        if abs(g) < 1e-15 and h > -1e-15:
            break
        step, *_ = np.linalg.lstsq(np.array(rows), -np.array(rhs), rcond=None)
        x = x.copy()
        x[free] += step
        x = np.clip(x, 0.0, k)
    return x


def numeric_optimum(k: int, m: int, seeds: int = 64, tol: float = 1e-8, master_seed: int = MASTER_SEED) -> OptPoint:
    """Best feasible point over ``seeds`` independent restarts.

    Restart i draws its start uniformly from ``[0, k]^m`` using a child of
    ``SeedSequence(master_seed)``; ties go to the lowest restart index.
    """
    if k < 2 or k > ORACLE_MAX_K:
        raise BadArgs(f"oracle supports 2 <= k <= {ORACLE_MAX_K}, got k={k}")
    if not 1 <= m <= ORACLE_MAX_M:
        raise BadArgs(f"oracle supports 1 <= m <= {ORACLE_MAX_M}, got m={m}")
    if seeds < 1:
        raise BadArgs("seeds must be >= 1")
    prob = _Scaled(k, m)
    best: OptPoint | None = None
    for child in np.random.SeedSequence(master_seed).spawn(seeds):
        rng = np.random.default_rng(child)
        x = _augmented_lagrangian(rng.uniform(0.0, k, m), prob)
        x = _project(x, prob)
        p = OptPoint.from_values(x, k)
        if not feasibility_check(p, k, m, tol)[0]:
            continue
        if best is None or p.objective > best.objective:
            best = p
    if best is None:
        raise NoFeasiblePoint(f"no restart reached feasibility {tol} for k={k}, m={m}")
    return best


# -- stationarity certificate ------------------------------------------------


def kkt_residual(p: OptPoint, k: int, m: int, activation_tol: float = 1e-6) -> KKTCertificate:
    """Least-squares multipliers for ``1 + 2 c1 lam + 4 c2 lam^3 - d = 0``.

    ``c2`` is pinned to zero when ``h0`` is inactive, ``d_i`` exists only on
    coordinates within ``activation_tol`` of k.  Sign conditions (c2 >= 0,
    d >= 0) are enforced as bounds of the fit.
    """
    if p.m != m:
        raise BadArgs(f"point has {p.m} entries, expected {m}")
    lam = p.values()
    _, h0 = constraint_values(lam, k, m)
    h0_active = h0 <= activation_tol
    active = tuple(int(i) for i in np.flatnonzero(k - lam <= activation_tol))

    cols = [2 * lam]
    lo, hi = [-np.inf], [np.inf]
    if h0_active:
        cols.append(4 * lam**3)
        lo.append(0.0)
        hi.append(np.inf)
    for i in active:
        e = np.zeros(m)
        e[i] = -1.0
        cols.append(e)
        lo.append(0.0)
        hi.append(np.inf)
    a = np.column_stack(cols)
    b = -np.ones(m)
    sol = lsq_linear(a, b, bounds=(lo, hi), method="bvls", tol=1e-14)
    coef = sol.x
    resid = float(np.linalg.norm(a @ coef - b))
    c2 = float(coef[1]) if h0_active else 0.0
    offset = 2 if h0_active else 1
    d = {i: float(coef[offset + j]) for j, i in enumerate(active)}
    return KKTCertificate(float(coef[0]), c2, d, active, h0_active, resid)
