"""Simultaneous root finding and enumeration of fixed points.

Roots come from Aberth-Ehrlich iteration.  Approximations that converge onto
a multiple root form a tight cluster; clusters are merged and the merged
multiplicity is confirmed by a derivative test before being reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .core import (
    INF,
    ExtendedComplex,
    Polynomial,
    RationalMap,
    conjugate_map,
    MobiusMap,
    fixed_point_polynomial,
    is_inf,
)
from .errors import InternalInconsistency, NoConvergence, NotAFixedPoint, PreconditionUnmet

EPS = np.finfo(float).eps
_START_SEED = 20240917


@dataclass(frozen=True)
class RootCluster:
    center: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class FixedPointLocation:
    point: ExtendedComplex
    multiplicity: int


def location_key(z: ExtendedComplex) -> tuple:
    """Sort key: lexicographic on (Re, Im) rounded to 1e-9, infinity last."""
    if is_inf(z):
        return (1, 0.0, 0.0)
    return (0, round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0)


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    n = len(coeffs) - 1
    lead = coeffs[-1]
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    abs_coeffs = np.abs(coeffs)
    radius = 1.0 + np.max(np.abs(coeffs[:-1] / lead))
    offset = np.random.default_rng(_START_SEED).uniform(0.0, 2.0 * np.pi)
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(n) / n + offset))
    active = np.ones(n, dtype=bool)
    noise = 16.0 * n * EPS

    def horner(c, x):
        acc = np.zeros_like(x) + c[-1]
        for a in c[-2::-1]:
            acc = acc * x + a
        return acc

    for _ in range(max_iter):
        pz = horner(coeffs, z)
        env = horner(abs_coeffs, np.abs(z))
        active &= ~(np.abs(pz) <= noise * env)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        dp = horner(dcoeffs, z[idx])
        dp = np.where(dp == 0, EPS * (1 + env[idx]), dp)
        ratio = pz[idx] / dp
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = 1.0
        diff = np.where(diff == 0, EPS * (1 + np.abs(z[idx, None])), diff)
        inv = 1.0 / diff
        inv[np.arange(len(idx)), idx] = 0.0
        s = inv.sum(axis=1)
        step = ratio / (1.0 - ratio * s)
        z[idx] -= step
        small = np.abs(step) <= 4.0 * EPS * np.abs(z[idx])
        active[idx[small]] = False

    # Freezing at the noise floor can leave roots of cancellation-heavy
    # polynomials short of the accuracy Horner allows; a few guarded sweeps
    # keep any step that lowers the residual.
    for _ in range(4):
        pz = horner(coeffs, z)
        dp = horner(dcoeffs, z)
        ok = dp != 0
        if not ok.any():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff = np.where(diff == 0, np.inf, diff)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        ratio = np.where(ok, pz / np.where(ok, dp, 1.0), 0.0)
        trial = z - ratio / (1.0 - ratio * inv.sum(axis=1))
        better = np.abs(horner(coeffs, trial)) < np.abs(pz)
        if not better.any():
            break
        z = np.where(better, trial, z)

    pz = horner(coeffs, z)
    env = horner(abs_coeffs, np.abs(z))
    bad = np.abs(pz) > max(tol, noise) * env
    if bad.any():
        raise NoConvergence(
            f"{int(bad.sum())} of {n} root approximations missed the residual target "
            f"after {max_iter} iterations"
        )
    return z


def _components(points: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage groups of points closer than ``radius``."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_center(p: Polynomial, c: complex, m: int, spread: float) -> complex:
    """Newton on p^(m-1), which has a simple root at an m-fold root of p."""
    q = p.derivative(m - 1)
    dq = q.derivative()
    best, best_val = c, abs(q(c))
    x = c
    for _ in range(8):
        d = dq(x)
        if d == 0:
            break
        x = x - q(x) / d
        val = abs(q(x))
        if val < best_val:
            best, best_val = x, val
        else:
            break
    if abs(best - c) > max(spread, 1e-12 * max(1.0, abs(c))):
        return c
    return best


def taylor_test(p: Polynomial, c: complex, m: int, tau: float) -> bool:
    """True when c looks like a root of order exactly m of p.

    Taylor coefficients below ``m`` must be negligible relative to their
    rounding envelope, and the m-th must not be.
    """
    t = p.taylor(c).coeffs
    envelope = Polynomial([abs(a) for a in p.coeffs]).taylor(abs(c)).coeffs
    coef = lambda seq, j: abs(seq[j]) if j < len(seq) else 0.0
    for j in range(m):
        if coef(t, j) > tau * max(coef(envelope, j), 1e-300):
            return False
    return coef(t, m) > tau * coef(envelope, m)


def find_roots(p: Polynomial, tol: float | None = None) -> list[RootCluster]:
    """All roots of ``p`` with multiplicities.

    Parameters
    ----------
    p : Polynomial
        Degree at least one.
    tol : float, optional
        Residual target relative to the rounding envelope
        ``sum |a_i| |z|^i``; defaults to ``root_tol``.

    Returns
    -------
    list of RootCluster
        Sorted by (Re, Im); multiplicities sum to ``p.degree``.
    """
    cfg = config.get()
    tol = cfg.root_tol if tol is None else tol
    if p.degree < 1:
        raise PreconditionUnmet("root finding needs degree >= 1")
    coeffs = np.array(p.coeffs, dtype=complex)
    zero_cut = cfg.trim * np.max(np.abs(coeffs))
    k = 0
    while abs(coeffs[k]) <= zero_cut:
        k += 1
    rest = coeffs[k:]
    clusters: list[RootCluster] = []
    if k:
        clusters.append(RootCluster(0j, k, 0.0))
    n = len(rest) - 1
    if n == 1:
        z = -rest[0] / rest[1]
        clusters.append(RootCluster(complex(z), 1, abs(p(z)) / p.scale))
    elif n > 1:
        approx = _aberth(rest, tol, cfg.root_max_iter)
        clusters.extend(_cluster(Polynomial(rest), approx, tol, cfg.tau_mult, p))
    clusters.sort(key=lambda c: location_key(c.center))
    total = sum(c.multiplicity for c in clusters)
    if total != p.degree:
        raise InternalInconsistency(f"multiplicities sum to {total}, degree is {p.degree}")
    return clusters


def _cluster_reach(p: Polynomial, c: complex, m: int, tol: float) -> float:
    """How far a perturbation of relative size ``tol`` can scatter an m-fold root at c.

    Perturbing p by tol times its rounding envelope moves the roots near c by
    about (tol * envelope(c) / |t_m|)^(1/m), with t_m the m-th Taylor
    coefficient at c.  Groups wider than this are distinct roots that merely
    sit close together.
    """
    t = p.taylor(c).coeffs
    tm = abs(t[m]) if m < len(t) else 0.0
    if tm == 0:
        return math.inf
    return (tol * p.abs_eval(c) / tm) ** (1.0 / m)


def _cluster(core: Polynomial, approx: np.ndarray, tol: float, tau: float,
             full: Polynomial) -> list[RootCluster]:
    n = len(approx)
    c = np.array(core.coeffs)
    scale = max(1.0, float(np.max(np.abs(c[:-1] / c[-1]))))
    free = np.ones(n, dtype=bool)
    out = []
    for m in range(n, 1, -1):
        if free.sum() < m:
            continue
        idx = np.flatnonzero(free)
        radius = tol ** (1.0 / m) * scale
        for group in _components(approx[idx], radius):
            if len(group) != m:
                continue
            members = approx[idx[group]]
            mean = complex(members.mean())
            spread = float(np.max(np.abs(members - mean)))
            center = _refine_center(core, mean, m, spread)
            if spread <= 2 * _cluster_reach(core, center, m, tol) and taylor_test(core, center, m, tau):
                out.append(RootCluster(center, m, abs(full(center)) / full.scale))
                free[idx[group]] = False
    for i in np.flatnonzero(free):
        z = complex(approx[i])
        out.append(RootCluster(z, 1, abs(full(z)) / full.scale))
    return out


def fixed_points(R: RationalMap) -> list[FixedPointLocation]:
    """All fixed points of R on the Riemann sphere, with multiplicity.

    The finite ones are the roots of P - zQ; infinity is added exactly when
    deg P > deg Q, carrying the remaining multiplicity so the total is d + 1.
    """
    if R.degree < 1:
        raise PreconditionUnmet("fixed points need a map of degree >= 1")
    F = fixed_point_polynomial(R)
    locs = []
    if F.degree >= 1:
        locs = [FixedPointLocation(c.center, c.multiplicity) for c in find_roots(F)]
    if R.fixes_infinity:
        locs.append(FixedPointLocation(INF, R.degree + 1 - F.degree))
    return locs


def infinity_chart(R: RationalMap) -> RationalMap:
    """h(w) = 1 / R(1 / w), the map read in the coordinate w = 1/z."""
    return conjugate_map(R, MobiusMap.inversion())


def is_fixed_point(R: RationalMap, z0: ExtendedComplex) -> bool:
    if is_inf(z0):
        return R.fixes_infinity
    F = fixed_point_polynomial(R)
    z0 = complex(z0)
    if R.denominator(z0) == 0:
        return False
    return abs(F(z0)) <= config.get().tau_fix * max(F.scale, F.abs_eval(z0))


def _series_divide(f: np.ndarray, q: np.ndarray, order: int) -> np.ndarray:
    f = np.concatenate([f, np.zeros(max(0, order + 1 - len(f)))])
    q = np.concatenate([q, np.zeros(max(0, order + 1 - len(q)))])
    g = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        acc = f[k] - np.dot(q[1 : k + 1], g[k - 1 :: -1][:k]) if k else f[0]
        g[k] = acc / q[0]
    return g


def fixed_offset_taylor(R: RationalMap, z0: complex, order: int) -> np.ndarray:
    """Taylor coefficients of R(z) - z about a finite point z0, up to ``order``."""
    F = fixed_point_polynomial(R)
    f = np.array(F.taylor(z0).coeffs)
    q = np.array(R.denominator.taylor(z0).coeffs)
    # R(z) - z = (P - zQ) / Q
    return _series_divide(f, q, order)


def multiplicity_of_fixed_point(R: RationalMap, z0: ExtendedComplex) -> int:
    """Least m >= 1 whose Taylor coefficient of R(z) - z at z0 exceeds tau_mult.

    The first coefficient is lambda - 1, so this agrees with the multiplier
    test for multiple points by construction.  Infinity is handled in the
    chart w = 1/z.
    """
    if not is_fixed_point(R, z0):
        raise NotAFixedPoint(f"{z0!r} is not a fixed point")
    if is_inf(z0):
        return multiplicity_of_fixed_point(infinity_chart(R), 0j)
    order = fixed_point_polynomial(R).degree
    g = fixed_offset_taylor(R, complex(z0), order)
    tau = config.get().tau_mult
    for m in range(1, order + 1):
        if abs(g[m]) > tau:
            return m
    return max(order, 1)
