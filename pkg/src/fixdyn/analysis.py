"""Multipliers, residue fixed-point indices, classification and witnesses."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import config
from .core import (
    INF,
    ExtendedComplex,
    Polynomial,
    RationalMap,
    fixed_point_polynomial,
    is_inf,
    poly_compose,
)
from .errors import (
    CapExceeded,
    ClusterAmbiguity,
    ContourContaminated,
    InternalInconsistency,
    MultiplierOne,
    NotAFixedPoint,
    PreconditionUnmet,
)
from .roots import (
    FixedPointLocation,
    find_roots,
    fixed_points,
    infinity_chart,
    is_fixed_point,
    location_key,
)


class FixedPointClass(str, enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    RATIONALLY_INDIFFERENT = "rationally-indifferent"
    IRRATIONALLY_INDIFFERENT = "irrationally-indifferent"
    REPELLING = "repelling"

    @property
    def is_attracting(self) -> bool:
        return self in (FixedPointClass.SUPERATTRACTING, FixedPointClass.ATTRACTING)

    @property
    def is_indifferent(self) -> bool:
        return self in (
            FixedPointClass.RATIONALLY_INDIFFERENT,
            FixedPointClass.IRRATIONALLY_INDIFFERENT,
        )


@dataclass(frozen=True)
class ContourConfig:
    nodes: int = 512
    radius_fraction: float = 0.5

    def __post_init__(self):
        if self.nodes < 16:
            raise ValueError("contour needs at least 16 nodes")
        if not 0 < self.radius_fraction <= 1:
            raise ValueError("radius_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class FixedPointRecord:
    location: ExtendedComplex
    multiplier: complex
    multiplicity: int
    index: complex
    classification: FixedPointClass
    weakly_repelling: bool


@dataclass(frozen=True)
class AnalysisReport:
    records: tuple[FixedPointRecord, ...]
    rfpt_sum: complex
    rfpt_residual: float
    finite_sum: Optional[complex]
    rnfp_witness: Optional[ExtendedComplex]
    weakly_repelling_witness: Optional[ExtendedComplex]

    def record_at(self, z: ExtendedComplex) -> FixedPointRecord:
        if is_inf(z):
            return next(r for r in self.records if is_inf(r.location))
        finite = [r for r in self.records if not is_inf(r.location)]
        return min(finite, key=lambda r: abs(r.location - z))


@dataclass(frozen=True)
class PeriodicReport:
    period: int
    records: tuple[FixedPointRecord, ...]
    cycles: tuple[tuple[complex, ...], ...]
    rnfp_witness: Optional[complex]

    @property
    def has_rnfp_witness(self) -> bool:
        return self.rnfp_witness is not None


def multiplier(R: RationalMap, z0: ExtendedComplex) -> complex:
    """R'(z0) at a finite fixed point, h'(0) with h = 1/R(1/z) at infinity."""
    if not is_fixed_point(R, z0):
        raise NotAFixedPoint(f"{z0!r} is not a fixed point")
    if is_inf(z0):
        return complex(infinity_chart(R).derivative_at(0j))
    return complex(R.derivative_at(complex(z0)))


def _is_root_of_unity(lam: complex, tau: float, cap: int) -> bool:
    w = 1 + 0j
    for _ in range(cap):
        w *= lam
        if abs(w - 1) <= tau:
            return True
    return False


def classify(lam: complex, m: int = 1) -> FixedPointClass:
    cfg = config.get()
    tau = cfg.tau_mult
    r = abs(lam)
    if r <= tau:
        return FixedPointClass.SUPERATTRACTING
    if r < 1 - tau:
        return FixedPointClass.ATTRACTING
    if r > 1 + tau:
        return FixedPointClass.REPELLING
    if m >= 2 or _is_root_of_unity(lam, tau, cfg.rational_order_cap):
        return FixedPointClass.RATIONALLY_INDIFFERENT
    return FixedPointClass.IRRATIONALLY_INDIFFERENT


def is_weakly_repelling(lam: complex) -> bool:
    tau = config.get().tau_mult
    return abs(lam) > 1 + tau or abs(lam - 1) <= tau


def residue_index_closed(lam: complex) -> complex:
    """Index 1/(1 - lambda); undefined for a multiple point."""
    if abs(lam - 1) <= config.get().tau_mult:
        raise MultiplierOne("multiplier is 1; use residue_index_contour")
    return 1 / (1 - complex(lam))


def residue_index_contour(
    R: RationalMap,
    z0: complex,
    cfg: ContourConfig = ContourConfig(),
    others: Optional[Sequence[complex]] = None,
) -> complex:
    """Residue of 1/(z - R(z)) at z0 by the trapezoidal rule on a circle.

    The radius is ``radius_fraction`` times the distance from z0 to the
    nearest other finite fixed point or pole of R (1 if there is none).
    The integrand is evaluated as -Q/(P - zQ), which stays finite at poles
    of R.  ``others`` may pass the remaining finite fixed points to skip
    recomputing them.
    """
    z0 = complex(z0)
    if not is_fixed_point(R, z0):
        raise NotAFixedPoint(f"{z0!r} is not a fixed point")
    if others is None:
        others = [
            loc.point
            for loc in fixed_points(R)
            if not is_inf(loc.point) and abs(loc.point - z0) > 1e-12 * max(1, abs(z0))
        ]
    poles = []
    if R.denominator.degree >= 1:
        poles = [c.center for c in find_roots(R.denominator)]
    obstacles = [complex(w) for w in others] + poles
    dists = [abs(w - z0) for w in obstacles]
    base = min(dists) if dists else 1.0
    if base == 0:
        raise ContourContaminated("another fixed point or pole coincides with z0")
    r = cfg.radius_fraction * base
    if any(d <= 1.1 * r for d in dists):
        raise ContourContaminated(f"obstacle within 1.1 r of {z0!r} (r = {r:.3g})")
    F = fixed_point_polynomial(R)
    theta = 2 * np.pi * np.arange(cfg.nodes) / cfg.nodes
    e = np.exp(1j * theta)
    z = z0 + r * e
    integrand = -R.denominator(z) / F(z)
    return complex(r * np.mean(integrand * e))


def _record(R: RationalMap, loc: FixedPointLocation, finite: list[complex],
            cfg: ContourConfig) -> FixedPointRecord:
    tau = config.get().tau_mult
    if is_inf(loc.point):
        h = infinity_chart(R)
        lam = complex(h.derivative_at(0j))
        if abs(lam - 1) > tau:
            idx = residue_index_closed(lam)
        else:
            images = [1 / z for z in finite if z != 0]
            idx = residue_index_contour(h, 0j, cfg, others=images)
    else:
        z = complex(loc.point)
        lam = complex(R.derivative_at(z))
        if abs(lam - 1) > tau:
            idx = residue_index_closed(lam)
        else:
            rest = [w for w in finite if w != z]
            idx = residue_index_contour(R, z, cfg, others=rest)
    return FixedPointRecord(
        location=loc.point,
        multiplier=lam,
        multiplicity=loc.multiplicity,
        index=idx,
        classification=classify(lam, loc.multiplicity),
        weakly_repelling=is_weakly_repelling(lam),
    )


def fixed_point_records(R: RationalMap, cfg: ContourConfig = ContourConfig()) -> list[FixedPointRecord]:
    locs = fixed_points(R)
    finite = [complex(l.point) for l in locs if not is_inf(l.point)]
    records = [_record(R, loc, finite, cfg) for loc in locs]
    records.sort(key=lambda r: location_key(r.location))
    return records


def analyze(R: RationalMap, cfg: ContourConfig = ContourConfig()) -> AnalysisReport:
    """Every fixed point of R with multiplier, multiplicity, index and class.

    ``rfpt_sum`` is the sum of all indices (1 for any map of degree >= 1
    other than the identity); ``finite_sum`` is the sum over finite fixed
    points and is only reported for polynomials.
    """
    records = fixed_point_records(R, cfg)
    total = complex(sum(r.index for r in records))
    finite_sum = None
    if R.is_polynomial:
        finite_sum = complex(sum(r.index for r in records if not is_inf(r.location)))
    rnfp = _rnfp(records)
    weak = _weak(records) if R.degree >= 2 else None
    if R.degree >= 2 and weak is None:
        raise InternalInconsistency("no weakly repelling fixed point found")
    return AnalysisReport(
        records=tuple(records),
        rfpt_sum=total,
        rfpt_residual=abs(total - 1),
        finite_sum=finite_sum,
        rnfp_witness=rnfp,
        weakly_repelling_witness=weak,
    )


def _records_of(obj) -> Sequence[FixedPointRecord]:
    if isinstance(obj, AnalysisReport):
        return obj.records
    if isinstance(obj, RationalMap):
        return fixed_point_records(obj)
    return obj


def _rnfp(records: Sequence[FixedPointRecord]) -> Optional[ExtendedComplex]:
    tau = config.get().tau_mult
    for r in records:
        if r.multiplicity >= 2 or r.multiplier.real >= 1 - tau:
            return r.location
    return None


def _weak(records: Sequence[FixedPointRecord]) -> Optional[ExtendedComplex]:
    tau = config.get().tau_mult
    for r in records:
        if abs(r.multiplier) > 1 + tau or abs(r.multiplier - 1) <= tau or r.multiplicity >= 2:
            return r.location
    return None


def rnfp_witness(R) -> Optional[ExtendedComplex]:
    """First fixed point (in report order) with Re(lambda) >= 1, or None.

    Accepts a RationalMap, an AnalysisReport or a sequence of records.
    """
    return _rnfp(_records_of(R))


def weakly_repelling_witness(R) -> ExtendedComplex:
    """A repelling fixed point or one with multiplier 1.

    Every map of degree >= 2 has one; failing to find it means the numerics
    upstream broke, which is reported as InternalInconsistency.
    """
    if isinstance(R, RationalMap) and R.degree < 2:
        raise PreconditionUnmet("weakly repelling witness needs degree >= 2")
    w = _weak(_records_of(R))
    if w is None:
        raise InternalInconsistency("no weakly repelling fixed point found")
    return w


def _superattracting(records: Sequence[FixedPointRecord]) -> Optional[FixedPointRecord]:
    tau = config.get().tau_mult
    hits = [r for r in records if abs(r.multiplier) <= tau]
    for r in hits:
        if is_inf(r.location):
            return r
    return hits[0] if hits else None


def secondary_witnesses(R: RationalMap) -> tuple[Optional[ExtendedComplex], Optional[ExtendedComplex]]:
    """(finite point with Re(lambda) <= 1, point with lambda = 1 or Im(lambda) >= 0).

    The first slot applies to polynomials of degree >= 2.  The second applies
    whenever R has a superattracting fixed point; that point itself is left
    out of the search, since the imaginary-part argument runs over the
    remaining indices.  Slots whose hypothesis fails are None; if neither
    applies PreconditionUnmet is raised.
    """
    tau = config.get().tau_mult
    records = fixed_point_records(R)
    first_ok = R.is_polynomial and R.degree >= 2
    sup = _superattracting(records)
    if not first_ok and sup is None:
        raise PreconditionUnmet("map is neither a polynomial nor has a superattracting point")
    first = second = None
    if first_ok:
        for r in records:
            if not is_inf(r.location) and r.multiplier.real <= 1 + tau:
                first = r.location
                break
    if sup is not None:
        for r in records:
            if r is sup:
                continue
            if r.multiplicity >= 2 or r.multiplier.imag >= -tau:
                second = r.location
                break
    return first, second


def _divisors(p: int) -> list[int]:
    return [q for q in range(1, p) if p % q == 0]


def _orbit(P: Polynomial, z: complex, steps: int) -> list[complex]:
    out = [z]
    for _ in range(steps):
        z = P(z)
        out.append(z)
    return out


def _chain_multiplier(P: Polynomial, orbit: Sequence[complex]) -> complex:
    dP = P.derivative()
    lam = 1 + 0j
    for w in orbit:
        lam *= dP(w)
    return lam


def iterate_polynomial(P: Polynomial, p: int) -> Polynomial:
    cfg = config.get()
    if P.degree ** p > cfg.compose_cap:
        raise CapExceeded(f"degree {P.degree}^{p} exceeds cap {cfg.compose_cap}")
    Pp = P
    for _ in range(p - 1):
        Pp = poly_compose(Pp, P)
    return Pp


def periodic_points(P: Polynomial, p: int, cfg: ContourConfig = ContourConfig()) -> PeriodicReport:
    """Points of exact period ``p`` of the polynomial P.

    Fixed points of P^p that are already fixed by P^q for a proper divisor q
    of p are discarded.  Multipliers are chain-rule products along the cycle;
    indices are those of P^p.  ``rnfp_witness`` is the first genuine periodic
    point whose cycle multiplier has real part >= 1 (or that is multiple).
    """
    if P.degree < 2:
        raise PreconditionUnmet("periodic points need degree >= 2")
    if p < 1:
        raise PreconditionUnmet("period must be positive")
    tc = config.get()
    Pp = iterate_polynomial(P, p)
    Rp = RationalMap.from_polynomial(Pp)
    locs = [l for l in fixed_points(Rp) if not is_inf(l.point)]
    finite = [complex(l.point) for l in locs]
    divs = _divisors(p)
    genuine: list[FixedPointRecord] = []
    for loc in locs:
        z = complex(loc.point)
        orbit = _orbit(P, z, p)
        lam = _chain_multiplier(P, orbit[:p])
        lower = None
        for q in divs:
            if abs(orbit[q] - z) <= tc.tau_fix * max(1.0, abs(z)) * P.scale:
                lower = q
                break
        if lower is not None:
            lam_q = _chain_multiplier(P, orbit[:lower]) ** (p // lower)
            if abs(lam - lam_q) > 1e-6 * max(1.0, abs(lam)):
                raise ClusterAmbiguity(
                    f"{z!r} sits on a period-{lower} point but multipliers disagree"
                )
            continue
        if abs(lam - 1) > tc.tau_mult:
            idx = residue_index_closed(lam)
        else:
            idx = residue_index_contour(Rp, z, cfg, others=[w for w in finite if w != z])
        genuine.append(
            FixedPointRecord(
                location=z,
                multiplier=lam,
                multiplicity=loc.multiplicity,
                index=idx,
                classification=classify(lam, loc.multiplicity),
                weakly_repelling=is_weakly_repelling(lam),
            )
        )
    genuine.sort(key=lambda r: location_key(r.location))
    cycles = _group_cycles(P, [r.location for r in genuine], p)
    return PeriodicReport(
        period=p,
        records=tuple(genuine),
        cycles=cycles,
        rnfp_witness=_rnfp(genuine),
    )


def _group_cycles(P: Polynomial, points: list[complex], p: int) -> tuple[tuple[complex, ...], ...]:
    unassigned = set(range(len(points)))
    cycles = []
    for i in range(len(points)):
        if i not in unassigned:
            continue
        cycle = []
        z = points[i]
        for _ in range(p):
            if not unassigned:
                break
            j = min(unassigned, key=lambda k: abs(points[k] - z))
            if abs(points[j] - z) > 1e-6 * max(1.0, abs(z)):
                break
            unassigned.discard(j)
            cycle.append(points[j])
            z = P(points[j])
        cycles.append(tuple(cycle))
    return tuple(cycles)
