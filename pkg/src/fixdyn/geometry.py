"""Special polynomial families and the geometry of their multipliers.

Covers polynomials all of whose multipliers have real part 1, and
polynomials whose multipliers are all equidistant from 1 (regular n-gon,
equilateral triangle and rectangle configurations of fixed points).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import config
from .core import MobiusMap, Polynomial, RationalMap, is_inf
from .errors import (
    DuplicateFixedPoint,
    DuplicatePoint,
    DuplicatePoints,
    InternalInconsistency,
    InvalidAlpha,
    InvalidK,
    NonRealInput,
    PreconditionUnmet,
    ZeroK,
    ZeroM,
)
from .roots import fixed_points


@dataclass(frozen=True)
class Shape:
    kind: str
    n: Optional[int] = None

    def __str__(self) -> str:
        return f"regular-n-gon({self.n})" if self.kind == "regular-n-gon" else self.kind

    @property
    def is_equilateral_triangle(self) -> bool:
        return self.kind == "equilateral-triangle" or (self.kind == "regular-n-gon" and self.n == 3)

    @property
    def is_rectangle(self) -> bool:
        return self.kind == "rectangle" or (self.kind == "regular-n-gon" and self.n == 4)


COLLINEAR = Shape("collinear")
EQUILATERAL_TRIANGLE = Shape("equilateral-triangle")
RECTANGLE = Shape("rectangle")
NO_SHAPE = Shape("none")


def regular_ngon(n: int) -> Shape:
    return Shape("regular-n-gon", n)


def parse_shape(text: str) -> Shape:
    if text.startswith("regular-n-gon(") and text.endswith(")"):
        return regular_ngon(int(text[len("regular-n-gon(") : -1]))
    return Shape(text)


@dataclass(frozen=True)
class NGonSpec:
    center: complex
    radius: float
    phase: float
    n: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("n-gon radius must be positive")
        if self.n < 3:
            raise ValueError("n-gon needs n >= 3")
        if not 0 < self.phase <= 2 * math.pi:
            raise ValueError("phase must lie in (0, 2*pi]")

    def vertices(self) -> list[complex]:
        return [
            self.center + self.radius * cmath.exp(1j * (self.phase + 2 * math.pi * k / self.n))
            for k in range(self.n)
        ]


@dataclass(frozen=True)
class GeometryVerdict:
    equidistant: bool
    common_distance: Optional[float]
    shape: Shape
    all_real_part_one: bool
    fixed_points: tuple[complex, ...] = ()
    multipliers: tuple[complex, ...] = ()
    multiplicities: tuple[int, ...] = ()
    # does the closed-form characterization for this degree agree with the numerics?
    real_part_theorem: Optional[bool] = None
    equidistance_theorem: Optional[bool] = None
    reason: Optional[str] = None


def _check_distinct(points: Sequence[complex], exc) -> None:
    tau = config.get().tau_fix
    for a, b in combinations(points, 2):
        if abs(a - b) <= tau * max(1.0, abs(a), abs(b)):
            raise exc(f"points {a!r} and {b!r} coincide")


def construct_from_fixed_points(alphas: Sequence[complex], k: complex) -> Polynomial:
    """z + k (z - a_1) ... (z - a_n): fixes exactly the a_i, all simple."""
    alphas = [complex(a) for a in alphas]
    _check_distinct(alphas, DuplicateFixedPoint)
    if k == 0:
        raise ZeroK("k must be nonzero")
    return Polynomial([0, 1]) + Polynomial.from_roots(alphas, lead=k)


def multipliers_via_products(alphas: Sequence[complex], k: complex) -> list[complex]:
    """1 + k * prod_{j != i} (a_i - a_j) for each a_i, in input order."""
    alphas = [complex(a) for a in alphas]
    _check_distinct(alphas, DuplicateFixedPoint)
    if k == 0:
        raise ZeroK("k must be nonzero")
    out = []
    for i, a in enumerate(alphas):
        prod = 1 + 0j
        for j, b in enumerate(alphas):
            if j != i:
                prod *= a - b
        out.append(1 + k * prod)
    return out


def construct_ngon(spec: NGonSpec, M: complex) -> Polynomial:
    """z + M ((z - a)^n - (r e^{i theta})^n), fixing the vertices of the n-gon."""
    if M == 0:
        raise ZeroM("M must be nonzero")
    w = spec.radius * cmath.exp(1j * spec.phase)
    shifted = Polynomial([-spec.center, 1]) ** spec.n
    return Polynomial([0, 1]) + (shifted - w**spec.n) * M


def ngon_multipliers(spec: NGonSpec, M: complex) -> list[complex]:
    w = spec.radius * cmath.exp(1j * spec.phase)
    n = spec.n
    return [1 + M * n * w ** (n - 1) * cmath.exp(-2j * math.pi * k / n) for k in range(n)]


def _real(x, what: str) -> float:
    z = complex(x)
    if z.imag != 0:
        raise NonRealInput(f"{what} must be real, got {x!r}")
    return z.real


def construct_real_part_one_family(
    simple: Sequence[float],
    multiple: Sequence[tuple[float, int]],
    k: float,
) -> Polynomial:
    """z + i k prod (z - a_i) prod (z - b_j)^{p_j} with real a_i, b_j, k.

    The claim that every multiplier has real part 1 is re-checked on the
    constructed polynomial before it is returned.
    """
    a = [_real(x, "simple point") for x in simple]
    b = [(_real(x, "multiple point"), int(p)) for x, p in multiple]
    k = _real(k, "k")
    if k == 0:
        raise ZeroK("k must be nonzero")
    if not a and not b:
        raise PreconditionUnmet("at least one fixed point is required")
    if any(p < 2 for _, p in b):
        raise ValueError("multiple points need power >= 2")
    _check_distinct([complex(x) for x in a] + [complex(x) for x, _ in b], DuplicatePoint)
    roots = list(a) + [x for x, p in b for _ in range(p)]
    P = Polynomial([0, 1]) + Polynomial.from_roots(roots, lead=1j * k)
    dP = P.derivative()
    tau = config.get().tau_mult
    for x in a + [x for x, _ in b]:
        lam = dP(x)
        if abs(lam.real - 1) > tau * max(1.0, abs(lam)):
            raise InternalInconsistency(f"multiplier {lam!r} at {x} has real part != 1")
    return P


def construct_remark5(k: complex, alpha: float) -> Polynomial:
    """k z^3 - (k + k alpha) z^2 + (k alpha + 1) z for imaginary k, real alpha."""
    k = complex(k)
    if k == 0 or k.real != 0:
        raise InvalidK(f"k must be nonzero and purely imaginary, got {k!r}")
    a = complex(alpha)
    tau = config.get().tau_fix
    if a.imag != 0 or abs(a) <= tau or abs(a - 1) <= tau:
        raise InvalidAlpha(f"alpha must be real and differ from 0 and 1, got {alpha!r}")
    a = a.real
    return Polynomial([0, k * a + 1, -(k + k * a), k])


def normalize_quadratic(P: Polynomial) -> tuple[complex, MobiusMap]:
    """c and affine g with g o P o g^{-1} = z^2 + c."""
    if P.degree != 2:
        raise PreconditionUnmet("normalize_quadratic needs a quadratic")
    d, b, a = P.coeffs
    c = a * d + b / 2 - b * b / 4
    return c, MobiusMap.affine(a, b / 2)


def centroid(points: Sequence[complex]) -> complex:
    return complex(np.mean(np.asarray(points, dtype=complex)))


def _diameter(points: Sequence[complex]) -> float:
    return max(abs(a - b) for a, b in combinations(points, 2))


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol


def shape_detect(points: Sequence[complex], tau: float | None = None) -> Shape:
    """Classify a configuration of distinct points.

    Priority: collinear, regular n-gon, equilateral triangle / rectangle,
    none.  Tolerances are ``tau_geo`` times the diameter of the set.
    """
    pts = [complex(p) for p in points]
    if len(pts) < 2:
        raise PreconditionUnmet("shape detection needs at least two points")
    tau = config.get().tau_geo if tau is None else tau
    diam = _diameter(pts)
    tol = tau * diam
    for a, b in combinations(pts, 2):
        if abs(a - b) <= tol:
            raise DuplicatePoints(f"points {a!r} and {b!r} coincide")
    p0 = pts[0]
    far = max(pts, key=lambda p: abs(p - p0))
    u = (far - p0) / abs(far - p0)
    if all(abs(((p - p0) * u.conjugate()).imag) <= tol for p in pts):
        return COLLINEAR
    n = len(pts)
    c = centroid(pts)
    radii = [abs(p - c) for p in pts]
    mean_r = sum(radii) / n
    if all(_close(r, mean_r, tol) for r in radii):
        ang = sorted(cmath.phase(p - c) for p in pts)
        gaps = [ang[i + 1] - ang[i] for i in range(n - 1)] + [ang[0] + 2 * math.pi - ang[-1]]
        if all(_close(g * mean_r, 2 * math.pi / n * mean_r, tol) for g in gaps):
            return regular_ngon(n)
    if n == 3:
        d = [abs(a - b) for a, b in combinations(pts, 2)]
        if _close(max(d), min(d), tol):
            return EQUILATERAL_TRIANGLE
    if n == 4:
        q = sorted(pts, key=lambda p: cmath.phase(p - c))
        s = [abs(q[i] - q[(i + 1) % 4]) for i in range(4)]
        if (
            _close(s[0], s[2], tol)
            and _close(s[1], s[3], tol)
            and _close(abs(q[0] - q[2]), abs(q[1] - q[3]), tol)
        ):
            return RECTANGLE
    return NO_SHAPE


def _finite_data(P: Polynomial):
    if P.degree < 1:
        raise PreconditionUnmet("geometry checks need a non-constant polynomial")
    locs = [l for l in fixed_points(RationalMap.from_polynomial(P)) if not is_inf(l.point)]
    dP = P.derivative()
    pts = tuple(complex(l.point) for l in locs)
    lams = tuple(complex(dP(z)) for z in pts)
    mults = tuple(l.multiplicity for l in locs)
    return pts, lams, mults


def _shape_of(pts: Sequence[complex]) -> Shape:
    if len(pts) < 2:
        return NO_SHAPE
    try:
        return shape_detect(pts)
    except DuplicatePoints:
        return NO_SHAPE


def _real_part_one(P: Polynomial, pts, lams, mults, shape: Shape):
    tau = config.get().tau_mult
    flag = all(abs(l.real - 1) <= tau for l in lams)
    theorem = None
    if P.degree == 2:
        c, _ = normalize_quadratic(P)
        predicted = abs(c.imag) <= tau * max(1.0, abs(c)) and c.real >= 0.25 - tau
        theorem = predicted == flag
    elif P.degree == 3 and len(pts) == 3 and all(m == 1 for m in mults):
        predicted = shape == COLLINEAR and any(abs(l.real - 1) <= tau for l in lams)
        theorem = predicted == flag
    return flag, theorem


def _equidistance(P: Polynomial, pts, lams, mults, shape: Shape):
    tau = config.get().tau_geo
    if not pts:
        return False, None, None, "no-finite-fixed-points"
    if all(m >= 2 for m in mults):
        return True, 0.0, None, "all-multiple"
    if any(m >= 2 for m in mults):
        return False, None, None, "mixed-simple-multiple"
    dist = [abs(l - 1) for l in lams]
    top = max(dist)
    equi = (top - min(dist)) <= tau * max(top, 1e-300)
    common = float(np.mean(dist)) if equi else None
    theorem = None
    if P.degree == 3 and len(pts) == 3:
        theorem = equi == shape.is_equilateral_triangle
    elif P.degree == 4 and len(pts) == 4:
        # equidistance forces a rectangle; rectangles always give equidistance
        theorem = equi == shape.is_rectangle
    return equi, common, theorem, None


def geometry_verdict(P: Polynomial) -> GeometryVerdict:
    """Both multiplier-geometry checks on the finite fixed points of P."""
    pts, lams, mults = _finite_data(P)
    shape = _shape_of(pts)
    rp1, rp_theorem = _real_part_one(P, pts, lams, mults, shape)
    equi, common, eq_theorem, reason = _equidistance(P, pts, lams, mults, shape)
    return GeometryVerdict(
        equidistant=equi,
        common_distance=common,
        shape=shape,
        all_real_part_one=rp1,
        fixed_points=pts,
        multipliers=lams,
        multiplicities=mults,
        real_part_theorem=rp_theorem,
        equidistance_theorem=eq_theorem,
        reason=reason,
    )


def real_part_one_check(P: Polynomial) -> GeometryVerdict:
    """Do all finite multipliers of P have real part 1?

    For quadratics the answer is cross-checked against c >= 1/4 with c real
    (after normalizing to z^2 + c); for cubics with three simple fixed
    points, against collinearity plus one multiplier of real part 1.  The
    agreement is reported in ``real_part_theorem``.
    """
    return geometry_verdict(P)


def equidistance_check(P: Polynomial) -> GeometryVerdict:
    """Are all finite multipliers of P at the same distance from 1?"""
    return geometry_verdict(P)
