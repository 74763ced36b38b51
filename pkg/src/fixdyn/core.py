"""Polynomials, rational maps and Moebius maps over the complex numbers.

All objects are immutable.  Coefficients are stored in ascending power
order, ``coeffs[i]`` multiplying ``z**i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import config
from .errors import CapExceeded, DegenerateMap, IdentityMap, InvariantViolation


class _Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ExtendedComplex = Union[complex, _Infinity]


def is_inf(z) -> bool:
    return z is INF


def _as_complex_tuple(values: Iterable) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with complex coefficients ``a_0 ... a_n`` (ascending).

    Leading coefficients smaller than ``trim * max|a_i|`` are dropped on
    construction, so ``degree`` always refers to a nonzero leading term.
    The zero polynomial is ``Polynomial([0])``.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable):
        c = list(_as_complex_tuple(coeffs))
        if not c:
            c = [0j]
        big = max(abs(a) for a in c)
        cut = config.get().trim * big
        while len(c) > 1 and abs(c[-1]) <= cut:
            c.pop()
        if len(c) == 1 and abs(c[0]) == 0:
            c = [0j]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, n: int, coeff: complex = 1) -> "Polynomial":
        return cls([0] * n + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1) -> "Polynomial":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = npoly.polymul(c, [-complex(r), 1])
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return self.coeffs[-1]

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(a) for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def __call__(self, z):
        return poly_eval(self, z)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.coeffs, dtype=dtype or complex)

    def derivative(self, order: int = 1) -> "Polynomial":
        p = self
        for _ in range(order):
            p = poly_derivative(p)
        return p

    def abs_eval(self, z):
        """Evaluate ``sum |a_i| |z|^i``, the rounding-error envelope of p(z)."""
        r = np.abs(z)
        acc = 0.0
        for a in reversed(self.coeffs):
            acc = acc * r + abs(a)
        return acc

    def taylor(self, z0: complex) -> "Polynomial":
        """Coefficients of ``t -> p(z0 + t)``."""
        return poly_compose(self, Polynomial([z0, 1]))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        return Polynomial(npoly.polyadd(self.coeffs, self._coerce(other).coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-a for a in self.coeffs])

    def __sub__(self, other):
        return Polynomial(npoly.polysub(self.coeffs, self._coerce(other).coeffs))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return Polynomial(npoly.polymul(self.coeffs, self._coerce(other).coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return Polynomial(npoly.polypow(self.coeffs, n)) if n else Polynomial([1])

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


IDENTITY_POLY = Polynomial([0, 1])


def poly_eval(p: Polynomial, z):
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    acc = 0j
    for a in reversed(p.coeffs):
        acc = acc * z + a
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0])
    return Polynomial([i * a for i, a in enumerate(p.coeffs) if i > 0])


def poly_compose(p: Polynomial, q: Polynomial, cap: int | None = None) -> Polynomial:
    """Coefficients of ``p(q(z))`` by Horner's scheme on polynomials."""
    cap = config.get().compose_cap if cap is None else cap
    if p.degree * q.degree > cap:
        raise CapExceeded(
            f"composition degree {p.degree * q.degree} exceeds cap {cap}"
        )
    acc = np.array([p.coeffs[-1]], dtype=complex)
    qc = np.array(q.coeffs, dtype=complex)
    for a in reversed(p.coeffs[:-1]):
        acc = npoly.polyadd(npoly.polymul(acc, qc), [a])
    return Polynomial(acc)


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d) with ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for f in "abcd":
            object.__setattr__(self, f, complex(getattr(self, f)))
        size = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if size == 0 or abs(self.det) <= config.get().tau_det * size * size:
            raise InvariantViolation("Moebius map has vanishing determinant")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def affine(cls, a: complex, b: complex = 0) -> "MobiusMap":
        return cls(a, b, 0, 1)

    @classmethod
    def inversion(cls) -> "MobiusMap":
        return cls(0, 1, 1, 0)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    @property
    def is_affine(self) -> bool:
        return self.c == 0

    def __call__(self, z: ExtendedComplex) -> ExtendedComplex:
        return mobius_apply(self, z)


def mobius_apply(m: MobiusMap, z: ExtendedComplex) -> ExtendedComplex:
    if is_inf(z):
        return INF if m.c == 0 else m.a / m.c
    z = complex(z)
    den = m.c * z + m.d
    if abs(den) <= 1e-15 * (abs(m.c * z) + abs(m.d)):
        return INF
    return (m.a * z + m.b) / den


@dataclass(frozen=True)
class RationalMap:
    """R = P / Q with P, Q numerically coprime.

    ``degree`` is ``max(deg P, deg Q)``.  A common root of P and Q (within
    ``tau_root * max(1, |root|)``) raises :class:`DegenerateMap`.
    """

    numerator: Polynomial
    denominator: Polynomial

    def __init__(self, numerator, denominator=None, check: bool = True):
        num = numerator if isinstance(numerator, Polynomial) else Polynomial(numerator)
        if denominator is None:
            den = Polynomial([1])
        elif isinstance(denominator, Polynomial):
            den = denominator
        else:
            den = Polynomial(denominator)
        if den.is_zero:
            raise InvariantViolation("denominator is the zero polynomial")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        if check:
            _check_coprime(num, den)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalMap":
        return cls(p, Polynomial([1]), check=False)

    @property
    def degree(self) -> int:
        return max(self.numerator.degree, self.denominator.degree)

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    @property
    def fixes_infinity(self) -> bool:
        return self.numerator.degree > self.denominator.degree

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial:
            raise ValueError("map is not a polynomial")
        return self.numerator * (1 / self.denominator.coeffs[0])

    def __call__(self, z):
        return poly_eval(self.numerator, z) / poly_eval(self.denominator, z)

    def derivative_at(self, z):
        p, q = self.numerator, self.denominator
        pz, qz = p(z), q(z)
        return (p.derivative()(z) * qz - pz * q.derivative()(z)) / (qz * qz)

    def evaluate(self, z: ExtendedComplex) -> ExtendedComplex:
        """Value on the Riemann sphere, including poles and infinity."""
        p, q = self.numerator, self.denominator
        if is_inf(z):
            if p.degree > q.degree:
                return INF
            if p.degree < q.degree:
                return 0j
            return p.lead / q.lead
        qz = q(z)
        if qz == 0:
            return INF
        return p(z) / qz


def _check_coprime(num: Polynomial, den: Polynomial) -> None:
    if num.degree < 1 or den.degree < 1:
        return
    from .roots import find_roots

    tau = config.get().tau_root
    rn = [c.center for c in find_roots(num)]
    rd = [c.center for c in find_roots(den)]
    for x in rn:
        for y in rd:
            if abs(x - y) <= tau * max(1.0, abs(x)):
                raise DegenerateMap(f"numerator and denominator share the root {x:.6g}")


def _homogenize(p: Polynomial, n: int, inv: MobiusMap) -> np.ndarray:
    """Numerator of p(inv(w)) after clearing the denominator (cw + d)^n."""
    num = np.array([inv.b, inv.a])
    den = np.array([inv.d, inv.c])
    out = np.zeros(n + 1, dtype=complex)
    for i, coef in enumerate(p.coeffs):
        if coef == 0:
            continue
        term = npoly.polymul(npoly.polypow(num, i), npoly.polypow(den, n - i)) * coef
        out[: len(term)] += term
    return out


def conjugate_map(R: RationalMap, g: MobiusMap) -> RationalMap:
    """Return S = g o R o g^{-1} as a rational map of the same degree.

    The substitution is done on homogeneous coefficient vectors, so no common
    factor is ever introduced; the coprimality check of the result is kept as
    a guard against numerical breakdown.
    """
    n = R.degree
    inv = g.inverse()
    P = _homogenize(R.numerator, n, inv)
    Q = _homogenize(R.denominator, n, inv)
    num = Polynomial(g.a * P + g.b * Q)
    den = Polynomial(g.c * P + g.d * Q)
    if den.is_zero:
        raise DegenerateMap("conjugated denominator vanished")
    try:
        S = RationalMap(num, den)
    except DegenerateMap as exc:
        raise DegenerateMap(f"conjugation lost coprimality: {exc}") from exc
    if S.degree != n:
        raise DegenerateMap(f"conjugation changed degree {n} -> {S.degree}")
    return S


def fixed_point_polynomial(R: RationalMap) -> Polynomial:
    """P(z) - z Q(z), whose roots are the finite fixed points of R."""
    p = np.array(R.numerator.coeffs)
    zq = np.concatenate([[0j], R.denominator.coeffs])
    raw = npoly.polysub(p, zq)
    ref = max(np.max(np.abs(p)), np.max(np.abs(zq)))
    if np.max(np.abs(raw)) <= config.get().trim * ref:
        raise IdentityMap("R(z) - z vanishes identically")
    return Polynomial(raw)
