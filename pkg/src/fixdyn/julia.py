"""Escape-time pictures of filled Julia sets, written as binary PPM."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Polynomial
from .errors import IoFailure, PreconditionUnmet
from .geometry import construct_remark5


@dataclass(frozen=True)
class RenderConfig:
    center: complex = 0j
    half_width: float = 2.0
    width: int = 256
    height: int = 256
    max_iter: int = 400
    escape_radius_override: Optional[float] = None
    # |P(z) - z| <= stall_tol * max(1, |z|) means the orbit sits on a fixed point
    stall_tol: float = 1e-12

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("resolution must be at least 16x16")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.escape_radius_override is not None and not self.escape_radius_override > 0:
            raise ValueError("escape radius override must be positive")

    @property
    def half_height(self) -> float:
        return self.half_width * self.height / self.width

    def pixel_centers(self) -> np.ndarray:
        """Complex coordinates of pixel centers; row 0 is the top edge."""
        dx = 2 * self.half_width / self.width
        dy = 2 * self.half_height / self.height
        x = self.center.real - self.half_width + (np.arange(self.width) + 0.5) * dx
        y = self.center.imag + self.half_height - (np.arange(self.height) + 0.5) * dy
        return x[None, :] + 1j * y[:, None]


@dataclass(frozen=True)
class EscapeGrid:
    width: int
    height: int
    max_iter: int
    cells: np.ndarray  # (height, width) escape counts; max_iter means "stayed bounded"

    def __post_init__(self):
        if self.cells.shape != (self.height, self.width):
            raise ValueError("cells must have shape (height, width)")

    @property
    def bounded(self) -> np.ndarray:
        return self.cells == self.max_iter


def escape_radius(P: Polynomial) -> float:
    """max(1, (2 + sum_{i<n} |a_i|) / |a_n|).

    Beyond this radius |P(z)| >= 2|z|, so any orbit leaving the disc escapes
    to infinity.
    """
    if P.degree < 2:
        raise PreconditionUnmet("escape radius needs degree >= 2")
    s = sum(abs(a) for a in P.coeffs[:-1])
    return max(1.0, (2.0 + s) / abs(P.lead))


def _radius(P: Polynomial, cfg: RenderConfig) -> float:
    return cfg.escape_radius_override or escape_radius(P)


def escape_time(P: Polynomial, z0: complex, cfg: RenderConfig = RenderConfig()) -> int:
    """Least n in 1..max_iter with |P^n(z0)| > R, else max_iter.

    An orbit that stops moving (a step shorter than ``stall_tol`` relative)
    has reached a fixed point and is reported as bounded.  Without this, a
    repelling fixed point amplifies the rounding error of P(z0) and its
    computed orbit escapes even though the true orbit is constant.
    """
    R = _radius(P, cfg)
    z = complex(z0)
    for n in range(1, cfg.max_iter + 1):
        w = P(z)
        if abs(w) > R:
            return n
        if abs(w - z) <= cfg.stall_tol * max(1.0, abs(z)):
            return cfg.max_iter
        z = w
    return cfg.max_iter


def render(P: Polynomial, cfg: RenderConfig) -> EscapeGrid:
    """Escape time at every pixel center of the window.

    Each pixel follows exactly the scalar recurrence of ``escape_time``; the
    numpy loop only batches pixels that have not escaped yet.
    """
    if P.degree < 2:
        raise PreconditionUnmet("rendering needs degree >= 2")
    R = _radius(P, cfg)
    z = cfg.pixel_centers().ravel()
    cells = np.full(z.shape, cfg.max_iter, dtype=np.int64)
    live = np.arange(z.size)
    coeffs = P.coeffs
    for n in range(1, cfg.max_iter + 1):
        if live.size == 0:
            break
        w = z[live]
        acc = np.full(w.shape, coeffs[-1], dtype=complex)
        for a in reversed(coeffs[:-1]):
            acc = acc * w + a
        out = np.abs(acc) > R
        stalled = ~out & (np.abs(acc - w) <= cfg.stall_tol * np.maximum(1.0, np.abs(w)))
        z[live] = acc
        cells[live[out]] = n
        live = live[~(out | stalled)]
    return EscapeGrid(cfg.width, cfg.height, cfg.max_iter, cells.reshape(cfg.height, cfg.width))


def to_gray(grid: EscapeGrid) -> np.ndarray:
    n = grid.cells.astype(float)
    gray = np.rint(255.0 * (1.0 - n / grid.max_iter))
    gray[grid.bounded] = 0
    return gray.astype(np.uint8)


def write_image(grid: EscapeGrid, path) -> None:
    """Binary PPM (P6).  Bounded pixels are black, escapes get a gray ramp."""
    gray = to_gray(grid)
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode("ascii")
    try:
        with open(os.fspath(path), "wb") as fh:
            fh.write(header)
            fh.write(rgb.tobytes())
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_ppm(path) -> tuple[int, int, np.ndarray]:
    """Read back a P6 file written by :func:`write_image`."""
    with open(os.fspath(path), "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not an 8-bit P6 file")
    w, h = (int(v) for v in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8)
    if pixels.size != w * h * 3:
        raise ValueError("truncated PPM payload")
    return w, h, pixels.reshape(h, w, 3)


# Built-in figure presets (k, alpha) for k z^3 - (k + k alpha) z^2 + (k alpha + 1) z.
FIGURES = {
    "2a": (1.2j, 1 / 1.2),
    "2b": (0.01j, 100.0),
}


def figure_polynomial(name: str) -> Polynomial:
    k, alpha = FIGURES[name]
    return construct_remark5(k, alpha)


def figure_fixed_points(name: str) -> list[complex]:
    return [0j, 1 + 0j, complex(FIGURES[name][1])]


def figure_config(name: str) -> RenderConfig:
    if name not in FIGURES:
        raise KeyError(name)
    # window chosen to hold 0, 1 and (for 2a) 1/1.2; 2b's third fixed point, 100, lies far outside
    return RenderConfig(center=0.5 + 0j, half_width=1.5, width=800, height=800, max_iter=400)
