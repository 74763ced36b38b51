"""Numerical tolerances shared by every module.

Values live in a context variable so that callers (the CLI in particular)
can override them for a block of work without threading a settings object
through every function signature::

    with config.override(tau_mult=1e-8):
        report = analyze(R)
"""

from __future__ import annotations

import contextvars
import dataclasses
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # coefficient trimming, relative to max |a_i|
    trim: float = 1e-14
    # numerical coprimality of numerator/denominator roots, relative to scale
    tau_root: float = 1e-8
    # Moebius determinant floor
    tau_det: float = 1e-12
    # |R(z0) - z0| acceptance, relative to scale
    tau_fix: float = 1e-8
    # |lambda - 1| below which a fixed point counts as multiple
    tau_mult: float = 1e-6
    # root finder residual target
    root_tol: float = 1e-12
    root_max_iter: int = 500
    # relative shape/equidistance tolerance
    tau_geo: float = 1e-7
    # highest root-of-unity order tried when classifying indifferent points
    rational_order_cap: int = 64
    compose_cap: int = 4096

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)


DEFAULT = Tolerances()
_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "fixdyn_tolerances", default=DEFAULT
)


def get() -> Tolerances:
    return _current.get()


@contextmanager
def override(**changes):
    token = _current.set(_current.get().replace(**changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def field_names() -> list[str]:
    return [f.name for f in dataclasses.fields(Tolerances)]
