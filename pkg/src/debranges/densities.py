"""Registry of built-in outer log-modulus densities.

An outer factor is described by w(theta) = log|b(e^{i theta})| <= 0.  Whether
the boundary integrals built from w converge is not something quadrature can
decide, so every density ships analytic flags written by hand:

* ``criterion_finite(theta0, order)``: is
  int |w(t)| / |e^{i theta0} - e^{it}|^(2N+2) dm(t) finite?
* ``log_one_minus_diverges``: is int log(1 - e^{w}) dm = -infinity
  (i.e. is b an extreme point of the unit ball)?

Angles are radians here; the rotation of an :class:`OuterPart` is applied on
top of the registry's reference position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi
ANGLE_TOL = 1e-12


def wrap(theta):
    """Reduce angles to [0, 2pi)."""
    out = np.mod(theta, TWO_PI)
    out = np.where(out >= TWO_PI, 0.0, out)  # np.mod(-tiny, 2pi) rounds to 2pi
    return out if np.ndim(out) else float(out)


def angle_distance(a, b):
    """Distance between angles along the circle, in [0, pi]."""
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b) + np.pi, TWO_PI) - np.pi)
    return d if np.ndim(d) else float(d)


def in_closed_arc(theta, start, length, tol=ANGLE_TOL):
    """True when ``theta`` lies on the closed arc [start, start + length]."""
    offset = np.mod(np.asarray(theta) - start, TWO_PI)
    inside = (offset <= length + tol) | (offset >= TWO_PI - tol)
    return inside if np.ndim(inside) else bool(inside)


@dataclass(frozen=True)
class DensityModel:
    name: str
    log_modulus: Callable[[np.ndarray], np.ndarray]
    singular_angles: tuple[float, ...]
    nonunimodular_arcs: tuple[tuple[float, float], ...]  # (start, length), closed
    criterion_finite: Callable[[float, int], bool]
    log_one_minus_diverges: bool | None
    one_minus_modulus: Callable[[np.ndarray], np.ndarray] | None = None
    description: str = ""


def _half_shift_w(t):
    # log|cos(t/2)|: log1p form near t = 0, direct form near t = pi
    c = np.abs(np.cos(np.asarray(t) / 2.0))
    with np.errstate(divide="ignore"):
        direct = np.log(c)
    return np.where(c > 0.5, 0.5 * np.log1p(-np.sin(np.asarray(t) / 2.0) ** 2), direct)


def _half_shift_one_minus(t):
    # 1 - |cos(t/2)|, stable near t = 0 and t = 2pi
    c = np.abs(np.cos(np.asarray(t) / 2.0))
    s2 = np.sin(np.asarray(t) / 2.0) ** 2
    return s2 / (1.0 + c)


def _half_shift_flag(theta0, order):
    return angle_distance(theta0, 0.0) <= ANGLE_TOL and order == 0


def _constant_half_w(t):
    return np.full(np.shape(t), np.log(0.5))


_DAMPED_START, _DAMPED_LENGTH = 0.75 * np.pi, 0.5 * np.pi


def _arc_damped_w(t):
    inside = in_closed_arc(np.asarray(t), _DAMPED_START, _DAMPED_LENGTH, tol=0.0)
    return np.where(inside, -1.0, 0.0)


def _arc_damped_flag(theta0, order):
    return not in_closed_arc(theta0, _DAMPED_START, _DAMPED_LENGTH)


REGISTRY: dict[str, DensityModel] = {
    "half-shift": DensityModel(
        name="half-shift",
        log_modulus=_half_shift_w,
        singular_angles=(0.0, np.pi),
        nonunimodular_arcs=((0.0, TWO_PI),),
        criterion_finite=_half_shift_flag,
        log_one_minus_diverges=False,
        one_minus_modulus=_half_shift_one_minus,
        description="log|cos(t/2)|, the boundary modulus of (1+z)/2",
    ),
    "constant-half": DensityModel(
        name="constant-half",
        log_modulus=_constant_half_w,
        singular_angles=(),
        nonunimodular_arcs=((0.0, TWO_PI),),
        criterion_finite=lambda theta0, order: False,
        log_one_minus_diverges=False,
        description="log(1/2), the constant function 1/2",
    ),
    "arc-damped": DensityModel(
        name="arc-damped",
        log_modulus=_arc_damped_w,
        singular_angles=(_DAMPED_START, _DAMPED_START + _DAMPED_LENGTH),
        nonunimodular_arcs=((_DAMPED_START, _DAMPED_LENGTH),),
        criterion_finite=_arc_damped_flag,
        log_one_minus_diverges=True,
        description="-1 on the arc [3pi/4, 5pi/4], 0 elsewhere",
    ),
}


@dataclass(frozen=True)
class OuterPart:
    """A registry density, optionally rotated, with per-point flag overrides.

    ``flag_overrides`` holds ``(theta, max_order)`` pairs: at boundary angle
    ``theta`` the criterion integral is finite exactly for orders
    ``N <= max_order`` (``max_order = -1`` means divergent for every order).
    """

    density_id: str
    rotation: float = 0.0
    flag_overrides: tuple[tuple[float, int], ...] = field(default=())

    def __post_init__(self):
        if self.density_id not in REGISTRY:
            raise KeyError(f"unknown outer density {self.density_id!r}; "
                           f"known: {sorted(REGISTRY)}")

    @property
    def model(self) -> DensityModel:
        return REGISTRY[self.density_id]

    def log_modulus(self, theta):
        return self.model.log_modulus(np.asarray(theta, dtype=float) - self.rotation)

    def one_minus_modulus(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.model.one_minus_modulus is not None:
            return self.model.one_minus_modulus(theta - self.rotation)
        return -np.expm1(self.log_modulus(theta))

    @property
    def singular_angles(self) -> tuple[float, ...]:
        return tuple(wrap(a + self.rotation) for a in self.model.singular_angles)

    @property
    def nonunimodular_arcs(self) -> tuple[tuple[float, float], ...]:
        return tuple((wrap(s + self.rotation), length)
                     for s, length in self.model.nonunimodular_arcs)

    def criterion_finite(self, theta0: float, order: int) -> bool:
        for theta, max_order in self.flag_overrides:
            if angle_distance(theta, theta0) <= ANGLE_TOL:
                return order <= max_order
        return bool(self.model.criterion_finite(wrap(theta0 - self.rotation), order))

    def rotated(self, phi: float) -> "OuterPart":
        return OuterPart(self.density_id, self.rotation + phi,
                         tuple((wrap(t + phi), m) for t, m in self.flag_overrides))
