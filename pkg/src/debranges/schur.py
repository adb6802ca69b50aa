"""Schur functions given by canonical factorization data.

b = gamma * B * S * F where B is a Blaschke product, S the singular inner
factor of a finite atomic measure and F the outer factor of a registry
density.  Outside the disc b is continued by b(z) = 1 / conj(b(1/conj z)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .densities import ANGLE_TOL, OuterPart, angle_distance, wrap
from .errors import PoleAtReflectedZero, SpecError
from .quadrature import TWO_PI, cauchy_derivatives, integrate_pieces

_ZERO_CHUNK = 512
_CIRCLE_TOL = 1e-14


@dataclass(frozen=True)
class ZeroFamily:
    """Zeros a_n = (1 - n^-alpha) exp(i (phase + n^-beta)), n = 1..count.

    They accumulate at exp(i phase).  alpha > 1 is the declared Blaschke
    condition (1 - |a_n| = n^-alpha is summable).
    """

    modulus_exponent: float
    argument_exponent: float
    count: int
    phase: float = 0.0

    def __post_init__(self):
        if not self.modulus_exponent > 1:
            raise SpecError("zero_family: modulus_exponent must exceed 1 "
                            "(Blaschke condition)")
        if not self.argument_exponent > 0:
            raise SpecError("zero_family: argument_exponent must be positive")
        if int(self.count) != self.count or self.count < 1:
            raise SpecError("zero_family: count must be a positive integer")

    def zeros(self) -> np.ndarray:
        n = np.arange(1, self.count + 1, dtype=float)
        moduli = 1.0 - n ** (-self.modulus_exponent)
        return moduli * np.exp(1j * (self.phase + n ** (-self.argument_exponent)))

    def criterion_terms(self, theta0: float, order: int) -> np.ndarray:
        """(1 - |a_n|^2) / |zeta0 - a_n|^(2N+2) from the exact moduli.

        With 1 - |a_n| = n^-alpha below double resolution for large n, the
        stored zeros lose these digits; here 1 - |a|^2 = e (2 - e) and
        |zeta0 - a|^2 = e^2 + 4 (1 - e) sin^2((theta0 - arg a)/2), e = n^-alpha.
        """
        n = np.arange(1, self.count + 1, dtype=float)
        e = n ** (-self.modulus_exponent)
        angle = self.phase + n ** (-self.argument_exponent)
        dist_sq = e * e + 4.0 * (1.0 - e) * np.sin((theta0 - angle) / 2.0) ** 2
        return e * (2.0 - e) / dist_sq ** (order + 1)

    @property
    def accumulation_angle(self) -> float:
        return wrap(self.phase)

    def term_decay_exponent(self, theta0: float, order: int) -> float:
        """p such that (1-|a_n|^2)/|zeta0 - a_n|^(2N+2) behaves like n^-p."""
        alpha, beta = self.modulus_exponent, self.argument_exponent
        if angle_distance(theta0, self.accumulation_angle) <= ANGLE_TOL:
            return alpha - min(alpha, beta) * (2 * order + 2)
        return alpha

    def blaschke_diagnostic(self) -> dict:
        """Partial sums of 1 - |a_n| at the truncation and at half of it."""
        n = np.arange(1, self.count + 1, dtype=float)
        terms = n ** (-self.modulus_exponent)
        total = float(np.sum(terms))
        half = float(np.sum(terms[: self.count // 2]))
        return {"partial_sum": total, "last_half_increment": total - half,
                "declared_convergent": self.modulus_exponent > 1}

    def rotated(self, phi: float) -> "ZeroFamily":
        return ZeroFamily(self.modulus_exponent, self.argument_exponent, self.count,
                          self.phase + phi)


@dataclass(frozen=True)
class SchurFunctionSpec:
    """Factorization data of a function b in the unit ball of H-infinity.

    ``zeros`` is a tuple of points of the open disc or a :class:`ZeroFamily`;
    ``atoms`` holds ``(angle, weight)`` pairs of the singular measure.
    """

    gamma: complex = 1.0
    zeros: tuple[complex, ...] | ZeroFamily = ()
    atoms: tuple[tuple[float, float], ...] = ()
    outer: OuterPart | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        gamma = complex(self.gamma)
        if abs(abs(gamma) - 1.0) > 1e-12:
            raise SpecError(f"gamma: |gamma| = {abs(gamma)!r}, expected 1")
        object.__setattr__(self, "gamma", gamma)
        if not isinstance(self.zeros, ZeroFamily):
            zeros = tuple(complex(a) for a in self.zeros)
            for i, a in enumerate(zeros):
                if not abs(a) < 1:
                    raise SpecError(f"zeros[{i}]: |a| = {abs(a)!r} is not inside the disc")
            object.__setattr__(self, "zeros", zeros)
        atoms = tuple((wrap(float(t)), float(s)) for t, s in self.atoms)
        for i, (t, s) in enumerate(atoms):
            if not s > 0:
                raise SpecError(f"atoms[{i}]: weight {s!r} must be positive")
            for j in range(i):
                if angle_distance(t, atoms[j][0]) <= ANGLE_TOL:
                    raise SpecError(f"atoms[{i}]: angle coincides with atoms[{j}]")
        object.__setattr__(self, "atoms", atoms)

    @cached_property
    def zero_array(self) -> np.ndarray:
        if isinstance(self.zeros, ZeroFamily):
            return self.zeros.zeros()
        return np.array(self.zeros, dtype=complex)

    @property
    def is_inner(self) -> bool:
        return self.outer is None

    @property
    def has_zero_family(self) -> bool:
        return isinstance(self.zeros, ZeroFamily)

    @property
    def is_finite_blaschke(self) -> bool:
        return not self.has_zero_family and not self.atoms and self.outer is None

    @property
    def representable_class(self) -> str:
        return ("Blaschke product x singular inner factor of a finite atomic measure "
                "x outer factor of a registry density")

    def rotated(self, phi: float) -> "SchurFunctionSpec":
        """Spec of z -> b(exp(-i phi) z)."""
        if isinstance(self.zeros, ZeroFamily):
            zeros = self.zeros.rotated(phi)
            at_origin = 1  # the family's first zero is 0
        else:
            zeros = tuple(a * np.exp(1j * phi) for a in self.zeros)
            at_origin = sum(1 for a in self.zeros if a == 0)
        gamma = self.gamma * np.exp(-1j * phi * at_origin)
        atoms = tuple((t + phi, s) for t, s in self.atoms)
        outer = self.outer.rotated(phi) if self.outer is not None else None
        return SchurFunctionSpec(gamma, zeros, atoms, outer, label=self.label)


def _blaschke(zeros: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.ones_like(z)
    for start in range(0, zeros.size, _ZERO_CHUNK):
        a = zeros[start:start + _ZERO_CHUNK][:, None]
        safe = np.where(a == 0, 1.0, a)
        factor = np.where(a == 0, z[None, :],
                          (np.abs(a) / safe) * (a - z[None, :]) / (1.0 - np.conj(a) * z[None, :]))
        out = out * np.prod(factor, axis=0)
    return out


def _singular_exponent(atoms, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for theta, sigma in atoms:
        zeta = np.exp(1j * theta)
        acc = acc - sigma * (zeta + z) / (zeta - z)
    return acc


def _outer_breaks(outer: OuterPart, z: np.ndarray, extra=()) -> np.ndarray:
    fixed = [0.0, TWO_PI, *outer.singular_angles, *extra]
    arg = np.angle(z)
    depth = np.maximum(1.0 - np.abs(z), 1e-16)
    near = [arg + k * depth for k in (-10.0, -1.0, 0.0, 1.0, 10.0)]
    cols = [np.full(z.shape, f) for f in fixed] + [wrap(c) for c in near]
    return np.stack(cols, axis=-1)


def outer_exponent(outer: OuterPart, z) -> np.ndarray:
    """int (zeta+z)/(zeta-z) w dm for interior points z (any shape)."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    breaks = _outer_breaks(outer, flat)

    def integrand(t, zz):
        zeta = np.exp(1j * t)
        return (zeta + zz) / (zeta - zz) * outer.log_modulus(t) / TWO_PI

    val = integrate_pieces(integrand, breaks, args=(flat[:, None],),
                           rel_allowance=_herglotz_allowance(flat))
    return val.reshape(z.shape)


def _herglotz_allowance(z):
    # roundoff in zeta - z limits accuracy to about eps/(1-|z|) near the circle
    return 1e-10 + 1e-13 / np.maximum(1.0 - np.abs(z), 1e-16)


def _interior(spec: SchurFunctionSpec, z: np.ndarray) -> np.ndarray:
    exponent = _singular_exponent(spec.atoms, z)
    if spec.outer is not None:
        exponent = exponent + outer_exponent(spec.outer, z)
    value = spec.gamma * _blaschke(spec.zero_array, z)
    return value * np.exp(exponent)


def _as_points(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ravel()


def eval_b(spec: SchurFunctionSpec, z):
    """Evaluate b at points off the unit circle (scalar or array)."""
    arr, flat = _as_points(z)
    mod = np.abs(flat)
    if np.any(np.abs(mod - 1.0) <= _CIRCLE_TOL):
        raise ValueError("eval_b is defined off the unit circle; use boundary_values on T")
    out = np.empty_like(flat)
    inside = mod < 1.0
    if np.any(inside):
        out[inside] = _interior(spec, flat[inside])
    if np.any(~inside):
        ext = flat[~inside]
        zeros = spec.zero_array
        nonzero = zeros[zeros != 0]
        if nonzero.size:
            poles = 1.0 / np.conj(nonzero)
            for w in ext:
                if np.min(np.abs(poles - w)) <= 1e-12:
                    raise PoleAtReflectedZero(f"z = {w} is a reflected zero 1/conj(a)")
        inner_vals = _interior(spec, 1.0 / np.conj(ext))
        if np.any(inner_vals == 0):
            raise PoleAtReflectedZero("exterior point reflects onto a zero of b")
        out[~inside] = 1.0 / np.conj(inner_vals)
    out = out.reshape(arr.shape)
    return complex(out) if out.ndim == 0 else out


def boundary_values(spec: SchurFunctionSpec, theta):
    """b(e^{i theta}) for inner specs, from the factorization formula on T.

    Blaschke factors and atoms away from ``theta`` are analytic across the
    circle, so the formula is its own boundary limit there.
    """
    if spec.outer is not None:
        raise ValueError("boundary values of outer factors are not available in closed form")
    theta = np.asarray(theta, dtype=float)
    for t, _ in spec.atoms:
        if np.any(angle_distance(theta, t) <= ANGLE_TOL):
            raise ValueError(f"theta hits the atom at {t}")
    z = np.exp(1j * theta).ravel()
    value = spec.gamma * _blaschke(spec.zero_array, z) * np.exp(_singular_exponent(spec.atoms, z))
    value = value.reshape(theta.shape)
    return complex(value) if value.ndim == 0 else value


def eval_b_derivatives(spec: SchurFunctionSpec, omega: complex, max_order: int, **kw) -> np.ndarray:
    """[b(omega), b'(omega), ..., b^(max_order)(omega)] for |omega| < 1.

    Derivatives come from the Cauchy integral on the circle of radius
    (1 - |omega|)/2 about omega.
    """
    omega = complex(omega)
    if not abs(omega) < 1:
        raise ValueError("omega must lie in the open disc")
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    out = np.empty(max_order + 1, dtype=complex)
    out[0] = eval_b(spec, omega)
    if max_order:
        radius = (1.0 - abs(omega)) / 2.0
        out[1:] = cauchy_derivatives(lambda z: eval_b(spec, z), omega, radius, max_order, **kw)[1:]
    return out


def eval_b_prime(spec: SchurFunctionSpec, z):
    """b'(z) in closed form through the logarithmic derivative.

    Falls back to Cauchy differentiation at points that sit on a zero.
    """
    arr, flat = _as_points(z)
    if np.any(np.abs(flat) >= 1.0):
        raise ValueError("eval_b_prime is defined in the open disc")
    zeros = spec.zero_array
    b = _interior(spec, flat)
    logd = np.zeros_like(flat)
    for start in range(0, zeros.size, _ZERO_CHUNK):
        a = zeros[start:start + _ZERO_CHUNK][:, None]
        logd = logd + np.sum((np.abs(a) ** 2 - 1.0)
                             / ((a - flat[None, :]) * (1.0 - np.conj(a) * flat[None, :])), axis=0)
    for theta, sigma in spec.atoms:
        zeta = np.exp(1j * theta)
        logd = logd - 2.0 * sigma * zeta / (zeta - flat) ** 2
    if spec.outer is not None:
        def kern(t, zz):
            zeta = np.exp(1j * t)
            return 2.0 * zeta / (zeta - zz) ** 2 * spec.outer.log_modulus(t) / TWO_PI
        breaks = _outer_breaks(spec.outer, flat)
        logd = logd + integrate_pieces(kern, breaks, args=(flat[:, None],),
                                       rel_allowance=_herglotz_allowance(flat)
                                       / np.maximum(1.0 - np.abs(flat), 1e-16))
    out = b * logd
    bad = ~np.isfinite(out)
    for i in np.flatnonzero(bad):
        out[i] = eval_b_derivatives(spec, flat[i], 1)[1]
    out = out.reshape(arr.shape)
    return complex(out) if out.ndim == 0 else out


def real_interval_trace(spec: SchurFunctionSpec, r_grid) -> np.ndarray:
    """b along the radius towards 1 (the spec is assumed rotated so the
    probed boundary point is 1)."""
    r = np.asarray(r_grid, dtype=float)
    if np.any((r <= 0) | (r >= 1)):
        raise ValueError("r_grid must lie in (0, 1)")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r_grid must be increasing")
    return np.asarray(eval_b(spec, r.astype(complex)))


def describe(spec: SchurFunctionSpec) -> dict:
    """Plain summary of the factorization data."""
    info = {
        "gamma": spec.gamma,
        "zero_count": int(spec.zero_array.size),
        "atoms": list(spec.atoms),
        "outer": None if spec.outer is None else spec.outer.density_id,
        "inner": spec.is_inner,
        "finite_blaschke": spec.is_finite_blaschke,
        "representable_class": spec.representable_class,
    }
    if isinstance(spec.zeros, ZeroFamily):
        fam = spec.zeros
        info["zero_family"] = {
            "modulus_exponent": fam.modulus_exponent,
            "argument_exponent": fam.argument_exponent,
            "truncation": fam.count,
            "accumulation_angle": fam.accumulation_angle,
            **fam.blaschke_diagnostic(),
        }
    else:
        info["zeros"] = list(spec.zeros)
    return info


__all__ = [
    "ZeroFamily", "SchurFunctionSpec", "eval_b", "eval_b_derivatives", "eval_b_prime",
    "boundary_values", "real_interval_trace", "outer_exponent", "describe",
]
