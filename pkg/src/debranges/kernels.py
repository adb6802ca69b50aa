"""Reproducing kernels of H(b), their derivatives in conj(omega), and
kernel norms along radii."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .densities import ANGLE_TOL, angle_distance
from .errors import NotRealResult, QuadratureFailure
from .quadrature import cauchy_taylor, circle_angles
from .schur import (_ZERO_CHUNK, SchurFunctionSpec, ZeroFamily, _singular_exponent, eval_b,
                    eval_b_derivatives)

DEFAULT_DEPTHS = tuple(range(1, 7))
BOUNDED_SPREAD = 0.05
DIVERGENT_RATIO = 10.0
IMAG_TOL = 1e-8
BREAKDOWN_FRACTION = 1e-3
_EPS = float(np.finfo(float).eps)


def kernel(spec: SchurFunctionSpec, lam, z):
    """k_lam^b(z) = (1 - conj(b(lam)) b(z)) / (1 - conj(lam) z)."""
    lam = np.asarray(lam, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = (1.0 - np.conj(eval_b(spec, lam)) * eval_b(spec, z)) / (1.0 - np.conj(lam) * z)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DerivativeKernel:
    """d^N k_omega^b / d conj(omega)^N as h(z) / (1 - conj(omega) z)^(N+1)."""

    spec: SchurFunctionSpec
    omega: complex
    order: int
    b_derivatives: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, spec: SchurFunctionSpec, omega: complex, order: int) -> "DerivativeKernel":
        if order < 0:
            raise ValueError("order must be >= 0")
        omega = complex(omega)
        return cls(spec, omega, order, eval_b_derivatives(spec, omega, order))

    def numerator(self, z, bz=None):
        n, w = self.order, self.omega
        z = np.asarray(z, dtype=complex)
        if bz is None:
            bz = eval_b(self.spec, z)
        s = np.zeros_like(z)
        for j in range(n + 1):
            s = s + (comb(n, j) * np.conj(self.b_derivatives[j]) * factorial(n - j)
                     * z ** (n - j) * (1.0 - np.conj(w) * z) ** j)
        return factorial(n) * z ** n - bz * s

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.numerator(z) / (1.0 - np.conj(self.omega) * z) ** (self.order + 1)
        return complex(out) if out.ndim == 0 else out

    def term_scale(self, z):
        """Size of the terms that cancel in h(z), over |1 - conj(omega) z|^(N+1)."""
        n, w = self.order, self.omega
        z = np.asarray(z, dtype=complex)
        s = np.zeros(z.shape)
        for j in range(n + 1):
            s = s + np.abs(comb(n, j) * self.b_derivatives[j] * factorial(n - j)
                           * z ** (n - j) * (1.0 - np.conj(w) * z) ** j)
        top = factorial(n) * np.abs(z) ** n + np.abs(eval_b(self.spec, z)) * s
        return top / np.abs(1.0 - np.conj(w) * z) ** (n + 1)


def derivative_kernel(spec: SchurFunctionSpec, omega, order: int, z):
    return DerivativeKernel.build(spec, omega, order)(z)


def kernel_norm_sq(spec: SchurFunctionSpec, omega, order: int, *, method: str = "auto",
                   with_residue: bool = False):
    """||d^N k_omega^b / d conj(omega)^N||_b^2 = (k_{omega,N}^b)^(N)(omega).

    ``method="closed-form"`` differentiates :func:`derivative_kernel` in z by
    the Cauchy integral.  That numerator cancels to about
    eps / (1 - |omega|)^(2N+1), so near the circle the result is flagged with
    :class:`NotRealResult` once rounding swamps it.

    ``method="factorized"`` (inner b only) sums the same quantity over the
    factors of b, where every term is a square and nothing cancels: for
    b = S * prod phi_i,

        k_omega = (1 - S*S)/(1 - conj(omega) z)
                  + sum_i (1 - |a_i|^2) g_i(z) conj(g_i(omega)),
        g_i = S phi_1 ... phi_{i-1} / (1 - conj(a_i) z).

    These pieces continue analytically across the circle away from atoms
    and reflected zeros, so their Cauchy circles can be much wider than
    (1 - |omega|)/2.  ``"auto"`` picks the factorized route for inner b.
    """
    omega = complex(omega)
    if order < 0:
        raise ValueError("order must be >= 0")
    if not abs(omega) < 1:
        raise ValueError("omega must lie in the open disc")
    if method == "auto":
        method = "factorized" if spec.is_inner else "closed-form"
    if method == "factorized":
        if not spec.is_inner:
            raise ValueError("the factorized route needs an inner spec")
        value, floor = _factorized_norm_sq(spec, omega, order)
    elif method == "closed-form":
        value, floor = _closed_form_norm_sq(spec, omega, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    residue = abs(value.imag)
    if residue > IMAG_TOL * max(abs(value.real), 1.0) + 10.0 * floor:
        raise NotRealResult(f"norm at omega={omega}, N={order} has imaginary part "
                            f"{value.imag:.3g}")
    if floor > BREAKDOWN_FRACTION * max(abs(value.real), 1.0):
        raise NotRealResult(f"norm at omega={omega}, N={order}: rounding floor {floor:.3g} "
                            f"swamps the value {value.real:.3g}")
    if with_residue:
        return value.real, residue
    return value.real


def _closed_form_norm_sq(spec, omega, order):
    dk = DerivativeKernel.build(spec, omega, order)
    if order == 0:
        return complex(dk(omega)), _EPS * dk.term_scale(omega)
    radius = (1.0 - abs(omega)) / 2.0
    probe = omega + radius * np.exp(1j * circle_angles(64))
    noise = 64 * _EPS * float(np.max(dk.term_scale(probe)))
    coeffs, _, _ = cauchy_taylor(dk, omega, radius, order, noise=noise)
    scale = factorial(order) / radius ** order
    return complex(coeffs[order] * scale), noise * scale


def factorized_radius(spec: SchurFunctionSpec, omega: complex) -> float:
    """Cauchy radius for the factorized route.

    At least (1 - |omega|)/2; wider when the nearest reflected zero and the
    atoms allow it (half the distance to a reflected zero or an atom, and
    small enough that the singular exponent moves by less than 1/2).
    """
    base = (1.0 - abs(omega)) / 2.0
    limits = [0.5]
    zeros = spec.zero_array
    nonzero = zeros[zeros != 0]
    if nonzero.size:
        limits.append(0.5 * float(np.min(np.abs(1.0 / np.conj(nonzero) - omega))))
    if spec.atoms:
        total = sum(s for _, s in spec.atoms)
        d = min(abs(np.exp(1j * t) - omega) for t, _ in spec.atoms)
        limits += [0.5 * d, d * d / (4.0 * total)]
    return max(base, min(limits))


def _factorized_norm_sq(spec, omega, order):
    radius = factorized_radius(spec, omega)
    scale = (factorial(order) / radius ** order) ** 2
    blaschke = _refine(lambda m: _blaschke_part(spec, omega, order, radius, m), 64, 4096)
    atomic = (0.0, 0.0)
    if spec.atoms:
        atomic = _refine(lambda m: _atomic_part(spec, omega, order, radius, m), 32, 1024)
    value = (blaschke[0] + atomic[0]) * scale
    floor = (blaschke[1] + atomic[1]) * scale
    return complex(value), floor


def _refine(level, m, m_max):
    """Double the node count until two levels agree; return (value, floor)."""
    prev, sup = level(m)
    while True:
        m *= 2
        if m > m_max:
            raise QuadratureFailure(f"factorized kernel norm did not converge with {m // 2} nodes")
        cur, sup = level(m)
        floor = 64 * _EPS * sup
        if abs(cur - prev) <= 1e-10 * abs(cur) + floor:
            return cur, floor
        prev = cur


def _blaschke_part(spec, omega, order, radius, m):
    # sum_i (1 - |a_i|^2) |N-th Taylor coefficient of g_i at omega|^2
    theta = circle_angles(m)
    z = omega + radius * np.exp(1j * theta)
    twist = np.exp(-1j * order * theta)
    run = np.exp(_singular_exponent(spec.atoms, z))
    zeros = spec.zero_array
    total, sup = 0.0, 0.0
    for start in range(0, zeros.size, _ZERO_CHUNK):
        a = zeros[start:start + _ZERO_CHUNK][:, None]
        safe = np.where(a == 0, 1.0, a)
        factors = np.where(a == 0, z[None, :],
                           (np.abs(a) / safe) * (a - z[None, :]) / (1.0 - np.conj(a) * z[None, :]))
        through = run[None, :] * np.cumprod(factors, axis=0)
        before = np.concatenate([run[None, :], through[:-1]], axis=0)
        g = before / (1.0 - np.conj(a) * z[None, :])
        coeff = np.mean(g * twist[None, :], axis=1)
        weight = 1.0 - np.abs(a[:, 0]) ** 2
        total += float(np.sum(weight * np.abs(coeff) ** 2))
        gmax = np.max(np.abs(g), axis=1)
        sup += float(np.sum(weight * gmax * (np.abs(coeff) + 64 * _EPS * gmax)))
        run = through[-1]
    return total, sup


def _atomic_part(spec, omega, order, radius, m):
    # mixed Taylor coefficient of (1 - S*(u) S(z)) / (1 - u z) at (omega, conj omega)
    theta = circle_angles(m)
    z = (omega + radius * np.exp(1j * theta))[:, None]
    u = (np.conj(omega) + radius * np.exp(1j * theta))[None, :]
    q = np.zeros((m, m), dtype=complex)
    for t, sigma in spec.atoms:
        zeta = np.exp(1j * t)
        q = q + 2.0 * sigma / ((zeta - z) * (np.conj(zeta) - u))
    x = (1.0 - u * z) * q
    small = np.abs(x) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.where(small, 1.0 - x / 2.0 + x * x / 6.0, -np.expm1(-x) / x)
    d = e * q
    twist = np.exp(-1j * order * theta)
    coeff = np.mean(twist[:, None] * d * twist[None, :])
    return complex(coeff), float(np.max(np.abs(d)))


def default_depths(spec: SchurFunctionSpec) -> tuple[int, ...]:
    """Grid depths k for r = 1 - 10^-k.

    A truncated zero family that accumulates at the probed point 1 is only
    faithful down to the distance from 1 to its last zero, so there the
    depth is capped (keeping three points).  Away from the accumulation
    point the omitted zeros stay far from the radius and the full grid is
    used.
    """
    if not isinstance(spec.zeros, ZeroFamily):
        return DEFAULT_DEPTHS
    if angle_distance(spec.zeros.accumulation_angle, 0.0) > ANGLE_TOL:
        return DEFAULT_DEPTHS
    resolution = float(abs(1.0 - spec.zero_array[-1]))
    deepest = int(round(-np.log10(resolution)))
    return tuple(range(1, max(3, min(DEFAULT_DEPTHS[-1], deepest)) + 1))


def radius_grid(depths) -> np.ndarray:
    return 1.0 - 10.0 ** (-np.asarray(depths, dtype=float))


@dataclass(frozen=True)
class ProbeRow:
    r: float
    value: float
    flag: str  # "ok" | "not-real" | "quadrature-failure"


@dataclass(frozen=True)
class ProbeResult:
    order: int
    rows: tuple[ProbeRow, ...]
    verdict: str  # "bounded" | "divergent" | "inconclusive"
    growth_ratio: float
    spread: float
    truncation: int | None

    @property
    def values(self) -> np.ndarray:
        return np.array([row.value for row in self.rows])


def boundedness_verdict(values) -> tuple[str, float, float]:
    """Classify the tail of a radial trace.

    bounded: the last three values differ pairwise by < 5% relative;
    divergent: the last value exceeds the one two steps earlier (the last
    third of the default six-point grid) by a factor > 10.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3 or not np.all(np.isfinite(v[-3:])):
        return "inconclusive", float("nan"), float("nan")
    tail = v[-3:]
    ref = np.max(np.abs(tail))
    spread = float((np.max(tail) - np.min(tail)) / ref) if ref > 0 else 0.0
    ratio = float(tail[-1] / tail[0]) if tail[0] > 0 else float("inf")
    if spread < BOUNDED_SPREAD:
        return "bounded", ratio, spread
    if ratio > DIVERGENT_RATIO:
        return "divergent", ratio, spread
    return "inconclusive", ratio, spread


def radial_norm_probe(spec: SchurFunctionSpec, order: int, r_grid=None) -> ProbeResult:
    """Kernel norms along the radius towards 1 (rotate the spec first)."""
    r_grid = radius_grid(default_depths(spec)) if r_grid is None else np.asarray(r_grid, float)
    if np.any(np.diff(r_grid) <= 0) or r_grid[0] <= 0 or r_grid[-1] >= 1:
        raise ValueError("r_grid must increase inside (0, 1)")
    rows = []
    for r in r_grid:
        try:
            rows.append(ProbeRow(float(r), kernel_norm_sq(spec, r, order), "ok"))
        except NotRealResult:
            rows.append(ProbeRow(float(r), float("nan"), "not-real"))
        except QuadratureFailure:
            rows.append(ProbeRow(float(r), float("nan"), "quadrature-failure"))
    verdict, ratio, spread = boundedness_verdict([row.value for row in rows])
    truncation = spec.zeros.count if isinstance(spec.zeros, ZeroFamily) else None
    return ProbeResult(order, tuple(rows), verdict, ratio, spread, truncation)
