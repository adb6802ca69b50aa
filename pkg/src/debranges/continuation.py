"""Extreme points, the spectrum of b, and classification of boundary arcs.

An open arc I passes when its closure misses the boundary part of the
spectrum: atoms of the singular measure, declared accumulation points of
zero families, and the closure of the set where |b| < 1 on the circle.
For finite Blaschke products the resolvent of X* is also checked along I,
and :func:`kernel_continuity` offers an independent numerical look at
whether reproducing kernels extend continuously to the arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densities import ANGLE_TOL, TWO_PI, angle_distance, in_closed_arc, wrap
from .kernels import kernel
from .model_space import build_model
from .quadrature import integrate_pieces
from .schur import SchurFunctionSpec, ZeroFamily

RESOLVENT_GRID = 128
RESOLVENT_THRESHOLD = 1e-6
EXTREME_LEVEL = 8
EXTREME_STABILITY = 1e-6
TRACE_TOL = 1e-6
TRACE_DEPTHS = tuple(range(1, 10))
TRACE_MAX_NODES = 4096
DEFAULT_LAMBDAS = (0.0, 0.5, 0.5j, -0.3 + 0.2j)


@dataclass(frozen=True)
class ExtremeVerdict:
    extreme: bool | None  # None: undecided
    evidence: str
    log_integral: float | None = None
    refinement: tuple[float, float] | None = None  # values at two quadrature levels


def log_one_minus_integral(outer, level: int) -> float:
    """int log(1 - |b|) dm at a fixed tanh-sinh level, pieces split at the
    density's singular angles."""
    breaks = np.array(sorted({0.0, TWO_PI, *outer.singular_angles}))

    def integrand(t):
        return np.log(outer.one_minus_modulus(t)) / TWO_PI

    return float(integrate_pieces(integrand, breaks, maxlevel=level))


def is_extreme_point(spec: SchurFunctionSpec) -> ExtremeVerdict:
    if spec.outer is None:
        return ExtremeVerdict(True, "inner function: |b| = 1 a.e. on the circle")
    flag = spec.outer.model.log_one_minus_diverges
    if flag is None:
        return ExtremeVerdict(None, f"density {spec.outer.density_id!r} carries no "
                                    "extreme-point flag")
    if flag:
        return ExtremeVerdict(True, f"analytic flag of {spec.outer.density_id!r}: "
                                    "int log(1 - |b|) dm = -infinity")
    coarse = log_one_minus_integral(spec.outer, EXTREME_LEVEL)
    fine = log_one_minus_integral(spec.outer, EXTREME_LEVEL + 1)
    stable = abs(fine - coarse) <= EXTREME_STABILITY * max(1.0, abs(fine))
    evidence = (f"analytic flag: integral finite; tanh-sinh levels {EXTREME_LEVEL}/"
                f"{EXTREME_LEVEL + 1} give {coarse:.12g} / {fine:.12g}")
    if not stable:
        return ExtremeVerdict(None, evidence + " (not stable under node doubling)", fine,
                              (coarse, fine))
    return ExtremeVerdict(False, evidence, fine, (coarse, fine))


@dataclass(frozen=True)
class BoundaryPoint:
    angle: float
    reason: str  # "atom" | "accumulation"


@dataclass(frozen=True)
class SpectrumReport:
    interior_zeros: np.ndarray = field(repr=False)
    truncation: int | None
    points: tuple[BoundaryPoint, ...]
    arcs: tuple[tuple[float, float], ...]  # closed arcs (start, length) where |b| < 1

    @property
    def boundary_empty(self) -> bool:
        return not self.points and not self.arcs


def spectrum(spec: SchurFunctionSpec) -> SpectrumReport:
    points = [BoundaryPoint(t, "atom") for t, _ in spec.atoms]
    truncation = None
    if isinstance(spec.zeros, ZeroFamily):
        truncation = spec.zeros.count
        acc = spec.zeros.accumulation_angle
        if not any(angle_distance(acc, p.angle) <= ANGLE_TOL for p in points):
            points.append(BoundaryPoint(acc, "accumulation"))
    arcs = spec.outer.nonunimodular_arcs if spec.outer is not None else ()
    points.sort(key=lambda p: p.angle)
    return SpectrumReport(spec.zero_array, truncation, tuple(points), tuple(arcs))


def arc_length(start: float, end: float) -> float:
    length = float(np.mod(end - start, TWO_PI))
    if length <= ANGLE_TOL or length >= TWO_PI - ANGLE_TOL:
        raise ValueError("arc endpoints must be distinct modulo 2 pi")
    return length


def _arc_overlap(s1, l1, s2, l2):
    """A common point of two closed arcs, or None."""
    if in_closed_arc(s2, s1, l1):
        return wrap(s2)
    if in_closed_arc(s1, s2, l2):
        return wrap(s1)
    return None


@dataclass(frozen=True)
class ArcVerdict:
    start: float
    end: float
    passes: bool
    blocking_points: tuple[float, ...]
    channel_evidence: dict

    def __post_init__(self):
        assert self.passes == (not self.blocking_points)


def arc_classification(spec: SchurFunctionSpec, start: float, end: float) -> ArcVerdict:
    """Classify the open arc from ``start`` counter-clockwise to ``end``."""
    length = arc_length(start, end)
    start = wrap(start)
    spec_report = spectrum(spec)
    blocking = []
    for p in spec_report.points:
        if in_closed_arc(p.angle, start, length):
            blocking.append(p.angle)
    for s, l in spec_report.arcs:
        hit = _arc_overlap(start, length, s, l)
        if hit is not None:
            blocking.append(hit)
    blocking = tuple(sorted(set(blocking)))
    evidence = {"spectrum": "closed arc meets the boundary spectrum" if blocking
                else "closed arc misses the boundary spectrum"}
    if spec.is_finite_blaschke and spec.zero_array.size:
        evidence["resolvent_min_singular_value"] = resolvent_grid_min(spec, start, length)
    return ArcVerdict(start, wrap(start + length), not blocking, blocking, evidence)


def resolvent_grid_min(spec: SchurFunctionSpec, start: float, length: float,
                       points: int = RESOLVENT_GRID) -> float:
    """min over an interior grid of the arc of sigma_min(Id - conj(zeta) X*)."""
    rep = build_model(spec)
    theta = start + length * (np.arange(points) + 0.5) / points
    eye = np.eye(rep.dim)
    return float(min(np.linalg.svd(eye - np.exp(-1j * t) * rep.xstar, compute_uv=False)[-1]
                     for t in theta))


@dataclass(frozen=True)
class KernelTrace:
    verdict: str  # "continuous" | "discontinuous" | "undecidable"
    differences: tuple[float, ...]  # sup over the arc between consecutive radii
    evidence: str


def kernel_trace_decidable(spec: SchurFunctionSpec) -> bool:
    """The proxy needs exact boundary behaviour: inner b with explicit zeros.
    A truncated zero family is continuous at its accumulation point, and an
    outer factor's modulus near the circle needs quadrature that cannot
    resolve 10^-9 from the circle."""
    return spec.outer is None and not isinstance(spec.zeros, ZeroFamily)


def kernel_continuity(spec: SchurFunctionSpec, start: float, end: float,
                      lambdas=DEFAULT_LAMBDAS, depths=TRACE_DEPTHS) -> KernelTrace:
    """Do the kernels k_lambda converge uniformly on the closed arc as the
    radius tends to 1?

    For radii r_k = 1 - 10^-k the sup over an angular grid of
    |k_lambda(r_k e^{it}) - k_lambda(r_{k+1} e^{it})| is recorded; the arc
    counts as continuous when the last two differences are below 1e-6.
    """
    length = arc_length(start, end)
    if not kernel_trace_decidable(spec):
        return KernelTrace("undecidable", (), "proxy not decidable for truncated zero "
                                              "families or outer factors")
    diffs = []
    previous = None
    for k in depths:
        delta = 10.0 ** -k
        theta = start + length * np.linspace(0.0, 1.0, TRACE_MAX_NODES + 1)
        z = (1.0 - delta) * np.exp(1j * theta)
        vals = np.stack([kernel(spec, lam, z) for lam in lambdas])
        if previous is not None:
            diffs.append(float(np.max(np.abs(vals - previous))))
        previous = vals
    tail = diffs[-2:]
    verdict = "continuous" if max(tail) < TRACE_TOL else "discontinuous"
    return KernelTrace(verdict, tuple(diffs),
                       f"finest differences {', '.join(f'{d:.3g}' for d in tail)} "
                       f"against {TRACE_TOL:g}")


__all__ = [
    "ExtremeVerdict", "SpectrumReport", "BoundaryPoint", "ArcVerdict", "KernelTrace",
    "is_extreme_point", "spectrum", "arc_classification", "resolvent_grid_min",
    "kernel_continuity", "kernel_trace_decidable", "log_one_minus_integral", "arc_length",
]
