"""The three-term boundary criterion at a point zeta0 of the circle, and the
unified classification that cross-checks it against kernel-norm probes and,
for finite Blaschke products, the model-space range test.

For order N the criterion asks whether

    sum_n (1 - |a_n|^2) / |zeta0 - a_n|^(2N+2)
    + int dmu(t) / |zeta0 - e^{it}|^(2N+2)
    + int |log|b(e^{it})|| / |zeta0 - e^{it}|^(2N+2) dm(t)

is finite.  Each term gets its own verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densities import ANGLE_TOL, angle_distance, wrap
from .errors import ConsistencyViolation, QuadratureFailure
from .kernels import ProbeResult, radial_norm_probe
from .model_space import RangeTestResult, build_model, range_test
from .quadrature import TWO_PI, integrate_pieces
from .schur import SchurFunctionSpec, ZeroFamily

DIVERGENCE_THRESHOLD = 1e6
NONVANISHING_SLOPE = -0.05  # log-log slope of the tail terms above this: terms do not vanish
SLOPE_AGREEMENT = 0.25
OUTER_RTOL = 1e-8

FINITE, DIVERGES, INCONCLUSIVE = "Finite", "Diverges", "Inconclusive"


@dataclass(frozen=True)
class TermVerdict:
    status: str
    value: float | None
    evidence: str
    trace: tuple[tuple[int, float], ...] = ()

    @property
    def finite(self) -> bool:
        return self.status == FINITE


@dataclass(frozen=True)
class CriterionReport:
    theta0: float
    order: int
    blaschke: TermVerdict
    atomic: TermVerdict
    outer: TermVerdict
    truncation: int | None = None

    @property
    def terms(self) -> tuple[TermVerdict, ...]:
        return (self.blaschke, self.atomic, self.outer)

    @property
    def total(self) -> TermVerdict:
        diverging = [t for t in self.terms if t.status == DIVERGES]
        if diverging:
            return TermVerdict(DIVERGES, None, "; ".join(t.evidence for t in diverging))
        unsure = [t for t in self.terms if t.status == INCONCLUSIVE]
        if unsure:
            return TermVerdict(INCONCLUSIVE, None, "; ".join(t.evidence for t in unsure))
        return TermVerdict(FINITE, float(sum(t.value for t in self.terms)), "all terms finite")

    @property
    def verdict(self) -> str:
        return self.total.status


def _snap(theta0: float, atoms) -> float:
    for t, _ in atoms:
        if angle_distance(theta0, t) <= ANGLE_TOL:
            return t
    return wrap(theta0)


def _weighted_terms(zeros: np.ndarray, zeta0: complex, order: int) -> np.ndarray:
    return (1.0 - np.abs(zeros) ** 2) / np.abs(zeta0 - zeros) ** (2 * order + 2)


def _blaschke_term(spec: SchurFunctionSpec, theta0: float, order: int) -> TermVerdict:
    if not isinstance(spec.zeros, ZeroFamily):
        terms = _weighted_terms(spec.zero_array, np.exp(1j * theta0), order)
        return TermVerdict(FINITE, float(np.sum(terms)), f"exact sum over {terms.size} zeros")

    fam = spec.zeros
    terms = fam.criterion_terms(theta0, order)
    m = terms.size
    partial = np.cumsum(terms)
    marks = sorted({max(1, m // 8), max(1, m // 4), max(1, m // 2), m})
    trace = tuple((k, float(partial[k - 1])) for k in marks)
    half = max(1, m // 2)
    slope = float(np.log(terms[-1] / terms[half - 1]) / np.log(m / half)) if m > 1 else float("nan")
    declared = fam.term_decay_exponent(theta0, order)
    if m > 1 and slope > NONVANISHING_SLOPE:
        return TermVerdict(DIVERGES, None,
                           f"terms do not vanish (tail log-log slope {slope:.3f}, "
                           f"last term {terms[-1]:.3g})", trace)
    if partial[-1] > DIVERGENCE_THRESHOLD:
        return TermVerdict(DIVERGES, None,
                           f"partial sum {partial[-1]:.3g} exceeds {DIVERGENCE_THRESHOLD:g}", trace)
    if declared <= 1:
        return TermVerdict(DIVERGES, None,
                           f"terms behave like n^-{declared:g}, a divergent comparison series",
                           trace)
    if abs(slope + declared) > SLOPE_AGREEMENT:
        return TermVerdict(INCONCLUSIVE, None,
                           f"measured tail slope {slope:.3f} disagrees with declared "
                           f"decay n^-{declared:g}", trace)
    tail = float(terms[-1] * m / (declared - 1.0))
    return TermVerdict(FINITE, float(partial[-1]) + tail,
                       f"terms behave like n^-{declared:g}; partial sum {partial[-1]:.12g} "
                       f"plus tail estimate {tail:.3g}", trace)


def _atomic_term(spec: SchurFunctionSpec, theta0: float, order: int) -> TermVerdict:
    total = 0.0
    for t, sigma in spec.atoms:
        if angle_distance(theta0, t) <= ANGLE_TOL:
            return TermVerdict(DIVERGES, None, f"atom at zeta0 (angle {t:.12g}, weight {sigma:g})")
        total += sigma / abs(np.exp(1j * theta0) - np.exp(1j * t)) ** (2 * order + 2)
    return TermVerdict(FINITE, float(total), f"finite sum over {len(spec.atoms)} atoms")


def outer_criterion_integral(outer, theta0: float, order: int) -> float:
    """int |w(t)| / |zeta0 - e^{it}|^(2N+2) dm over one turn starting at theta0,
    with breakpoints refined geometrically towards zeta0."""
    offsets = [np.pi * 2.0 ** -k for k in range(1, 16)]
    singular = [theta0 + np.mod(s - theta0, TWO_PI) for s in outer.singular_angles]
    breaks = sorted({theta0, theta0 + TWO_PI, *[theta0 + d for d in offsets],
                     *[theta0 + TWO_PI - d for d in offsets],
                     *[s for s in singular if theta0 < s < theta0 + TWO_PI]})

    def integrand(t):
        dist = np.abs(2.0 * np.sin((t - theta0) / 2.0))
        return np.abs(outer.log_modulus(t)) / dist ** (2 * order + 2) / TWO_PI

    return float(integrate_pieces(integrand, np.array(breaks), rel_allowance=OUTER_RTOL))


def _outer_term(spec: SchurFunctionSpec, theta0: float, order: int) -> TermVerdict:
    if spec.outer is None:
        return TermVerdict(FINITE, 0.0, "no outer factor")
    if not spec.outer.criterion_finite(theta0, order):
        return TermVerdict(DIVERGES, None,
                           f"analytic flag of density {spec.outer.density_id!r}: divergent")
    try:
        value = outer_criterion_integral(spec.outer, theta0, order)
    except QuadratureFailure as exc:
        return TermVerdict(INCONCLUSIVE, None, f"flagged finite but quadrature failed: {exc}")
    return TermVerdict(FINITE, value, "analytic flag finite; tanh-sinh value")


def criterion(spec: SchurFunctionSpec, theta0: float, order: int) -> CriterionReport:
    """Evaluate the three criterion terms at zeta0 = exp(i theta0)."""
    if order < 0 or int(order) != order:
        raise ValueError("order must be a non-negative integer")
    order = int(order)
    theta0 = _snap(float(theta0), spec.atoms)
    truncation = spec.zeros.count if isinstance(spec.zeros, ZeroFamily) else None
    return CriterionReport(theta0, order, _blaschke_term(spec, theta0, order),
                           _atomic_term(spec, theta0, order), _outer_term(spec, theta0, order),
                           truncation)


@dataclass(frozen=True)
class BoundaryClassification:
    theta0: float
    order: int
    criterion: CriterionReport
    probe: ProbeResult
    range: RangeTestResult | None
    disagreements: tuple[str, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return not self.disagreements

    @property
    def channels(self) -> dict:
        """Decidable channels as booleans (True = boundary regularity holds)."""
        out = {}
        if self.criterion.verdict in (FINITE, DIVERGES):
            out["criterion"] = self.criterion.verdict == FINITE
        if self.probe.verdict in ("bounded", "divergent"):
            out["probe"] = self.probe.verdict == "bounded"
        if self.range is not None:
            out["range"] = self.range.verdict == "InRange"
        return out


def classify_boundary_point(spec: SchurFunctionSpec, theta0: float, order: int, *,
                            r_grid=None, strict: bool = True) -> BoundaryClassification:
    """Bundle criterion, radial probe and (finite Blaschke only) range test.

    Any disagreement between decidable channels raises
    :class:`ConsistencyViolation` (with the classification attached) unless
    ``strict`` is False.
    """
    report = criterion(spec, theta0, order)
    theta0 = report.theta0
    probe = radial_norm_probe(spec.rotated(-theta0), order, r_grid)
    rng = None
    if spec.is_finite_blaschke and spec.zero_array.size:
        rng = range_test(build_model(spec), np.exp(1j * theta0), order)
    partial = BoundaryClassification(theta0, order, report, probe, rng)
    channels = partial.channels
    disagreements = []
    names = sorted(channels)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if channels[a] != channels[b]:
                disagreements.append(f"{a} says {'regular' if channels[a] else 'singular'}, "
                                     f"{b} says {'regular' if channels[b] else 'singular'}")
    result = BoundaryClassification(theta0, order, report, probe, rng, tuple(disagreements))
    if disagreements and strict:
        raise ConsistencyViolation("; ".join(disagreements), report=result)
    return result


__all__ = [
    "TermVerdict", "CriterionReport", "BoundaryClassification", "criterion",
    "classify_boundary_point", "outer_criterion_integral", "FINITE", "DIVERGES", "INCONCLUSIVE",
]
