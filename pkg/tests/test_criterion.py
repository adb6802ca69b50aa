from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest

from debranges.criterion import classify_boundary_point, criterion, outer_criterion_integral
from debranges.densities import OuterPart
from debranges.errors import ConsistencyViolation
from debranges.fixtures import fixture
from debranges.schur import SchurFunctionSpec


@pytest.mark.parametrize("order", [0, 1, 2])
def test_single_zero_is_finite_one(order):
    for theta in (0.0, 2.0):
        report = criterion(fixture("single-zero"), theta, order)
        assert report.verdict == "Finite" and report.total.value == pytest.approx(1.0, abs=1e-14)


def test_two_zero_values():
    # 1 + (1 - 1/4) / (1/2)^(2N+2) = 1 + 3 * 4^N
    values = [criterion(fixture("two-zero-blaschke"), 0.0, n).total.value for n in range(4)]
    assert values == pytest.approx([4, 13, 49, 193], rel=1e-14)


def test_atom_terms():
    spec = fixture("atom-at-1")
    assert criterion(spec, 0.0, 0).verdict == "Diverges"
    assert criterion(spec, np.pi, 0).total.value == pytest.approx(0.25, rel=1e-14)
    assert criterion(spec, np.pi, 1).total.value == pytest.approx(1 / 16, rel=1e-14)
    scaled = SchurFunctionSpec(atoms=((0.0, 2.5),))
    assert criterion(scaled, np.pi, 0).total.value == pytest.approx(2.5 / 4, rel=1e-14)


def test_outer_term_against_mpmath():
    # int |log|cos(t/2)|| / (4 sin^2(t/2)) dt / 2 pi
    f = lambda t: -mp.log(abs(mp.cos(t / 2))) / (4 * mp.sin(t / 2) ** 2) / (2 * mp.pi)  # noqa
    with mp.workdps(30):
        exact = float(mp.quad(f, [0, mp.pi, 2 * mp.pi]))
    assert exact == pytest.approx(0.25, rel=1e-12)
    outer = OuterPart("half-shift")
    assert outer_criterion_integral(outer, 0.0, 0) == pytest.approx(exact, rel=1e-8)
    report = criterion(fixture("outer-half"), 0.0, 0)
    assert report.verdict == "Finite" and report.total.value == pytest.approx(exact, rel=1e-8)


def test_outer_diverging_cases():
    spec = fixture("outer-half")
    assert criterion(spec, 0.0, 1).verdict == "Diverges"
    assert criterion(spec, np.pi / 2, 0).verdict == "Diverges"


def test_family_against_mpmath_series():
    spec = fixture("tangential-family")

    def term(n):
        a = (1 - n ** -4) * mp.expj(1 / n)
        return (1 - abs(a) ** 2) / abs(1 - a) ** 2

    with mp.workdps(25):
        exact = float(mp.nsum(term, [1, mp.inf]))
    report = criterion(spec, 0.0, 0)
    assert report.verdict == "Finite"
    assert report.total.value == pytest.approx(exact, rel=1e-6)
    assert criterion(spec, 0.0, 1).verdict == "Diverges"


def test_family_away_from_accumulation_point():
    report = criterion(fixture("tangential-family"), np.pi, 3)
    assert report.verdict == "Finite"


def test_rotation_equivariance():
    phi = 1.1
    for name in ("atom-at-1", "three-zero-blaschke", "outer-half"):
        spec = fixture(name)
        for theta in (0.0, np.pi):
            a = criterion(spec, theta, 0)
            b = criterion(spec.rotated(phi), theta + phi, 0)
            assert a.verdict == b.verdict
            if a.verdict == "Finite":
                assert a.total.value == pytest.approx(b.total.value, rel=1e-8)


def test_classification_agrees_on_fixtures():
    spec = fixture("atom-at-1")
    at_one = classify_boundary_point(spec, 0.0, 0)
    assert at_one.channels == {"criterion": False, "probe": False}
    at_minus_one = classify_boundary_point(spec, np.pi, 0)
    assert at_minus_one.channels == {"criterion": True, "probe": True}
    blaschke = classify_boundary_point(fixture("two-zero-blaschke"), 0.0, 2)
    assert blaschke.channels == {"criterion": True, "probe": True, "range": True}


def test_disagreement_raises():
    # a probe that stops far from the circle looks bounded at the atom
    spec = fixture("atom-at-1")
    with pytest.raises(ConsistencyViolation) as info:
        classify_boundary_point(spec, 0.0, 0, r_grid=[0.001, 0.002, 0.003])
    assert not info.value.report.consistent
    loose = classify_boundary_point(spec, 0.0, 0, r_grid=[0.001, 0.002, 0.003], strict=False)
    assert loose.disagreements


def test_order_validation():
    with pytest.raises(ValueError):
        criterion(fixture("single-zero"), 0.0, -1)
