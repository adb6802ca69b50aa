from __future__ import annotations

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from debranges.densities import OuterPart
from debranges.errors import PoleAtReflectedZero, SpecError
from debranges.fixtures import FIXTURES, fixture
from debranges.schur import (SchurFunctionSpec, ZeroFamily, boundary_values, describe, eval_b,
                             eval_b_derivatives, eval_b_prime, real_interval_trace)

SPECS = [fixture(name) for name in ("single-zero", "atom-at-1", "two-zero-blaschke",
                                    "three-zero-blaschke", "atom-at-pi")]


def test_single_zero_is_identity():
    z = np.array([0.3, -0.2 + 0.5j, 0.9j])
    assert np.allclose(eval_b(fixture("single-zero"), z), z, atol=1e-15)


def test_blaschke_factor_matches_direct_formula():
    spec = fixture("three-zero-blaschke")
    z = np.array([0.1 - 0.7j, 0.55, -0.3j])
    expected = np.ones_like(z)
    for a in spec.zeros:
        expected *= abs(a) / a * (a - z) / (1 - np.conj(a) * z)
    assert np.allclose(eval_b(spec, z), expected, atol=1e-15)


def test_atom_matches_exponential():
    spec = SchurFunctionSpec(atoms=((np.pi / 3, 0.7),))
    zeta = np.exp(1j * np.pi / 3)
    z = np.array([0.2, 0.5 + 0.5j])
    assert np.allclose(eval_b(spec, z), np.exp(-0.7 * (zeta + z) / (zeta - z)), atol=1e-15)


def test_outer_half_is_one_plus_z_over_two():
    # the half-shift density is log|cos(t/2)| = log|(1 + e^{it})/2|
    spec = fixture("outer-half")
    z = np.array([0.0, 0.5, -0.4 + 0.3j, 0.9j, -0.9])
    assert np.allclose(eval_b(spec, z), (1 + z) / 2, atol=1e-10)


def test_atom_derivatives_against_sympy():
    sigma, theta = 1.3, 0.4
    zs = sp.symbols("z")
    zeta = sp.exp(sp.I * theta)
    expr = sp.exp(-sigma * (zeta + zs) / (zeta - zs))
    spec = SchurFunctionSpec(atoms=((theta, sigma),))
    omega = 0.3 - 0.2j
    derivs = eval_b_derivatives(spec, omega, 3)
    for k in range(4):
        exact = complex(sp.diff(expr, zs, k).subs(zs, omega).evalf(30))
        assert abs(derivs[k] - exact) <= 1e-9 * max(1.0, abs(exact))
    assert abs(eval_b_prime(spec, omega) - derivs[1]) <= 1e-12 * abs(derivs[1])


def test_eval_b_prime_against_finite_differences():
    spec = fixture("three-zero-blaschke")
    z, h = 0.2 + 0.1j, 1e-5
    fd = (eval_b(spec, z + h) - eval_b(spec, z - h)) / (2 * h)
    assert abs(eval_b_prime(spec, z) - fd) < 1e-8


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.0, 0.98), t=st.floats(0.0, 2 * np.pi), k=st.integers(0, len(SPECS) - 1))
def test_modulus_bound(r, t, k):
    assert abs(eval_b(SPECS[k], r * np.exp(1j * t))) <= 1.0 + 1e-12


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.05, 0.95), t=st.floats(0.0, 2 * np.pi), k=st.integers(0, len(SPECS) - 1))
def test_reflection_identity(r, t, k):
    z = r * np.exp(1j * t)
    spec = SPECS[k]
    if spec.zero_array.size and np.min(np.abs(spec.zero_array - z)) < 1e-6:
        return
    assert abs(eval_b(spec, z) * np.conj(eval_b(spec, 1 / np.conj(z))) - 1) < 1e-8


def test_exterior_pole_raises():
    with pytest.raises(PoleAtReflectedZero):
        eval_b(fixture("two-zero-blaschke"), 2.0)


def test_rotation_equivariance():
    phi = 0.9
    z = np.array([0.3 + 0.1j, -0.5j])
    for name in FIXTURES:
        if name == "tangential-family":
            continue
        spec = fixture(name)
        rotated = spec.rotated(phi)
        assert np.allclose(eval_b(rotated, z), eval_b(spec, np.exp(-1j * phi) * z), atol=1e-10)


def test_boundary_values_unimodular():
    theta = np.linspace(0.1, 6.0, 50)
    for name in ("three-zero-blaschke", "atom-at-pi"):
        assert np.allclose(np.abs(boundary_values(fixture(name), theta)), 1.0, atol=1e-13)


def test_real_interval_trace_checks_grid():
    with pytest.raises(ValueError):
        real_interval_trace(fixture("single-zero"), [0.5, 0.4])
    with pytest.raises(ValueError):
        real_interval_trace(fixture("single-zero"), [0.5, 1.0])


def test_spec_validation():
    with pytest.raises(SpecError, match="atoms\\[0\\]"):
        SchurFunctionSpec(atoms=((0.0, -1.0),))
    with pytest.raises(SpecError, match="zeros\\[1\\]"):
        SchurFunctionSpec(zeros=(0.1, 1.0))
    with pytest.raises(SpecError):
        SchurFunctionSpec(gamma=2.0)
    with pytest.raises(SpecError):
        ZeroFamily(1.0, 1.0, 10)
    with pytest.raises(KeyError):
        OuterPart("no-such-density")


def test_family_describe():
    info = describe(fixture("tangential-family"))
    assert info["zero_family"]["truncation"] == 10_000
    assert info["zero_family"]["declared_convergent"]
    zeros = fixture("tangential-family").zero_array
    assert np.isclose(abs(zeros[1]), 1 - 2.0 ** -4) and np.isclose(np.angle(zeros[1]), 0.5)
