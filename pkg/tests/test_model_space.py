from __future__ import annotations

import numpy as np
import pytest

from debranges.criterion import criterion
from debranges.errors import RepeatedZeros, SpecError
from debranges.fixtures import FINITE_BLASCHKE_FIXTURES, fixture
from debranges.kernels import derivative_kernel, kernel, kernel_norm_sq
from debranges.model_space import (build_model, derivative_kernel_resolvent, kernel_in_model,
                                   model_norm_sq, range_test, verify_xstar_identity)
from debranges.schur import SchurFunctionSpec


@pytest.mark.parametrize("name", FINITE_BLASCHKE_FIXTURES)
def test_basis_is_orthonormal(name):
    rep = build_model(fixture(name))
    assert np.max(np.abs(rep.gram - np.eye(rep.dim))) < 1e-12


def test_raw_gram_of_szego_kernels():
    rep = build_model(fixture("two-zero-blaschke"))
    assert np.allclose(rep.raw_gram, [[1, 1], [1, 4 / 3]], atol=1e-15)


@pytest.mark.parametrize("name", FINITE_BLASCHKE_FIXTURES)
def test_xstar_identity(name):
    assert verify_xstar_identity(build_model(fixture(name))) < 1e-8


@pytest.mark.parametrize("name", FINITE_BLASCHKE_FIXTURES)
def test_xstar_eigenvalues_are_the_zeros(name):
    rep = build_model(fixture(name))
    eig = np.sort_complex(rep.xstar_eigenvalues())
    assert np.allclose(eig, np.sort_complex(rep.zeros), atol=1e-12)


def test_kernel_coordinates_two_routes():
    rep = build_model(fixture("three-zero-blaschke"))
    for lam in (0.0, 0.5, -0.4 + 0.7j):
        coords = kernel_in_model(rep, lam)
        assert coords.discrepancy < 1e-12
        z = np.array([0.2, -0.6j])
        assert np.allclose(rep.evaluate(coords.resolvent, z), kernel(rep.spec, lam, z), atol=1e-12)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_derivative_kernel_resolvent_matches_closed_form(order):
    spec = fixture("two-zero-blaschke")
    rep = build_model(spec)
    rng = np.random.default_rng(3)
    z = np.array([0.1 + 0.1j, 0.7, -0.5j])
    for _ in range(20):
        omega = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        coords = derivative_kernel_resolvent(rep, omega, order)
        assert np.allclose(rep.evaluate(coords, z), derivative_kernel(spec, omega, order, z),
                           atol=1e-8)
        a, b = model_norm_sq(rep, omega, order), kernel_norm_sq(spec, omega, order)
        assert abs(a - b) <= 1e-8 * max(1.0, b)


@pytest.mark.parametrize("name", FINITE_BLASCHKE_FIXTURES)
def test_range_test_in_range_matches_criterion(name):
    spec = fixture(name)
    rep = build_model(spec)
    for theta in (0.0, 1.0, np.pi, 4.5):
        for order in range(3):
            result = range_test(rep, np.exp(1j * theta), order)
            assert result.verdict == "InRange" and result.residual < 1e-10
            assert criterion(spec, theta, order).verdict == "Finite"


def test_build_model_rejects_unsupported():
    with pytest.raises(SpecError):
        build_model(fixture("atom-at-1"))
    with pytest.raises(SpecError):
        build_model(SchurFunctionSpec())
    with pytest.raises(RepeatedZeros):
        build_model(SchurFunctionSpec(zeros=(0.5, 0.5)))
