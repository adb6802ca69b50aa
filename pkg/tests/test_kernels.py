from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest

from debranges.errors import NotRealResult
from debranges.fixtures import fixture
from debranges.kernels import (boundedness_verdict, default_depths, derivative_kernel, kernel,
                               kernel_norm_sq, radial_norm_probe)
from debranges.schur import boundary_values, eval_b

LAMBDAS = np.array([0.0, 0.5, 0.5j, -0.3 + 0.2j, 0.6 - 0.6j])


def _mp_b(spec):
    """b in closed form at mpmath precision (explicit zeros and atoms only)."""
    def b(z):
        out = mp.mpc(spec.gamma)
        for a in spec.zero_array:
            a = mp.mpc(a)
            out *= z if a == 0 else abs(a) / a * (a - z) / (1 - mp.conj(a) * z)
        for theta, sigma in spec.atoms:
            zeta = mp.expj(theta)
            out *= mp.exp(-sigma * (zeta + z) / (zeta - z))
        return out
    return b


def _mp_conj_derivative(spec, omega, order, z):
    """d^N/d conj(omega)^N of k_omega(z) by high-precision differences in v = conj(omega),
    using conj(b(conj v)) = b#(v) with b#(z) = conj(b(conj z))."""
    b = _mp_b(spec)
    z = mp.mpc(z)
    bz = b(z)

    def g(v):
        return (1 - mp.conj(b(mp.conj(v))) * bz) / (1 - v * z)

    with mp.workdps(40):
        return complex(mp.diff(g, mp.mpc(np.conj(omega)), order))


@pytest.mark.parametrize("name", ["single-zero", "two-zero-blaschke", "atom-at-1",
                                  "outer-half"])
def test_gram_hermitian_psd(name):
    spec = fixture(name)
    gram = kernel(spec, LAMBDAS[None, :], LAMBDAS[:, None])
    assert np.max(np.abs(gram - gram.conj().T)) < 1e-12
    assert np.min(np.linalg.eigvalsh(gram)) > -1e-10


@pytest.mark.parametrize("name", ["single-zero", "two-zero-blaschke", "three-zero-blaschke"])
def test_reproducing_property_by_boundary_integral(name):
    # inner b: H(b) = K_b carries the H^2 norm, so <k_mu, k_lam> is an integral on T
    spec = fixture(name)
    m = 4096
    theta = 2 * np.pi * (np.arange(m) + 0.5) / m
    zeta = np.exp(1j * theta)
    bt = boundary_values(spec, theta)
    for mu in LAMBDAS[:3]:
        for lam in LAMBDAS[2:]:
            k_mu = (1 - np.conj(eval_b(spec, mu)) * bt) / (1 - np.conj(mu) * zeta)
            k_lam = (1 - np.conj(eval_b(spec, lam)) * bt) / (1 - np.conj(lam) * zeta)
            inner = np.mean(k_mu * np.conj(k_lam))
            assert abs(inner - kernel(spec, mu, lam)) < 1e-8


@pytest.mark.parametrize("order", [1, 2])
def test_derivative_kernel_against_finite_differences(order):
    rng = np.random.default_rng(7)
    for name in ("three-zero-blaschke", "atom-at-1"):
        spec = fixture(name)
        for _ in range(10):
            omega = 0.85 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            z = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            exact = derivative_kernel(spec, omega, order, z)
            assert abs(exact - _mp_conj_derivative(spec, omega, order, z)) < 1e-6


def test_norm_order_zero_is_kernel_diagonal():
    for name in ("atom-at-1", "three-zero-blaschke", "outer-half"):
        spec = fixture(name)
        for w in (0.3, -0.5 + 0.4j):
            assert np.isclose(kernel_norm_sq(spec, w, 0), kernel(spec, w, w).real, rtol=1e-9)


def test_factorized_matches_closed_form():
    for name in ("atom-at-1", "three-zero-blaschke", "atom-at-pi"):
        spec = fixture(name)
        for w in (0.5, 0.3 - 0.6j):
            for n in range(3):
                a = kernel_norm_sq(spec, w, n, method="factorized")
                b = kernel_norm_sq(spec, w, n, method="closed-form")
                assert abs(a - b) <= 1e-8 * max(1.0, abs(b))


@pytest.mark.parametrize("order", [1, 2])
def test_outer_norm_against_mpmath(order):
    # b = (1 + z)/2 has real coefficients, so conj(b(w)) = b(conj w)
    omega = 0.4 + 0.3j
    def k(z, wbar):
        return (1 - (1 + wbar) / 2 * (1 + z) / 2) / (1 - wbar * z)

    with mp.workdps(30):
        exact = mp.diff(k, (mp.mpc(omega), mp.mpc(np.conj(omega))), (order, order))
    value = kernel_norm_sq(fixture("outer-half"), omega, order)
    assert abs(value - complex(exact).real) < 1e-7 * abs(complex(exact))


def test_atom_norm_closed_form_near_circle():
    # ||k_r||^2 = (1 - b(r)^2)/(1 - r^2) with b(r) = exp(-(1 + r)/(1 - r))
    spec = fixture("atom-at-1")
    for r in (0.9, 0.999, 0.99999):
        b = np.exp(-(1 + r) / (1 - r))
        assert np.isclose(kernel_norm_sq(spec, r, 0), (1 - b * b) / (1 - r * r), rtol=1e-10)


def test_norms_increase_with_order_at_fixed_point():
    spec = fixture("two-zero-blaschke")
    # near the circle each derivative order costs a factor of about 1/(1 - |omega|)
    values = [kernel_norm_sq(spec, 0.9, n) for n in range(4)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_closed_form_breakdown_is_flagged():
    with pytest.raises(NotRealResult):
        kernel_norm_sq(fixture("atom-at-pi"), 0.999999, 3, method="closed-form")


def test_probe_verdicts_atom():
    spec = fixture("atom-at-1")
    at_one = radial_norm_probe(spec, 0)
    assert at_one.verdict == "divergent" and at_one.growth_ratio > 10
    at_minus_one = radial_norm_probe(spec.rotated(-np.pi), 0)
    assert at_minus_one.verdict == "bounded" and at_minus_one.spread < 0.05


def test_boundedness_rules():
    assert boundedness_verdict([1, 2, 3, 3.01, 3.02])[0] == "bounded"
    assert boundedness_verdict([1, 10, 100, 1000])[0] == "divergent"
    assert boundedness_verdict([1, 1.5, 2.0])[0] == "inconclusive"
    assert boundedness_verdict([1.0, np.nan, 2.0])[0] == "inconclusive"


def test_depth_cap_only_at_accumulation_point():
    family = fixture("tangential-family")
    assert default_depths(family)[-1] < 6
    assert default_depths(family.rotated(np.pi)) == tuple(range(1, 7))
