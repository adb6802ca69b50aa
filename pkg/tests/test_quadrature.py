from __future__ import annotations

import math

import numpy as np
import pytest

from debranges.errors import QuadratureFailure
from debranges.quadrature import cauchy_derivatives, circle_mean, integrate_pieces


def test_cauchy_derivatives_of_exponential():
    derivs = cauchy_derivatives(np.exp, 0.3 + 0.1j, 0.5, 5)
    assert np.allclose(derivs, np.exp(0.3 + 0.1j), rtol=1e-10)


def test_cauchy_failure_is_reported():
    with pytest.raises(QuadratureFailure):
        cauchy_derivatives(lambda z: 1 / (z - 0.999), 0.0, 1.0, 2, n_max=128)


def test_circle_mean_poisson():
    # mean of 1/(1 - r e^{it}) over the circle is 1
    mean, _ = circle_mean(lambda t: 1 / (1 - 0.8 * np.exp(1j * t)))
    assert abs(mean - 1) < 1e-12


def test_integrate_pieces_log_singularity():
    # int_0^pi log(sin t) dt = -pi log 2
    value = integrate_pieces(lambda t: np.log(np.sin(t)), [0.0, np.pi / 2, np.pi])
    assert value == pytest.approx(-np.pi * math.log(2), rel=1e-12)


def test_integrate_pieces_batched():
    c = np.array([[1.0], [2.0], [3.0]])
    value = integrate_pieces(lambda t, k: t ** k, np.array([0.0, 1.0]), args=(c,))
    assert np.allclose(value, 1 / (c[:, 0] + 1))
