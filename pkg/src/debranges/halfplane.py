"""Transfer to the upper half-plane through the Cayley map
gamma(w) = (w - i)/(w + i), the unitary U : L^2(T) -> L^2(R), Toeplitz
intertwining for rational data, and the Bernstein-type check on
b1 = b o gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import UnsupportedSymbol
from .quadrature import TWO_PI, circle_mean
from .rational import RationalFunction, disc_analytic_part, upper_analytic_part
from .schur import SchurFunctionSpec, ZeroFamily, eval_b, eval_b_prime

SQRT_PI = float(np.sqrt(np.pi))
BERNSTEIN_DEPTHS = tuple(range(1, 7))
BERNSTEIN_GRID = 512
STABLE_CHANGE = 1e-3
GROWTH_FACTOR = 2.0


def cayley(w):
    """gamma(w) = (w - i)/(w + i): upper half-plane -> disc, i -> 0, 0 -> -1."""
    w = np.asarray(w, dtype=complex)
    out = (w - 1j) / (w + 1j)
    return complex(out) if out.ndim == 0 else out


def cayley_inverse(z):
    """gamma^-1(z) = i (1 + z)/(1 - z)."""
    z = np.asarray(z, dtype=complex)
    out = 1j * (1.0 + z) / (1.0 - z)
    return complex(out) if out.ndim == 0 else out


def transfer_function(spec: SchurFunctionSpec):
    """Evaluator of b1 = b o gamma on the open upper half-plane."""
    def b1(w):
        w = np.asarray(w, dtype=complex)
        if np.any(w.imag <= 0):
            raise ValueError("b1 is evaluated in the open upper half-plane")
        return eval_b(spec, cayley(w))
    return b1


def b1_prime(spec: SchurFunctionSpec, w):
    """b1'(w) = b'(gamma(w)) * 2i / (w + i)^2."""
    w = np.asarray(w, dtype=complex)
    out = eval_b_prime(spec, cayley(w)) * 2j / (w + 1j) ** 2
    return complex(out) if np.ndim(out) == 0 else out


def apply_U(f, x):
    """(U f)(x) = f(gamma(x)) / (sqrt(pi) (x + i)) for an evaluator f on T."""
    x = np.asarray(x, dtype=float)
    out = np.asarray(f(cayley(x.astype(complex)))) / (SQRT_PI * (x + 1j))
    return complex(out) if np.ndim(out) == 0 else out


def blaschke_rational(spec: SchurFunctionSpec) -> RationalFunction:
    """A finite Blaschke product b as a rational function, with the factors
    z at a = 0 and (|a|/a)(a - z)/(1 - conj(a) z) otherwise."""
    if not spec.is_finite_blaschke:
        raise UnsupportedSymbol("only finite Blaschke products are rational")
    out = RationalFunction.constant(spec.gamma)
    for a in spec.zero_array:
        if a == 0:
            out = out * RationalFunction.monomial(1)
        else:  # (a - z)/(1 - conj(a) z) = (z - a) / (conj(a) (z - 1/conj(a)))
            gain = abs(a) / a / np.conj(a)
            out = out * RationalFunction.from_roots(gain, (a,), (1.0 / np.conj(a),))
    return out


def kernel_rational(spec: SchurFunctionSpec, lam) -> RationalFunction:
    """k_lam^b = (1 - conj(b(lam)) b)/(1 - conj(lam) z) for a finite Blaschke b."""
    lam = complex(lam)
    b = blaschke_rational(spec)
    top = RationalFunction.constant(1.0) + b.scale(-np.conj(b(lam)))
    if lam == 0:
        return top
    return top * RationalFunction.from_roots(-1.0 / np.conj(lam), (), (1.0 / np.conj(lam),))


def rational_test_set() -> dict[str, RationalFunction]:
    """Rational H^2 functions (poles outside the closed disc) used to check
    unitarity and intertwining."""
    return {
        "1": RationalFunction.constant(1.0),
        "z^2": RationalFunction.monomial(2),
        "1/(1-0.5z)": RationalFunction.from_roots(-2.0, (), (2.0,)),
        "(z-0.3)/(1-0.3z)": RationalFunction.from_roots(-1 / 0.3, (0.3,), (1 / 0.3,)),
        "1/(1-(0.4+0.4i)z)^2": RationalFunction(np.array([1.0 / (0.4 - 0.4j) ** 2]),
                                                 ((1.0 / (0.4 - 0.4j), 2),)),
    }


SYMBOLS = {
    "1": RationalFunction.constant(1.0),
    "zeta": RationalFunction.monomial(1),
    "conj(zeta)": RationalFunction.monomial(-1),
}


def transfer_rational(f: RationalFunction) -> RationalFunction:
    """U f as a rational function of x."""
    composed = f.compose_mobius(1.0, -1j, 1.0, 1j)
    return (composed * RationalFunction(np.array([1.0]), ((-1j, 1),))).scale(1 / SQRT_PI)


def circle_norm_sq(f) -> float:
    """int |f|^2 dm by the periodic trapezoid rule."""
    value, _ = circle_mean(lambda t: np.abs(f(np.exp(1j * t))) ** 2)
    return float(value)


def line_norm_sq(g) -> float:
    """int_R |g(x)|^2 dx through x = tan(t/2), which maps the line onto the
    circle and turns the integral into a periodic one in t."""
    def integrand(t):
        t = t - np.pi + np.pi / t.size  # nodes strictly inside (-pi, pi)
        x = np.tan(t / 2.0)
        return np.abs(g(x)) ** 2 * (1.0 + x * x) / 2.0 * TWO_PI
    value, _ = circle_mean(integrand)
    return float(value)


def symbol_on_line(phi: RationalFunction) -> RationalFunction:
    """phi o gamma as a rational function of x."""
    return phi.compose_mobius(1.0, -1j, 1.0, 1j)


def verify_intertwining(phi: RationalFunction, f: RationalFunction, x) -> float:
    """max_x |U(T_phi f)(x) - T_{phi o gamma}(U f)(x)|.

    ``phi`` is a rational symbol in zeta (conj(zeta) = 1/zeta on the circle)
    and ``f`` a rational H^2 function.
    """
    if not isinstance(phi, RationalFunction) or not isinstance(f, RationalFunction):
        raise UnsupportedSymbol("intertwining is only checked for rational data")
    x = np.asarray(x, dtype=float)
    left = apply_U(disc_analytic_part(phi * f), x)
    right = upper_analytic_part(symbol_on_line(phi) * transfer_rational(f))(x)
    return float(np.max(np.abs(left - right)))


@dataclass(frozen=True)
class BernsteinVerdict:
    status: str  # "Holds" | "Fails" | "Inconclusive"
    reason: str
    sup_estimate: float | None
    level_sups: tuple[tuple[float, float], ...] = ()


def _x_grid(spec: SchurFunctionSpec, y: float) -> np.ndarray:
    s = -np.pi + TWO_PI * (np.arange(BERNSTEIN_GRID) + 0.5) / BERNSTEIN_GRID
    pts = [np.tan(s / 2.0)]
    local = np.linspace(-20.0, 20.0, 81)
    for theta, _ in spec.atoms:
        if abs(np.sin(theta / 2.0)) > 1e-12:  # the atom at 1 sits at infinity
            pts.append(-1.0 / np.tan(theta / 2.0) + y * local)
    if not isinstance(spec.zeros, ZeroFamily):
        for a in spec.zero_array:
            w = cayley_inverse(a)
            pts.append(w.real + max(w.imag, y) * local)
    return np.unique(np.concatenate(pts))


def _line_sup(spec: SchurFunctionSpec, y: float) -> float:
    x = _x_grid(spec, y)
    vals = np.abs(b1_prime(spec, x + 1j * y))
    i = int(np.argmax(vals))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda t: -abs(b1_prime(spec, complex(t, y))),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, abs(x[i]))})
        best = max(best, float(-res.fun))
    return best


def boundary_derivative_sup(spec: SchurFunctionSpec, nodes: int = 1 << 16) -> float:
    """sup over the real line of |b1'| from boundary data alone.

    For inner b with zeros a_n and atoms (theta_k, sigma_k), on the circle
    |b'(zeta)| = sum (1 - |a_n|^2)/|zeta - a_n|^2 + sum 2 sigma_k/|zeta - e^{i theta_k}|^2,
    and |b1'(x)| = |b'(zeta)| |1 - zeta|^2 / 2 at zeta = gamma(x).  An atom
    away from 1 makes the sup infinite; the atom at 1 contributes sigma.
    """
    if not spec.is_inner or isinstance(spec.zeros, ZeroFamily):
        raise UnsupportedSymbol("the boundary formula needs an inner b with explicit zeros")
    constant = 0.0
    for theta, sigma in spec.atoms:
        if abs(np.sin(theta / 2.0)) > 1e-12:
            return float("inf")
        constant += sigma
    zeros = spec.zero_array

    def weighted(t):
        zeta = np.exp(1j * np.asarray(t, dtype=float))
        gap = np.abs(1.0 - zeta) ** 2 / 2.0
        terms = (1.0 - np.abs(zeros[:, None]) ** 2) / np.abs(zeta[None] - zeros[:, None]) ** 2
        return constant + gap * np.sum(terms, axis=0)

    if zeros.size == 0:
        return float(constant)
    t = TWO_PI * np.arange(nodes) / nodes
    vals = weighted(t)
    i = int(np.argmax(vals))
    step = TWO_PI / nodes
    res = minimize_scalar(lambda u: -float(weighted(np.array([u]))[0]),
                          bounds=(t[i] - step, t[i] + step), method="bounded",
                          options={"xatol": 1e-13})
    return float(max(vals[i], -res.fun))


def bernstein_check(spec: SchurFunctionSpec) -> BernsteinVerdict:
    """Is b1 inner with bounded derivative on the upper half-plane?

    The sup of |b1'| is sampled on the lines Im w = 10^-k, k = 1..6.  These
    sups increase towards the boundary; the limit is extrapolated linearly
    in Im w from the two finest lines.
    """
    if spec.outer is not None:
        return BernsteinVerdict("Fails", "not inner", None)
    if isinstance(spec.zeros, ZeroFamily):
        return BernsteinVerdict("Inconclusive", "truncated zero family: derivative bounds of "
                                                "the truncation do not transfer", None)
    ys = [10.0 ** -k for k in BERNSTEIN_DEPTHS]
    sups = [_line_sup(spec, y) for y in ys]
    levels = tuple(zip(ys, sups))
    (y5, s5), (y6, s6) = levels[-2], levels[-1]
    extrapolated = (y5 * s6 - y6 * s5) / (y5 - y6)
    if not np.isfinite(s6) or s6 > GROWTH_FACTOR * s5:
        return BernsteinVerdict("Fails", "derivative unbounded: sup|b1'| grows from "
                                         f"{s5:.3g} to {s6:.3g} between the finest lines",
                                extrapolated if np.isfinite(extrapolated) else None, levels)
    if abs(s6 - s5) <= STABLE_CHANGE * s6:
        return BernsteinVerdict("Holds", "inner, sup|b1'| stabilises", float(extrapolated),
                                levels)
    return BernsteinVerdict("Inconclusive", "sup|b1'| still growing at the finest line",
                            float(extrapolated), levels)


__all__ = [
    "cayley", "cayley_inverse", "transfer_function", "b1_prime", "apply_U",
    "transfer_rational", "blaschke_rational", "kernel_rational", "rational_test_set",
    "SYMBOLS", "circle_norm_sq", "line_norm_sq", "symbol_on_line",
    "verify_intertwining", "BernsteinVerdict", "bernstein_check", "boundary_derivative_sup",
]
