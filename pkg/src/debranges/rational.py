"""Rational functions with explicitly tracked poles, and the partial-fraction
projections needed for Toeplitz actions on rational data.

A function is stored as a numerator polynomial (highest degree first, the
numpy convention) over a monic denominator prod (z - p)^m whose poles are
kept as ``(p, m)`` pairs.  Every operation used here (products, sums,
Mobius substitution) moves poles in closed form, so partial fractions
come from Taylor series at known poles rather than from root finding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import UnsupportedSymbol

POLE_TOL = 1e-9
MERGE_TOL = 1e-12


def _trim(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    nz = np.flatnonzero(np.abs(c) > 0)
    return c[nz[0]:] if nz.size else np.zeros(1, dtype=complex)


def _merge(poles) -> tuple[tuple[complex, int], ...]:
    merged: list[list] = []
    for p, m in poles:
        if m == 0:
            continue
        for entry in merged:
            if abs(entry[0] - p) <= MERGE_TOL * max(1.0, abs(p)):
                entry[1] += m
                break
        else:
            merged.append([complex(p), int(m)])
    return tuple((p, m) for p, m in merged)


def _linear_power(root: complex, k: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = np.polymul(out, [1.0, -root])
    return out


def _taylor(poly: np.ndarray, p: complex, order: int) -> np.ndarray:
    """Taylor coefficients of a polynomial at p, up to t^order."""
    out = np.zeros(order + 1, dtype=complex)
    d = np.asarray(poly, dtype=complex)
    fact = 1.0
    for j in range(order + 1):
        out[j] = np.polyval(d, p) / fact if d.size else 0.0
        d = np.polyder(d) if d.size > 1 else np.zeros(0, complex)
        fact *= j + 1
    return out


@dataclass(frozen=True)
class RationalFunction:
    num: np.ndarray = field(repr=False)
    poles: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "num", _trim(self.num))
        object.__setattr__(self, "poles", _merge(self.poles))

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(np.array([c]))

    @classmethod
    def monomial(cls, n: int) -> "RationalFunction":
        """z^n for any integer n (negative powers as a pole at 0)."""
        if n >= 0:
            return cls(np.r_[1.0, np.zeros(n)])
        return cls(np.array([1.0]), ((0.0, -n),))

    @classmethod
    def from_roots(cls, gain, zeros=(), poles=()) -> "RationalFunction":
        """gain * prod (z - zeros) / prod (z - poles)."""
        num = gain * np.poly(zeros) if len(zeros) else np.array([gain])
        return cls(num, tuple((p, 1) for p in poles))

    @property
    def den(self) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for p, m in self.poles:
            out = np.polymul(out, _linear_power(p, m))
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.polyval(self.num, z)
        for p, m in self.poles:
            out = out / (z - p) ** m
        return complex(out) if out.ndim == 0 else out

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(np.polymul(self.num, other.num), self.poles + other.poles)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        common = dict()
        for p, m in self.poles + other.poles:
            key = next((q for q in common if abs(q - p) <= MERGE_TOL * max(1, abs(p))), p)
            common[key] = max(common.get(key, 0), m)

        def lift(f):
            extra = np.array([1.0 + 0j])
            for q, m in common.items():
                have = sum(k for p, k in f.poles if abs(p - q) <= MERGE_TOL * max(1, abs(q)))
                extra = np.polymul(extra, _linear_power(q, m - have))
            return np.polymul(f.num, extra)

        return RationalFunction(np.polyadd(lift(self), lift(other)), tuple(common.items()))

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(c * self.num, self.poles)

    def compose_mobius(self, a, b, c, d) -> "RationalFunction":
        """x -> R((a x + b) / (c x + d)) with c != 0 and ad - bc != 0."""
        a, b, c, d = (complex(v) for v in (a, b, c, d))
        if c == 0 or a * d - b * c == 0:
            raise ValueError("expected a non-affine Mobius map")
        top, bottom = np.array([a, b]), np.array([c, d])
        deg = self.num.size - 1
        num = np.zeros(1, dtype=complex)
        for i, coef in enumerate(self.num):
            k = deg - i  # coef * w^k, multiplied through by (c x + d)^deg
            term = np.array([coef])
            for _ in range(k):
                term = np.polymul(term, top)
            for _ in range(deg - k):
                term = np.polymul(term, bottom)
            num = np.polyadd(num, term)
        poles, total = [], 0
        for p, m in self.poles:
            total += m
            lead = a - p * c
            if abs(lead) <= MERGE_TOL * max(1.0, abs(a)):  # pole sent to infinity
                num = num / (b - p * d) ** m
            else:
                num = num / lead ** m
                poles.append(((p * d - b) / lead, m))
        # (w - p) = ((a - p c) x + (b - p d)) / (c x + d): each pole contributes (c x + d)^m
        if total >= deg:
            for _ in range(total - deg):
                num = np.polymul(num, bottom)
        else:
            num = num / c ** (deg - total)
            poles.append((-d / c, deg - total))
        return RationalFunction(num, tuple(poles))

    def partial_fractions(self):
        """(terms, polynomial): terms are (coefficient, pole, power) with
        f = polynomial + sum coefficient / (z - pole)^power."""
        poly, _ = np.polydiv(self.num, self.den) if self.poles else (self.num, None)
        terms = []
        for i, (p, m) in enumerate(self.poles):
            series = _taylor(self.num, p, m - 1)
            for j, (q, k) in enumerate(self.poles):
                if j == i:
                    continue
                # (z - q)^-k = (p - q + t)^-k expanded in t = z - p
                inv = np.array([(-1) ** n * comb(k + n - 1, n) * (p - q) ** (-k - n)
                                for n in range(m)], dtype=complex)
                series = np.convolve(series, inv)[:m]
            for n in range(m):  # t^n pairs with (z - p)^-(m - n)
                terms.append((complex(series[n]), p, m - n))
        return terms, _trim(poly)


@dataclass(frozen=True)
class PartialFractionSum:
    """sum of c / (z - p)^m plus a polynomial; the result of a projection."""
    terms: tuple[tuple[complex, complex, int], ...]
    poly: np.ndarray = field(repr=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.polyval(self.poly, z) if self.poly.size else np.zeros_like(z)
        for c, p, m in self.terms:
            out = out + c / (z - p) ** m
        return complex(out) if np.ndim(out) == 0 else out


def project(f: RationalFunction, keep_pole, keep_polynomial: bool) -> PartialFractionSum:
    """Keep the partial-fraction terms whose pole satisfies ``keep_pole``.

    A pole on the boundary (``keep_pole`` returns None) makes the projection
    undefined for L^2 data and raises :class:`UnsupportedSymbol`.
    """
    terms, poly = f.partial_fractions()
    kept = []
    for c, p, m in terms:
        decision = keep_pole(p)
        if decision is None:
            raise UnsupportedSymbol(f"pole {p} lies on the boundary")
        if decision:
            kept.append((c, p, m))
    return PartialFractionSum(tuple(kept), poly if keep_polynomial else np.zeros(0, complex))


def disc_analytic_part(f: RationalFunction) -> PartialFractionSum:
    """P_+ on the circle: drop poles inside the disc, keep the rest and the
    polynomial part (non-negative powers)."""
    def keep(p):
        if abs(abs(p) - 1.0) <= POLE_TOL:
            return None
        return abs(p) > 1.0
    return project(f, keep, keep_polynomial=True)


def upper_analytic_part(f: RationalFunction) -> PartialFractionSum:
    """P_+ on the real line onto H^2 of the upper half-plane: keep poles in
    the lower half-plane.  A non-zero polynomial part is not in L^2."""
    def keep(p):
        if abs(p.imag) <= POLE_TOL:
            return None
        return p.imag < 0
    _, poly = f.partial_fractions()
    if np.any(np.abs(poly) > 1e-12):
        raise UnsupportedSymbol("function is not in L^2 of the line (polynomial part)")
    return project(f, keep, keep_polynomial=False)


__all__ = ["RationalFunction", "PartialFractionSum", "project", "disc_analytic_part",
           "upper_analytic_part"]
