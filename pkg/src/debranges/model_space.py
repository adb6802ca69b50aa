"""Finite-dimensional model of H(b) = H^2 minus b H^2 for a finite Blaschke
product b with distinct zeros.

Elements are coefficient vectors in the Malmquist-Walsh (Takenaka) basis

    e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} phi_j(z),

which is orthonormal in H^2.  Inner products are periodic trapezoid sums on
the circle; the coefficient of h along e_j is <h, e_j>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import RepeatedZeros, SingularResolvent, SpecError
from .quadrature import circle_mean
from .schur import SchurFunctionSpec, boundary_values, eval_b

DISTINCT_TOL = 1e-12
RANGE_RESIDUAL = 1e-10


def _blaschke_factor(a: complex, z: np.ndarray) -> np.ndarray:
    if a == 0:
        return z
    return (abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z)


def basis_values(zeros: np.ndarray, z) -> np.ndarray:
    """Array of shape (n, *z.shape) with e_k(z) in row k."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((zeros.size, *z.shape), dtype=complex)
    running = np.ones_like(z)
    for k, a in enumerate(zeros):
        out[k] = np.sqrt(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) * running
        running = running * _blaschke_factor(a, z)
    return out


def _boundary_inner(f, g_basis: np.ndarray | None = None):
    """Trapezoid inner products <f_i, e_j> for a batch of boundary functions.

    ``f(theta)`` returns shape (m_f, nodes); ``g_basis(theta)`` returns the
    conjugated partners, shape (n, nodes).  Result has shape (m_f, n).
    """
    def integrand(theta):
        fv = np.asarray(f(theta))
        gv = np.asarray(g_basis(theta))
        return fv[:, None, :] * np.conj(gv)[None, :, :]

    value, _ = circle_mean(integrand)
    return value


@dataclass(frozen=True)
class ModelSpaceRep:
    spec: SchurFunctionSpec
    zeros: np.ndarray = field(repr=False)
    gram: np.ndarray = field(repr=False)
    raw_gram: np.ndarray = field(repr=False)
    xstar: np.ndarray = field(repr=False)
    k0: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.zeros.size)

    def basis(self, z) -> np.ndarray:
        return basis_values(self.zeros, z)

    def evaluate(self, coeffs, z):
        """The function sum_j coeffs[j] e_j at z."""
        vals = np.tensordot(np.asarray(coeffs, dtype=complex), self.basis(z), axes=1)
        return complex(vals) if np.ndim(vals) == 0 else vals

    def shift_star_b(self, theta) -> np.ndarray:
        """S*b = (b - b(0))/z on the circle."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return (boundary_values(self.spec, theta) - eval_b(self.spec, 0j)) / z

    def xstar_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.xstar)


def build_model(spec: SchurFunctionSpec) -> ModelSpaceRep:
    if not spec.is_finite_blaschke:
        raise SpecError("the model space needs a finite Blaschke product "
                        "(explicit zeros, no atoms, no outer part)")
    zeros = spec.zero_array
    if zeros.size == 0:
        raise SpecError("b is constant: H(b) = {0} has no basis")
    for i in range(zeros.size):
        for j in range(i):
            if abs(zeros[i] - zeros[j]) <= DISTINCT_TOL:
                raise RepeatedZeros(f"zeros[{i}] repeats zeros[{j}]; "
                                    "multiple zeros are not supported")

    def e(theta):
        return basis_values(zeros, np.exp(1j * theta))

    gram = _boundary_inner(e, e)
    raw_gram = 1.0 / (1.0 - np.conj(zeros)[None, :] * zeros[:, None])
    b0 = eval_b(spec, 0j)

    def s_star_b(theta):
        z = np.exp(1j * theta)
        return ((boundary_values(spec, theta) - b0) / z)[None, :]

    # <e_k, S*b>, then X* e_k = z e_k - <e_k, S*b> b
    pairing = _boundary_inner(e, s_star_b)[:, 0]

    def xstar_columns(theta):
        z = np.exp(1j * theta)
        return z[None, :] * e(theta) - pairing[:, None] * boundary_values(spec, theta)[None, :]

    xstar = _boundary_inner(xstar_columns, e).T  # row j, column k: <X* e_k, e_j>

    def k0_fn(theta):
        return (1.0 - np.conj(b0) * boundary_values(spec, theta))[None, :]

    k0 = _boundary_inner(k0_fn, e)[0]
    return ModelSpaceRep(spec, zeros, gram, raw_gram, xstar, k0)


@dataclass(frozen=True)
class KernelCoordinates:
    projection: np.ndarray
    resolvent: np.ndarray

    @property
    def discrepancy(self) -> float:
        return float(np.max(np.abs(self.projection - self.resolvent)))


def _resolvent_matrix(rep: ModelSpaceRep, w_conj: complex) -> np.ndarray:
    a = np.eye(rep.dim) - w_conj * rep.xstar
    if np.linalg.cond(a) > 1e14:
        raise SingularResolvent(f"Id - {w_conj} X* is numerically singular")
    return a


def kernel_in_model(rep: ModelSpaceRep, lam) -> KernelCoordinates:
    """Coordinates of k_lam^b: by boundary projection and by the resolvent."""
    lam = complex(lam)
    if not abs(lam) < 1:
        raise ValueError("lam must lie in the open disc")
    b_lam = eval_b(rep.spec, lam)

    def k_fn(theta):
        z = np.exp(1j * theta)
        return ((1.0 - np.conj(b_lam) * boundary_values(rep.spec, theta))
                / (1.0 - np.conj(lam) * z))[None, :]

    e = lambda theta: rep.basis(np.exp(1j * theta))  # noqa: E731
    projection = _boundary_inner(k_fn, e)[0]
    resolvent = np.linalg.solve(_resolvent_matrix(rep, np.conj(lam)), rep.k0)
    return KernelCoordinates(projection, resolvent)


def derivative_kernel_resolvent(rep: ModelSpaceRep, omega, order: int) -> np.ndarray:
    """N! (Id - conj(omega) X*)^-(N+1) X*^N k_0 in basis coordinates."""
    omega = complex(omega)
    if order < 0:
        raise ValueError("order must be >= 0")
    if not abs(omega) < 1:
        raise ValueError("omega must lie in the open disc")
    a = _resolvent_matrix(rep, np.conj(omega))
    vec = np.linalg.matrix_power(rep.xstar, order) @ rep.k0
    for _ in range(order + 1):
        vec = np.linalg.solve(a, vec)
    return factorial(order) * vec


def model_norm_sq(rep: ModelSpaceRep, omega, order: int) -> float:
    """||k_{omega,N}||^2 read off orthonormal coordinates."""
    c = derivative_kernel_resolvent(rep, omega, order)
    return float(np.real(np.vdot(c, rep.gram @ c)))


@dataclass(frozen=True)
class RangeTestResult:
    verdict: str  # "InRange" | "NotInRange"
    witness: np.ndarray | None
    residual: float
    zeta0: complex
    order: int


def range_test(rep: ModelSpaceRep, zeta0, order: int) -> RangeTestResult:
    """Is X*^N k_0 in the range of (Id - conj(zeta0) X*)^(N+1)?"""
    zeta0 = complex(zeta0)
    if abs(abs(zeta0) - 1.0) > 1e-12:
        raise ValueError("zeta0 must lie on the unit circle")
    if order < 0:
        raise ValueError("order must be >= 0")
    a = np.linalg.matrix_power(np.eye(rep.dim) - np.conj(zeta0) * rep.xstar, order + 1)
    rhs = np.linalg.matrix_power(rep.xstar, order) @ rep.k0
    witness, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    residual = float(np.linalg.norm(a @ witness - rhs))
    verdict = "InRange" if residual < RANGE_RESIDUAL else "NotInRange"
    return RangeTestResult(verdict, witness if verdict == "InRange" else None, residual,
                           zeta0, order)


def verify_xstar_identity(rep: ModelSpaceRep, nodes: int = 512) -> float:
    """max over basis elements h and boundary nodes of
    |(X* h)(zeta) - (zeta h(zeta) - <h, S*b> b(zeta))|, with <h, S*b>
    recomputed independently by quadrature."""
    theta = 2.0 * np.pi * np.arange(nodes) / nodes + 0.5 / nodes  # off the build grid
    z = np.exp(1j * theta)

    def e(t):
        return rep.basis(np.exp(1j * t))

    pairing = _boundary_inner(e, lambda t: rep.shift_star_b(t)[None, :])[:, 0]
    left = rep.xstar.T @ rep.basis(z)  # row k: sum_j X*[j,k] e_j
    right = z[None, :] * rep.basis(z) - pairing[:, None] * boundary_values(rep.spec, theta)[None, :]
    return float(np.max(np.abs(left - right)))


__all__ = [
    "ModelSpaceRep", "KernelCoordinates", "RangeTestResult", "build_model", "basis_values",
    "kernel_in_model", "derivative_kernel_resolvent", "model_norm_sq", "range_test",
    "verify_xstar_identity",
]
