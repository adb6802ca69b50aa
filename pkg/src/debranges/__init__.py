"""Boundary behaviour of functions in de Branges-Rovnyak spaces H(b).

The package evaluates Schur functions b from their factorization data,
computes reproducing kernels and their derivatives, decides when
derivatives of H(b) functions have radial limits at a boundary point,
classifies boundary arcs across which H(b) functions continue
analytically, and transfers the setting to the upper half-plane.
"""

from __future__ import annotations

from .continuation import arc_classification, is_extreme_point, kernel_continuity, spectrum
from .criterion import classify_boundary_point, criterion
from .densities import OuterPart
from .errors import (ConsistencyViolation, DeBrangesError, NotRealResult, ParseError,
                     PoleAtReflectedZero, QuadratureFailure, RepeatedZeros, SingularResolvent,
                     SpecError, UnsupportedSymbol)
from .fixtures import FIXTURES, fixture
from .halfplane import bernstein_check, cayley, cayley_inverse, transfer_function
from .kernels import derivative_kernel, kernel, kernel_norm_sq, radial_norm_probe
from .model_space import build_model, range_test, verify_xstar_identity
from .schur import SchurFunctionSpec, ZeroFamily, eval_b, eval_b_derivatives
from .specfile import dump_spec, load_spec, parse_spec

__all__ = [
    "SchurFunctionSpec", "ZeroFamily", "OuterPart", "eval_b", "eval_b_derivatives",
    "kernel", "derivative_kernel", "kernel_norm_sq", "radial_norm_probe",
    "build_model", "range_test", "verify_xstar_identity",
    "criterion", "classify_boundary_point",
    "spectrum", "arc_classification", "kernel_continuity", "is_extreme_point",
    "cayley", "cayley_inverse", "transfer_function", "bernstein_check",
    "parse_spec", "load_spec", "dump_spec", "fixture", "FIXTURES",
    "DeBrangesError", "SpecError", "ParseError", "PoleAtReflectedZero", "QuadratureFailure",
    "NotRealResult", "RepeatedZeros", "SingularResolvent", "UnsupportedSymbol",
    "ConsistencyViolation",
]
