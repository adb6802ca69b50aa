"""Built-in Schur functions used by the CLI and the test-suite."""

from __future__ import annotations

import numpy as np

from .densities import OuterPart
from .schur import SchurFunctionSpec, ZeroFamily


def _single_zero():
    return SchurFunctionSpec(zeros=(0j,), label="single-zero")


def _atom_at_1():
    return SchurFunctionSpec(atoms=((0.0, 1.0),), label="atom-at-1")


def _tangential_family():
    return SchurFunctionSpec(zeros=ZeroFamily(4.0, 1.0, 10_000), label="tangential-family")


def _two_zero():
    return SchurFunctionSpec(zeros=(0j, 0.5 + 0j), label="two-zero-blaschke")


def _three_zero():
    return SchurFunctionSpec(zeros=(0.3 + 0j, -0.4 + 0j, 0.1 + 0.2j), label="three-zero-blaschke")


def _outer_half():
    return SchurFunctionSpec(outer=OuterPart("half-shift"), label="outer-half")


def _atom_at_pi():
    return SchurFunctionSpec(atoms=((np.pi, 1.0),), label="atom-at-pi")


FIXTURES = {
    "single-zero": _single_zero,
    "atom-at-1": _atom_at_1,
    "tangential-family": _tangential_family,
    "two-zero-blaschke": _two_zero,
    "three-zero-blaschke": _three_zero,
    "outer-half": _outer_half,
    "atom-at-pi": _atom_at_pi,
}

FINITE_BLASCHKE_FIXTURES = ("single-zero", "two-zero-blaschke", "three-zero-blaschke")


def fixture(name: str) -> SchurFunctionSpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


__all__ = ["FIXTURES", "FINITE_BLASCHKE_FIXTURES", "fixture"]
