"""Reading and writing spec files.

A spec file is a YAML mapping::

    gamma: [1.0, 0.0]               # unimodular constant as [re, im]
    zeros: [[0.0, 0.0], [0.5, 0.0]] # explicit zeros as [re, im] ...
    zero_family:                    # ... or a parametric family
      modulus_exponent: 4
      argument_exponent: 1
      count: 10000
      phase: 0.0                    # accumulation angle, units of pi
    atoms: [[0.0, 1.0]]             # [angle in units of pi, weight]
    outer:
      density_id: half-shift
      rotation: 0.0                 # units of pi
      integrability_flags: [[0.0, 0]]  # [angle in units of pi, max finite order]
    label: my-function

Every field is optional; the empty mapping is b = 1.  Angles are written
in units of pi so common points stay exact (``0.5`` is i).
"""

from __future__ import annotations

import re

import numpy as np
import yaml

from .densities import OuterPart
from .errors import ParseError, SpecError
from .schur import SchurFunctionSpec, ZeroFamily

TOP_LEVEL = ("gamma", "zeros", "zero_family", "atoms", "outer", "label")
FAMILY_FIELDS = ("modulus_exponent", "argument_exponent", "count", "phase")
OUTER_FIELDS = ("density_id", "rotation", "integrability_flags")


def _line_index(node, path="", out=None) -> dict[str, int]:
    """Map field paths such as ``atoms[0]`` to 1-based source lines."""
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            sub = f"{path}.{key.value}" if path else str(key.value)
            out[sub] = key.start_mark.line + 1
            _line_index(value, sub, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            sub = f"{path}[{i}]"
            out[sub] = item.start_mark.line + 1
            _line_index(item, sub, out)
    return out


class _Reader:
    def __init__(self, lines: dict[str, int]):
        self.lines = lines

    def fail(self, field: str, message: str):
        line = self.lines.get(field)
        parent = field
        while line is None:  # fall back to the closest enclosing field
            shorter = re.sub(r"(\.[^.\[]+|\[\d+\])$", "", parent)
            if shorter == parent:
                break
            parent = shorter
            line = self.lines.get(parent)
        raise ParseError(message, field=field, line=line)

    def number(self, value, field: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(field, f"expected a number, got {value!r}")
        return float(value)

    def pair(self, value, field: str) -> tuple[float, float]:
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            self.fail(field, f"expected a pair [x, y], got {value!r}")
        return self.number(value[0], f"{field}[0]"), self.number(value[1], f"{field}[1]")

    def mapping(self, value, field: str, allowed) -> dict:
        if not isinstance(value, dict):
            self.fail(field, f"expected a mapping, got {value!r}")
        for key in value:
            if key not in allowed:
                self.fail(f"{field}.{key}" if field else str(key), f"unknown field (allowed: {', '.join(allowed)})")
        return value

    def listing(self, value, field: str) -> list:
        if not isinstance(value, list):
            self.fail(field, f"expected a list, got {value!r}")
        return value


def parse_spec(text: str) -> SchurFunctionSpec:
    """Build a spec from spec-file text; errors name the field and line."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                         line=None if mark is None else mark.line + 1) from None
    reader = _Reader(_line_index(node) if node is not None else {})
    data = {} if data is None else data
    reader.mapping(data, "", TOP_LEVEL) if isinstance(data, dict) else reader.fail(
        "spec", "a spec file must be a mapping")

    gamma = complex(*reader.pair(data["gamma"], "gamma")) if "gamma" in data else 1.0
    if "zeros" in data and "zero_family" in data:
        reader.fail("zero_family", "give either zeros or zero_family, not both")
    zeros: tuple | ZeroFamily = ()
    if "zeros" in data:
        entries = reader.listing(data["zeros"], "zeros")
        zeros = tuple(complex(*reader.pair(z, f"zeros[{i}]")) for i, z in enumerate(entries))
    elif "zero_family" in data:
        fam = reader.mapping(data["zero_family"], "zero_family", FAMILY_FIELDS)
        for key in FAMILY_FIELDS[:3]:
            if key not in fam:
                reader.fail("zero_family", f"missing field {key}")
        count = fam["count"]
        if isinstance(count, bool) or not isinstance(count, int):
            reader.fail("zero_family.count", f"expected an integer, got {count!r}")
        try:
            zeros = ZeroFamily(reader.number(fam["modulus_exponent"], "zero_family.modulus_exponent"),
                               reader.number(fam["argument_exponent"], "zero_family.argument_exponent"),
                               count,
                               np.pi * reader.number(fam.get("phase", 0.0), "zero_family.phase"))
        except SpecError as exc:
            _reraise(reader, exc, "zero_family")
    atoms = ()
    if "atoms" in data:
        entries = reader.listing(data["atoms"], "atoms")
        pairs = [reader.pair(a, f"atoms[{i}]") for i, a in enumerate(entries)]
        atoms = tuple((np.pi * t, s) for t, s in pairs)
    outer = None
    if "outer" in data:
        spec_outer = reader.mapping(data["outer"], "outer", OUTER_FIELDS)
        if "density_id" not in spec_outer:
            reader.fail("outer", "missing field density_id")
        flags = []
        for i, entry in enumerate(reader.listing(spec_outer.get("integrability_flags", []),
                                                 "outer.integrability_flags")):
            field = f"outer.integrability_flags[{i}]"
            theta, order = reader.pair(entry, field)
            if order != int(order) or order < -1:
                reader.fail(field, "max order must be an integer >= -1")
            flags.append((np.pi * theta, int(order)))
        try:
            outer = OuterPart(str(spec_outer["density_id"]),
                              np.pi * reader.number(spec_outer.get("rotation", 0.0), "outer.rotation"),
                              tuple(flags))
        except KeyError as exc:
            reader.fail("outer.density_id", str(exc.args[0]))
    label = str(data.get("label", ""))
    try:
        return SchurFunctionSpec(gamma, zeros, atoms, outer, label=label)
    except SpecError as exc:
        _reraise(reader, exc, "spec")


def _reraise(reader: _Reader, exc: SpecError, default_field: str):
    message = str(exc)
    match = re.match(r"^([a-z_]+(?:\[\d+\])?(?:\.[a-z_]+)?): (.*)$", message)
    if match:
        reader.fail(match.group(1), match.group(2))
    reader.fail(default_field, message)


def load_spec(path) -> SchurFunctionSpec:
    with open(path, encoding="utf-8") as fh:
        spec = parse_spec(fh.read())
    return spec


def spec_to_dict(spec: SchurFunctionSpec) -> dict:
    """Inverse of :func:`parse_spec` (angles back in units of pi)."""
    out: dict = {"gamma": [spec.gamma.real, spec.gamma.imag]}
    if isinstance(spec.zeros, ZeroFamily):
        fam = spec.zeros
        out["zero_family"] = {"modulus_exponent": fam.modulus_exponent,
                              "argument_exponent": fam.argument_exponent,
                              "count": fam.count, "phase": fam.phase / np.pi}
    else:
        out["zeros"] = [[z.real, z.imag] for z in spec.zeros]
    out["atoms"] = [[t / np.pi, s] for t, s in spec.atoms]
    if spec.outer is not None:
        out["outer"] = {"density_id": spec.outer.density_id,
                        "rotation": spec.outer.rotation / np.pi,
                        "integrability_flags": [[t / np.pi, m]
                                                for t, m in spec.outer.flag_overrides]}
    if spec.label:
        out["label"] = spec.label
    return out


def dump_spec(spec: SchurFunctionSpec) -> str:
    return yaml.safe_dump(spec_to_dict(spec), sort_keys=False)


__all__ = ["parse_spec", "load_spec", "spec_to_dict", "dump_spec"]
