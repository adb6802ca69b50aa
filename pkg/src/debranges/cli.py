"""Command-line front end.

    debranges describe   --fixture atom-at-1
    debranges criterion  --fixture single-zero --zeta 0 --order 0
    debranges probe      --spec my.yaml --zeta 0.5 --order 1 --depths 1,2,3,4
    debranges model      --fixture two-zero-blaschke --zeta 1 --order 2
    debranges arc        --fixture atom-at-1 --start 0.5 --end 1.5
    debranges transfer   --fixture three-zero-blaschke
    debranges bernstein  --fixture single-zero
    debranges verify-all --fixture atom-at-1 --format json

Angles are given in units of pi.  Exit status: 0 on success, 2 when two
decidable channels disagree, 1 on any input or numerical error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from .continuation import (arc_classification, is_extreme_point, kernel_continuity,
                           kernel_trace_decidable, spectrum)
from .criterion import classify_boundary_point, criterion
from .densities import ANGLE_TOL, TWO_PI, angle_distance, wrap
from .errors import ConsistencyViolation, DeBrangesError, UnsupportedSymbol
from .fixtures import FIXTURES, fixture
from .halfplane import (SYMBOLS, bernstein_check, boundary_derivative_sup, circle_norm_sq,
                        kernel_rational, line_norm_sq, rational_test_set, transfer_function,
                        transfer_rational, verify_intertwining)
from .kernels import kernel, kernel_norm_sq, radial_norm_probe, radius_grid
from .model_space import (build_model, kernel_in_model, model_norm_sq, range_test,
                          verify_xstar_identity)
from .report import Record, to_json, to_text
from .schur import SchurFunctionSpec, ZeroFamily, describe, eval_b
from .specfile import load_spec

COMMANDS = ("describe", "criterion", "probe", "model", "arc", "transfer", "bernstein",
            "verify-all")
IDENTITY_TOL = 1e-8
BERNSTEIN_RTOL = 1e-6
RESOLVENT_THRESHOLD = 1e-6
SAMPLE_LAMBDAS = (0.0, 0.5, 0.5j, -0.3 + 0.2j, 0.6 - 0.6j)
MODEL_POINTS = (0.0, 0.4 + 0.3j, -0.7j)
LINE_SAMPLES = np.linspace(-8.0, 8.0, 33)


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: SchurFunctionSpec
    source: str
    zeta: float | None = None  # units of pi
    order: int = 0
    start: float | None = None  # units of pi
    end: float | None = None
    depths: tuple[int, ...] | None = None
    orders: tuple[int, ...] = (0, 1)
    fmt: str = "text"
    params: dict = field(default_factory=dict)


def _theta(units_of_pi: float) -> float:
    return wrap(np.pi * units_of_pi)


def _pi_units(theta: float) -> float:
    return float(wrap(theta) / np.pi)


def _need(config: RunConfig, *names):
    missing = [n for n in names if getattr(config, n) is None]
    if missing:
        raise ValueError(f"{config.command} needs --{' --'.join(missing)}")


# ---------------------------------------------------------------- commands

def cmd_describe(config: RunConfig) -> list[Record]:
    spec = config.spec
    extreme = is_extreme_point(spec)
    spec_report = spectrum(spec)
    info = describe(spec)
    info["atoms"] = [[_pi_units(t), s] for t, s in spec.atoms]
    if "zero_family" in info:
        info["zero_family"]["accumulation_angle"] = _pi_units(
            info["zero_family"]["accumulation_angle"])
    values = {
        "factorization": info,
        "spectrum": {
            "interior_zero_count": int(spec_report.interior_zeros.size),
            "truncation": spec_report.truncation,
            "boundary_points": [{"angle": _pi_units(p.angle), "reason": p.reason}
                                for p in spec_report.points],
            "arcs": [{"start": _pi_units(s), "length": l / np.pi} for s, l in spec_report.arcs],
        },
        "log_one_minus_integral": extreme.log_integral,
    }
    verdicts = {"extreme": {True: "extreme", False: "not extreme", None: "undecided"}[
        extreme.extreme]}
    return [Record("describe", config.params, verdicts, values,
                   {"extreme": extreme.evidence})]


def _criterion_record(spec, theta0, order, params) -> Record:
    report = criterion(spec, theta0, order)
    verdicts = {"total": report.verdict, "blaschke": report.blaschke.status,
                "atomic": report.atomic.status, "outer": report.outer.status}
    values = {"total": report.total.value, "blaschke": report.blaschke.value,
              "atomic": report.atomic.value, "outer": report.outer.value,
              "truncation": report.truncation}
    if report.blaschke.trace:
        values["partial_sums"] = {"count": [n for n, _ in report.blaschke.trace],
                                  "sum": [v for _, v in report.blaschke.trace]}
    evidence = {"blaschke": report.blaschke.evidence, "atomic": report.atomic.evidence,
                "outer": report.outer.evidence}
    return Record("criterion", params, verdicts, values, evidence)


def cmd_criterion(config: RunConfig) -> list[Record]:
    _need(config, "zeta")
    return [_criterion_record(config.spec, _theta(config.zeta), config.order, config.params)]


def cmd_probe(config: RunConfig) -> list[Record]:
    _need(config, "zeta")
    theta0 = _theta(config.zeta)
    r_grid = None if config.depths is None else radius_grid(config.depths)
    probe = radial_norm_probe(config.spec.rotated(-theta0), config.order, r_grid)
    values = {"r": [row.r for row in probe.rows], "norm_sq": [row.value for row in probe.rows],
              "flag": [row.flag for row in probe.rows], "growth_ratio": probe.growth_ratio,
              "spread": probe.spread, "truncation": probe.truncation}
    return [Record("probe", config.params, {"probe": probe.verdict}, values,
                   {"rule": "bounded: last three within 5%; divergent: last/third-last > 10"})]


def cmd_model(config: RunConfig) -> list[Record]:
    spec = config.spec
    rep = build_model(spec)
    kernel_gap = max(kernel_in_model(rep, lam).discrepancy for lam in SAMPLE_LAMBDAS)
    norm_gap = 0.0
    for order in range(config.order + 1):
        for w in MODEL_POINTS:
            a = model_norm_sq(rep, w, order)
            b = kernel_norm_sq(spec, w, order)
            norm_gap = max(norm_gap, abs(a - b) / max(1.0, abs(b)))
    eig = np.sort_complex(rep.xstar_eigenvalues())
    zeros = np.sort_complex(rep.zeros)
    values = {
        "dim": rep.dim,
        "xstar_identity_residual": verify_xstar_identity(rep),
        "kernel_coordinate_discrepancy": kernel_gap,
        "norm_relative_gap": norm_gap,
        "eigenvalue_gap": float(np.max(np.abs(eig - zeros))),
        "gram_hermitian_residual": float(np.max(np.abs(rep.gram - rep.gram.conj().T))),
    }
    verdicts = {"identities": "pass" if max(values["xstar_identity_residual"], kernel_gap,
                                            norm_gap) < IDENTITY_TOL else "fail"}
    if config.zeta is not None:
        rng = range_test(rep, np.exp(1j * _theta(config.zeta)), config.order)
        verdicts["range"] = rng.verdict
        values["range_residual"] = rng.residual
    return [Record("model", config.params, verdicts, values,
                   {"eigenvalues": "X* eigenvalues compared with the zeros (sorted)"})]


def _arc_record(spec, start, end, params) -> Record:
    verdict = arc_classification(spec, start, end)
    trace = kernel_continuity(spec, start, end)
    values = {"blocking_points": [_pi_units(t) for t in verdict.blocking_points],
              "kernel_differences": list(trace.differences)}
    if "resolvent_min_singular_value" in verdict.channel_evidence:
        values["resolvent_min_singular_value"] = \
            verdict.channel_evidence["resolvent_min_singular_value"]
    verdicts = {"arc": "passes" if verdict.passes else "blocked", "kernel_trace": trace.verdict}
    evidence = {"spectrum": verdict.channel_evidence["spectrum"], "kernel_trace": trace.evidence}
    return Record("arc", params, verdicts, values, evidence)


def cmd_arc(config: RunConfig) -> list[Record]:
    _need(config, "start", "end")
    return [_arc_record(config.spec, _theta(config.start), _theta(config.end), config.params)]


def cmd_transfer(config: RunConfig) -> list[Record]:
    spec = config.spec
    tests = rational_test_set()
    if spec.is_finite_blaschke:
        tests.update({f"k_{lam}": kernel_rational(spec, lam) for lam in SAMPLE_LAMBDAS[:3]})
    unitarity = {}
    intertwining = {}
    for name, f in tests.items():
        circle = circle_norm_sq(f)
        unitarity[name] = abs(line_norm_sq(transfer_rational(f)) - circle) / circle
        intertwining[name] = max(verify_intertwining(phi, f, LINE_SAMPLES)
                                 for phi in SYMBOLS.values())
    b1 = transfer_function(spec)
    w = LINE_SAMPLES + 1j
    values = {"unitarity_relative_gap": unitarity, "intertwining_residual": intertwining,
              "b1_on_line": {"x": LINE_SAMPLES, "y": 1.0, "abs_b1": np.abs(b1(w))}}
    ok = max(unitarity.values()) < 1e-6 and max(intertwining.values()) < IDENTITY_TOL
    return [Record("transfer", config.params, {"identities": "pass" if ok else "fail"}, values,
                   {"symbols": ", ".join(SYMBOLS)})]


def cmd_bernstein(config: RunConfig) -> list[Record]:
    result = bernstein_check(config.spec)
    values = {"sup_estimate": result.sup_estimate,
              "level_y": [y for y, _ in result.level_sups],
              "level_sup": [s for _, s in result.level_sups]}
    return [Record("bernstein", config.params, {"bernstein": result.status}, values,
                   {"reason": result.reason})]


# -------------------------------------------------------------- verify-all

def _check(name: str, passed: bool, values: dict, evidence: str = "") -> Record:
    return Record("verify-all", {"check": name}, {"check": "pass" if passed else "fail"},
                  values, {"detail": evidence} if evidence else {})


def _sample_points(rng, count, radius_max):
    r = radius_max * np.sqrt(rng.uniform(0.0, 1.0, count))
    return r * np.exp(1j * rng.uniform(0.0, TWO_PI, count))


def _classification_points(spec: SchurFunctionSpec) -> list[float]:
    points = [_theta(x) for x in (0.0, 0.5, 1.0, 1.5)]
    points += [t for t, _ in spec.atoms]
    if isinstance(spec.zeros, ZeroFamily):
        points.append(spec.zeros.accumulation_angle)
    out = []
    for t in points:
        if not any(angle_distance(t, u) <= ANGLE_TOL for u in out):
            out.append(wrap(t))
    return sorted(out)


def _verify_arcs(spec: SchurFunctionSpec) -> list[tuple[float, float]]:
    """Quarter arcs plus one arc strictly inside each gap of the boundary spectrum."""
    arcs = [(_theta(k / 2.0), _theta((k + 1) / 2.0)) for k in range(4)]
    marks = sorted({p.angle for p in spectrum(spec).points})
    for i, a in enumerate(marks):
        b = marks[(i + 1) % len(marks)]
        gap = float(np.mod(b - a, TWO_PI)) or TWO_PI
        arcs.append((wrap(a + 0.1 * gap), wrap(a + 0.9 * gap)))
    return arcs


def verify_all(config: RunConfig) -> list[Record]:
    spec = config.spec
    rng = np.random.default_rng(20240601)
    records: list[Record] = []

    z = _sample_points(rng, 100, 0.95)
    inside = eval_b(spec, z)
    try:
        outside = eval_b(spec, 1.0 / np.conj(z))
        residual = float(np.max(np.abs(inside * np.conj(outside) - 1.0)))
        records.append(_check("reflection", residual < IDENTITY_TOL,
                              {"max_residual": residual}, "b(z) conj(b(1/conj z)) = 1"))
    except DeBrangesError as exc:
        records.append(_check("reflection", False, {}, f"{type(exc).__name__}: {exc}"))
    modulus = float(np.max(np.abs(inside)))
    records.append(_check("modulus-bound", modulus <= 1.0 + 1e-12, {"max_modulus": modulus}))

    lams = np.array(SAMPLE_LAMBDAS)
    gram = kernel(spec, lams[None, :], lams[:, None])  # gram[i, j] = k_{l_j}(l_i)
    herm = float(np.max(np.abs(gram - gram.conj().T)))
    min_eig = float(np.min(np.linalg.eigvalsh((gram + gram.conj().T) / 2.0)))
    records.append(_check("kernel-gram", herm < IDENTITY_TOL and min_eig > -IDENTITY_TOL,
                          {"hermitian_residual": herm, "min_eigenvalue": min_eig}))

    violations = []
    for theta0 in _classification_points(spec):
        for order in config.orders:
            result = classify_boundary_point(spec, theta0, order, strict=False)
            values = {"zeta": _pi_units(theta0), "order": order,
                      "criterion": result.criterion.verdict,
                      "criterion_value": result.criterion.total.value,
                      "probe": result.probe.verdict,
                      "probe_growth_ratio": result.probe.growth_ratio,
                      "probe_spread": result.probe.spread}
            if result.range is not None:
                values["range"] = result.range.verdict
            passed = result.consistent
            if not passed:
                violations.extend(result.disagreements)
            detail = "; ".join(result.disagreements) if result.disagreements else (
                "channels agree" if len(result.channels) > 1 else
                f"decidable channels: {', '.join(sorted(result.channels)) or 'none'}")
            records.append(_check("boundary-point", passed, values, detail))

    if spec.is_finite_blaschke and spec.zero_array.size:
        rep = build_model(spec)
        xres = verify_xstar_identity(rep)
        kgap = max(kernel_in_model(rep, lam).discrepancy for lam in SAMPLE_LAMBDAS)
        ngap = max(abs(model_norm_sq(rep, w, n) - kernel_norm_sq(spec, w, n))
                   / max(1.0, kernel_norm_sq(spec, w, n))
                   for w in MODEL_POINTS for n in range(3))
        records.append(_check("model-space", max(xres, kgap, ngap) < IDENTITY_TOL,
                              {"xstar_identity_residual": xres,
                               "kernel_coordinate_discrepancy": kgap,
                               "norm_relative_gap": ngap}))

    any_passing = False
    for start, end in _verify_arcs(spec):
        verdict = arc_classification(spec, start, end)
        any_passing |= verdict.passes
        values = {"start": _pi_units(start), "end": _pi_units(end),
                  "arc": "passes" if verdict.passes else "blocked",
                  "blocking_points": [_pi_units(t) for t in verdict.blocking_points]}
        problems = []
        if kernel_trace_decidable(spec):
            trace = kernel_continuity(spec, start, end)
            values["kernel_trace"] = trace.verdict
            if (trace.verdict == "continuous") != verdict.passes:
                problems.append(f"spectrum says {values['arc']}, kernel trace says "
                                f"{trace.verdict}")
        sv = verdict.channel_evidence.get("resolvent_min_singular_value")
        if sv is not None:
            values["resolvent_min_singular_value"] = sv
            if (sv > RESOLVENT_THRESHOLD) != verdict.passes:
                problems.append(f"resolvent singular value {sv:.3g} contradicts {values['arc']}")
        violations.extend(problems)
        records.append(_check("arc", not problems, values, "; ".join(problems)))

    extreme = is_extreme_point(spec)
    problem = any_passing and extreme.extreme is False
    if problem:
        violations.append("an arc passes but b is not an extreme point")
    records.append(_check("extreme-point", not problem,
                          {"extreme": extreme.extreme, "any_arc_passes": any_passing,
                           "log_one_minus_integral": extreme.log_integral},
                          "a passing arc requires an extreme point; " + extreme.evidence))

    bern = bernstein_check(spec)
    values = {"bernstein": bern.status, "sup_estimate": bern.sup_estimate}
    problems = []
    try:
        oracle = boundary_derivative_sup(spec)
    except UnsupportedSymbol:
        oracle = None
    if oracle is not None:
        values["boundary_formula_sup"] = oracle
        if np.isfinite(oracle):
            if bern.status != "Holds" or abs(bern.sup_estimate - oracle) > BERNSTEIN_RTOL * oracle:
                problems.append(f"bernstein {bern.status} {bern.sup_estimate} against boundary "
                                f"formula {oracle}")
        elif bern.status == "Holds":
            problems.append("bernstein holds but the boundary formula is unbounded")
    elif not spec.is_inner and bern.status != "Fails":
        problems.append("a non-inner b must fail the Bernstein check")
    violations.extend(problems)
    records.append(_check("bernstein", not problems, values, "; ".join(problems) or bern.reason))

    failed = [r.params["check"] for r in records if r.verdicts["check"] == "fail"]
    summary = Record("verify-all", {"check": "summary"},
                     {"suite": "pass" if not failed else "fail"},
                     {"checks": len(records), "failed": failed}, {})
    records.append(summary)
    if failed:
        raise ConsistencyViolation("; ".join(violations) or f"failed checks: {failed}",
                                   report=records)
    return records


DISPATCH = {
    "describe": cmd_describe, "criterion": cmd_criterion, "probe": cmd_probe,
    "model": cmd_model, "arc": cmd_arc, "transfer": cmd_transfer,
    "bernstein": cmd_bernstein, "verify-all": verify_all,
}


# ------------------------------------------------------------------ parser

def _int_list(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="debranges",
                                     description="Boundary behaviour in de Branges-Rovnyak "
                                                 "spaces H(b).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--spec", help="YAML spec file")
        source.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in spec")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if name in ("criterion", "probe", "model"):
            p.add_argument("--zeta", type=float, help="boundary angle in units of pi")
            p.add_argument("--order", type=int, default=0, help="derivative order N >= 0")
        if name == "probe":
            p.add_argument("--depths", type=_int_list, help="k values for r = 1 - 10^-k")
        if name == "arc":
            p.add_argument("--start", type=float, help="arc start in units of pi")
            p.add_argument("--end", type=float, help="arc end in units of pi (counter-clockwise)")
        if name == "verify-all":
            p.add_argument("--orders", type=_int_list, default=(0, 1),
                           help="derivative orders to classify (default 0,1)")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    if args.spec is not None:
        spec, source = load_spec(args.spec), args.spec
    else:
        spec, source = fixture(args.fixture), f"fixture:{args.fixture}"
    order = getattr(args, "order", 0)
    orders = getattr(args, "orders", (0, 1))
    if order < 0 or any(n < 0 for n in orders):
        raise ValueError("derivative orders must be >= 0")
    depths = getattr(args, "depths", None)
    if depths is not None and (any(k <= 0 for k in depths) or list(depths) != sorted(set(depths))):
        raise ValueError("--depths must be strictly increasing positive integers")
    start, end = getattr(args, "start", None), getattr(args, "end", None)
    if start is not None and end is not None:
        if angle_distance(np.pi * start, np.pi * end) <= ANGLE_TOL:
            raise ValueError("arc endpoints must be distinct modulo 2 pi")
    params = {"source": source}
    for key in ("zeta", "order", "depths", "start", "end", "orders"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return RunConfig(args.command, spec, source, getattr(args, "zeta", None), order, start, end,
                     depths, tuple(orders), args.format, params)


def run(config: RunConfig) -> list[Record]:
    return DISPATCH[config.command](config)


def _emit(records, fmt: str, stream) -> None:
    for record in records:
        stream.write((to_json(record) if fmt == "json" else to_text(record)) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
        records = run(config)
    except ConsistencyViolation as exc:
        if isinstance(exc.report, list):
            _emit(exc.report, args.format, sys.stdout)
        print(f"consistency violation: {exc}", file=sys.stderr)
        return 2
    except (DeBrangesError, ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error ({type(exc).__name__}): {message}", file=sys.stderr)
        return 1
    _emit(records, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
