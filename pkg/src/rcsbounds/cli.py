"""Command-line surface: verify instance files, fuzz, sharpness, compare.

Exit codes: 0 the checked inequality holds (or no fuzz violations),
2 violated (or a degenerate sharpness window), 3 precondition failed,
1 usage or I/O error.

Default tolerances come from RCSBOUNDS_RTOL / RCSBOUNDS_ATOL when set;
--tol-rtol / --tol-atol take precedence over both the environment and
any overrides stored in an instance file.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence

import jsonschema
import numpy as np

from . import jsonio
from .bounds import (
    ADD_FUNCTIONAL,
    ADD_MATRIX,
    GREUB_RHEINBOLDT,
    HOLDS,
    INEQUALITY_IDS,
    INT_ADD,
    INT_MULT,
    MULT_FUNCTIONAL,
    MULT_MATRIX,
    OP_PAIR_ADD,
    OP_PAIR_MULT,
    PRECONDITION_FAILED,
    PS_ADD,
    PS_IMPROVED,
    PS_MULT,
    VIOLATED,
    WEIGHTED_ADD,
    BoundReport,
    DegenerateSpaceError,
    NonPositiveReOmegaError,
    WeightedSequences,
    WindowViolationError,
    additive_matrix_bound,
    functional_additive_bound,
    functional_multiplicative_bound,
    greub_rheinboldt,
    integral_bounds,
    multiplicative_matrix_bound,
    operator_pair_bounds,
    polya_szego_additive,
    polya_szego_improved,
    polya_szego_multiplicative,
    sharpness_witness,
    weighted_additive,
)
from .forms import FormInstance, OmegaPair, PositiveFunctional
from .harness import (
    FuzzSummary,
    GeneratorConfig,
    fuzz_run,
    gen_argmin_families,
    gen_bounded_sequences,
    run_trial,
    sample_window,
)
from .matalg import DEFAULT_TOL, Tolerance
from .rng import stream

__all__ = ["main", "INSTANCE_SCHEMA", "CSV_HEADER"]

ENV_RTOL = "RCSBOUNDS_RTOL"
ENV_ATOL = "RCSBOUNDS_ATOL"

SHARPNESS_TARGET = 0.25
SHARPNESS_TOL = 1e-12

CSV_HEADER = (
    "window_a",
    "window_A",
    "window_b",
    "window_B",
    "c1",
    "c2",
    "c3",
    "argmin",
    "lhs",
    "margin",
    "equality_residual",
)

_MATRIX_IDS = frozenset({ADD_MATRIX, MULT_MATRIX})
_FUNCTIONAL_IDS = frozenset({ADD_FUNCTIONAL, MULT_FUNCTIONAL})
_OPERATOR_IDS = frozenset({OP_PAIR_ADD, OP_PAIR_MULT})
_SEQUENCE_IDS = frozenset(
    {INT_ADD, INT_MULT, GREUB_RHEINBOLDT, WEIGHTED_ADD, PS_MULT, PS_ADD, PS_IMPROVED}
)

_COMPLEX_SCHEMA = {
    "type": "array",
    "prefixItems": [{"type": "number"}, {"type": "number"}],
    "minItems": 2,
    "maxItems": 2,
    "items": False,
}
_VECTOR_SCHEMA = {"type": "array", "minItems": 1, "items": _COMPLEX_SCHEMA}
_MATRIX_SCHEMA = {"type": "array", "minItems": 1, "items": _VECTOR_SCHEMA}
_REAL_SEQ_SCHEMA = {"type": "array", "minItems": 1, "items": {"type": "number"}}

INSTANCE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "target"],
    "properties": {
        "version": {"const": "1"},
        "target": {"enum": sorted(INEQUALITY_IDS)},
        "tolerance": {
            "type": "object",
            "properties": {
                "rtol": {"type": "number", "exclusiveMinimum": 0},
                "atol": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "form": {"type": "object"},
        "x": {"type": "array"},
        "y": {"type": "array"},
        "omega_pair": {
            "type": "object",
            "required": ["omega", "Omega"],
            "properties": {"omega": _COMPLEX_SCHEMA, "Omega": _COMPLEX_SCHEMA},
            "additionalProperties": False,
        },
        "operator_pair": {
            "type": "object",
            "required": ["t", "s", "v"],
            "properties": {
                "t": _MATRIX_SCHEMA,
                "s": _MATRIX_SCHEMA,
                "v": _VECTOR_SCHEMA,
            },
            "additionalProperties": False,
        },
        "sequences": {
            "type": "object",
            "required": ["a_seq", "b_seq", "w_seq", "window"],
            "properties": {
                "a_seq": _REAL_SEQ_SCHEMA,
                "b_seq": _REAL_SEQ_SCHEMA,
                "w_seq": _REAL_SEQ_SCHEMA,
                "window": {
                    "type": "object",
                    "required": ["a", "A", "b", "B"],
                    "properties": {
                        "a": {"type": "number"},
                        "A": {"type": "number"},
                        "b": {"type": "number"},
                        "B": {"type": "number"},
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
    },
    "allOf": [
        {
            "if": {
                "properties": {"target": {"enum": sorted(_MATRIX_IDS | _FUNCTIONAL_IDS)}},
                "required": ["target"],
            },
            "then": {"required": ["form", "x", "y", "omega_pair"]},
        },
        {
            "if": {
                "properties": {"target": {"enum": sorted(_OPERATOR_IDS)}},
                "required": ["target"],
            },
            "then": {"required": ["operator_pair"]},
        },
        {
            "if": {
                "properties": {"target": {"enum": sorted(_SEQUENCE_IDS)}},
                "required": ["target"],
            },
            "then": {"required": ["sequences"]},
        },
    ],
}


class _UsageError(Exception):
    """Raised for exit-code-1 conditions; the message goes to stderr."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(v: float) -> str:
    return f"{v:.6e}"


def _encode_array(arr: np.ndarray) -> list:
    if arr.ndim == 1:
        return jsonio.encode_vector(arr)
    return jsonio.encode_matrix(arr)


def _resolve_tolerance(args: argparse.Namespace, file_tol: Optional[dict] = None) -> Tolerance:
    rtol = DEFAULT_TOL.rtol
    atol = DEFAULT_TOL.atol
    for env_name, current in ((ENV_RTOL, "rtol"), (ENV_ATOL, "atol")):
        raw = os.environ.get(env_name)
        if raw is None:
            continue
        try:
            value = float(raw)
        except ValueError as exc:
            raise _UsageError(f"{env_name}={raw!r} is not a number") from exc
        if value <= 0:
            raise _UsageError(f"{env_name} must be positive")
        if env_name == ENV_RTOL:
            rtol = value
        else:
            atol = value
    if file_tol:
        rtol = float(file_tol.get("rtol", rtol))
        atol = float(file_tol.get("atol", atol))
    if args.tol_rtol is not None:
        rtol = args.tol_rtol
    if args.tol_atol is not None:
        atol = args.tol_atol
    if rtol <= 0 or atol <= 0:
        raise _UsageError("tolerances must be positive")
    return Tolerance(rtol=rtol, atol=atol)


def _print_report(report: BoundReport, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_dict()))
        return
    print(f"inequality: {report.inequality_id}")
    print(f"verdict:    {report.verdict}")
    for side, value in (("lhs", report.lhs), ("rhs", report.rhs)):
        if isinstance(value, np.ndarray):
            rendered = np.array2string(value, precision=6, suppress_small=False)
            print(f"{side}:")
            for line in rendered.splitlines():
                print(f"  {line}")
        else:
            print(f"{side}:        {_fmt(float(value))}")
    print(f"margin:     {_fmt(report.margin)}")
    if report.preconditions:
        print("preconditions:")
        for check in report.preconditions:
            state = "pass" if check.passed else "FAIL"
            print(f"  {check.name}: {state} ({_fmt(float(check.value))})")
    scalars = {
        k: v
        for k, v in report.details.items()
        if isinstance(v, (int, float, complex)) and not isinstance(v, bool)
    }
    if scalars:
        print("details:")
        for key, value in scalars.items():
            if isinstance(value, complex):
                print(f"  {key}: {value.real:.6e}{value.imag:+.6e}j")
            elif isinstance(value, int):
                print(f"  {key}: {value}")
            else:
                print(f"  {key}: {_fmt(float(value))}")


def _exit_code(verdict: str) -> int:
    if verdict == HOLDS:
        return 0
    if verdict == VIOLATED:
        return 2
    return 3


def _decode_argument(node, path: str) -> np.ndarray:
    """Vector or matrix argument: nesting depth decides."""
    if not isinstance(node, list) or not node:
        raise ValueError(f"{path}: expected a nonempty array")
    head = node[0]
    if isinstance(head, list) and head and isinstance(head[0], list):
        return jsonio.decode_matrix(node, path)
    return jsonio.decode_vector(node, path)


def _decode_pair(node: dict, path: str) -> OmegaPair:
    return OmegaPair(
        omega=jsonio.decode_complex(node["omega"], f"{path}.omega"),
        Omega=jsonio.decode_complex(node["Omega"], f"{path}.Omega"),
    )


def _load_instance(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: JSON parse error: {exc}") from exc
    validator = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)
    errors = sorted(
        validator.iter_errors(doc), key=lambda e: (len(list(e.absolute_path)), e.json_path)
    )
    if errors:
        first = errors[0]
        raise _UsageError(f"{path}: {first.json_path}: {first.message}")
    return doc


def _report_from_instance(doc: dict, tol: Tolerance) -> BoundReport:
    target = doc["target"]
    if target in _MATRIX_IDS or target in _FUNCTIONAL_IDS:
        form = FormInstance.from_dict(doc["form"], "$.form")
        x = _decode_argument(doc["x"], "$.x")
        y = _decode_argument(doc["y"], "$.y")
        pair = _decode_pair(doc["omega_pair"], "$.omega_pair")
        if target == ADD_MATRIX:
            return additive_matrix_bound(form, x, y, pair, tol)
        if target == MULT_MATRIX:
            return multiplicative_matrix_bound(form, x, y, pair, tol)
        if form.kind != "functional_form":
            raise ValueError(f"$.form.kind: target {target} needs a functional_form")
        phi = form.functional
        if target == ADD_FUNCTIONAL:
            return functional_additive_bound(phi, x, y, pair, tol)
        return functional_multiplicative_bound(phi, x, y, pair, tol)
    if target in _OPERATOR_IDS:
        op = doc["operator_pair"]
        t = jsonio.decode_matrix(op["t"], "$.operator_pair.t")
        s = jsonio.decode_matrix(op["s"], "$.operator_pair.s")
        v = jsonio.decode_vector(op["v"], "$.operator_pair.v")
        result = operator_pair_bounds(t, s, v, tol)
        return result.additive if target == OP_PAIR_ADD else result.multiplicative
    data = WeightedSequences.from_dict(doc["sequences"], "$.sequences")
    if target == INT_ADD:
        return integral_bounds(data, tol).additive
    if target == INT_MULT:
        return integral_bounds(data, tol).multiplicative
    if target == GREUB_RHEINBOLDT:
        return greub_rheinboldt(data, tol)
    if target == WEIGHTED_ADD:
        return weighted_additive(data, tol)
    if target == PS_MULT:
        return polya_szego_multiplicative(data, tol)
    if target == PS_ADD:
        return polya_szego_additive(data, tol)
    return polya_szego_improved(data, tol).report


def cmd_verify(args: argparse.Namespace) -> int:
    doc = _load_instance(args.file)
    tol = _resolve_tolerance(args, doc.get("tolerance"))
    try:
        report = _report_from_instance(doc, tol)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    except NonPositiveReOmegaError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    except WindowViolationError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    _print_report(report, args.json)
    return _exit_code(report.verdict)


def _print_summary(summary: FuzzSummary, as_json: bool) -> None:
    if as_json:
        print(json.dumps(summary.to_dict()))
        return
    print(f"inequality:          {summary.inequality_id}")
    print(f"seed:                {summary.seed}")
    print(f"trials run:          {summary.trials_run}")
    print(f"holds:               {summary.holds}")
    print(f"violated:            {summary.violated}")
    print(f"precondition failed: {summary.precondition_failed}")
    if summary.worst_margin is not None:
        print(f"worst margin:        {_fmt(summary.worst_margin)} (trial {summary.worst_seed})")


def cmd_fuzz(args: argparse.Namespace) -> int:
    if args.inequality_id not in INEQUALITY_IDS:
        known = ", ".join(sorted(INEQUALITY_IDS))
        raise _UsageError(f"unknown inequality id {args.inequality_id!r}; known: {known}")
    try:
        config = GeneratorConfig(
            seed=args.seed,
            trials=args.trials,
            dims=tuple(args.dims) if args.dims else GeneratorConfig.dims,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if args.replay is not None:
        report = run_trial(config, args.inequality_id, args.replay)
        _print_report(report, args.json)
        return _exit_code(report.verdict)
    summary = fuzz_run(config, args.inequality_id)
    _print_summary(summary, args.json)
    return 0 if summary.violated == 0 else 2


def _sharpness_inputs(
    kind: str, dim: int, seed: int
) -> tuple[PositiveFunctional, np.ndarray]:
    g = stream(seed, 0)
    if kind == "vector_state":
        state = np.zeros(dim, dtype=np.complex128)
        state[0] = 1.0
        phi = PositiveFunctional.vector_state(state)
        y = g.standard_normal(dim) + 1j * g.standard_normal(dim)
        return phi, y
    if kind == "trace":
        phi = PositiveFunctional.trace(dim)
    else:
        phi = PositiveFunctional.weighted_sum(g.uniform(0.2, 2.0, size=dim))
    y = g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))
    return phi, y


def cmd_sharpness(args: argparse.Namespace) -> int:
    tol = _resolve_tolerance(args)
    pair = OmegaPair(omega=args.omega, Omega=getattr(args, "Omega"))
    phi, y = _sharpness_inputs(args.kind, args.dim, args.seed)
    try:
        result = sharpness_witness(phi, y, pair, tol)
    except DegenerateSpaceError as exc:
        print(f"degenerate instance: {exc}", file=sys.stderr)
        return 2
    ratio = result.ratio
    degenerate = not math.isfinite(ratio)
    deviation = None if degenerate else abs(ratio - SHARPNESS_TARGET)
    if args.json:
        payload = {
            "omega": jsonio.encode_complex(pair.omega),
            "Omega": jsonio.encode_complex(pair.Omega),
            "kind": args.kind,
            "dim": args.dim,
            "seed": args.seed,
            "ratio": None if degenerate else ratio,
            "deviation": deviation,
            "x": _encode_array(result.x),
            "z": _encode_array(result.z),
            "report": result.report.to_dict(),
        }
        print(json.dumps(payload))
    else:
        if degenerate:
            print("degenerate window: omega == Omega, ratio undefined")
        else:
            print(f"ratio:     {ratio!r}")
            print(f"deviation: {_fmt(deviation)} (target {SHARPNESS_TARGET})")
        print(f"witness x: {np.array2string(result.x, precision=6)}")
        print(f"witness z: {np.array2string(result.z, precision=6)}")
    if degenerate:
        return 2
    return 0 if deviation <= SHARPNESS_TOL else 2


def _compare_rows(args: argparse.Namespace):
    """Rows for the constant-comparison study, ordered by trial index.

    Random windows first (one Philox stream per sample index), then the
    three constructed families, so the output is reproducible and
    schedule-independent.
    """
    n = args.n
    for i in range(args.samples):
        g = stream(args.seed, i)
        window = sample_window(g, (0.1, 10.0))
        data = gen_bounded_sequences(n, window, g)
        yield replace(data, w_seq=np.ones(n))
    for _, family in gen_argmin_families(max(2, n)):
        yield family


def cmd_compare(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise _UsageError("--n must be at least 1")
    if args.samples < 0:
        raise _UsageError("--samples must be nonnegative")
    tol = _resolve_tolerance(args)
    counts = {1: 0, 2: 0, 3: 0}
    rows = []
    for data in _compare_rows(args):
        result = polya_szego_improved(data, tol)
        counts[result.argmin] += 1
        win = data.window
        rows.append(
            (
                win.a,
                win.A,
                win.b,
                win.B,
                result.constants[0],
                result.constants[1],
                result.constants[2],
                result.argmin,
                result.report.lhs,
                result.report.margin,
                abs(result.equality_lhs - result.equality_rhs),
            )
        )
    if args.csv is not None:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_HEADER)
                for row in rows:
                    writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        except OSError as exc:
            raise _UsageError(f"cannot write {args.csv}: {exc}") from exc
    if args.json:
        payload = {
            "samples": len(rows),
            "random_samples": args.samples,
            "constructed_families": len(rows) - args.samples,
            "argmin_counts": {str(k): v for k, v in counts.items()},
            "csv": args.csv,
        }
        print(json.dumps(payload))
    else:
        print(f"samples: {len(rows)} ({args.samples} random + {len(rows) - args.samples} constructed)")
        print(
            "argmin counts: "
            f"first={counts[1]} second={counts[2]} third={counts[3]}"
        )
        if args.csv is not None:
            print(f"csv written: {args.csv}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    parser.add_argument(
        "--tol-rtol", type=float, default=None, metavar="R", help="relative tolerance override"
    )
    parser.add_argument(
        "--tol-atol", type=float, default=None, metavar="A", help="absolute tolerance override"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rcsbounds",
        description="Evaluate reverse Cauchy-Schwarz bounds and their hypotheses.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p_verify = sub.add_parser("verify", help="check one instance file")
    p_verify.add_argument("file", help="instance JSON path")
    _add_common_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_fuzz = sub.add_parser("fuzz", help="randomized campaign for one inequality")
    p_fuzz.add_argument("inequality_id", help="inequality to fuzz")
    p_fuzz.add_argument("--trials", type=int, default=1000, help="number of trials")
    p_fuzz.add_argument(
        "--dims", type=int, nargs="+", default=None, metavar="D", help="matrix dimensions"
    )
    p_fuzz.add_argument(
        "--replay", type=int, default=None, metavar="TRIAL", help="re-run one trial index"
    )
    _add_common_flags(p_fuzz)
    p_fuzz.set_defaults(func=cmd_fuzz)

    p_sharp = sub.add_parser("sharpness", help="demonstrate the 1/4 constant")
    p_sharp.add_argument("--omega", type=complex, default=complex(1.0), help="lower window value")
    p_sharp.add_argument("--Omega", type=complex, default=complex(3.0), help="upper window value")
    p_sharp.add_argument("--dim", type=int, default=2, help="carrier dimension")
    p_sharp.add_argument(
        "--kind",
        choices=("vector_state", "trace", "weighted_sum"),
        default="vector_state",
        help="positive functional used for the witness",
    )
    _add_common_flags(p_sharp)
    p_sharp.set_defaults(func=cmd_sharpness)

    p_cmp = sub.add_parser("compare", help="constant-selection study for the refined bound")
    p_cmp.add_argument("--n", type=int, default=8, help="sequence length per sample")
    p_cmp.add_argument("--samples", type=int, default=10000, help="random window count")
    p_cmp.add_argument("--csv", default=None, metavar="PATH", help="write per-sample rows here")
    _add_common_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"rcsbounds: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
