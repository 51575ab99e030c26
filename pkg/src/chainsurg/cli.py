"""Batch front-end: validate codes, run merges and analyses, synthesize
plans, and verify them by simulation.

Exit codes: 0 success, 1 domain error (JSON payload on stderr), 2 usage
error. All output is deterministic for fixed inputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .chaincomplex import ChainComplex, homology
from .csscode import CssCode, PauliOperator, distance_bruteforce, from_parity_checks
from .errors import ChainsurgError
from .f2linalg import F2Matrix
from .protocols import (
    AncillaStrategy,
    MergeStep,
    build_cnot_plan,
    code_switch_plan,
    expected_plan_channel,
    measurement_correction,
    plan_channel,
    plan_from_json,
    plan_symplectic_action,
    plan_to_json,
    propagate_pauli,
)
from .simverify import PHASE_TOL
from .surgery import (
    Subcode,
    analyze_merge,
    induced_logical_matrix,
    merge_report_json,
    quotient_merge,
)

REPORT_SCHEMA = "chainsurg-report/1"


def _load_code(path: str) -> CssCode:
    return CssCode.from_text(Path(path).read_text())


def _load_subcode(path: str, parent: ChainComplex) -> Subcode:
    return Subcode.from_text(Path(path).read_text(), parent)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        payload = {"schema": REPORT_SCHEMA, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _cmd_validate(args) -> int:
    code = _load_code(args.code)
    _emit(
        args,
        {"type": "validate", "n": code.n, "k": code.k, "d": code.d},
        f"valid CSS code {code.params()}",
    )
    return 0


def _cmd_homology(args) -> int:
    code = _load_code(args.code)
    h = homology(code.complex, args.degree)
    reps = [[int(b) for b in r] for r in h.representatives]
    _emit(
        args,
        {"type": "homology", "degree": args.degree, "dim": h.dim, "representatives": reps},
        f"H_{args.degree} dimension {h.dim}\n"
        + "\n".join("".join(str(b) for b in r) for r in reps),
    )
    return 0


def _merge_from_args(args):
    code = _load_code(args.code)
    sub = _load_subcode(args.subcode, code.complex)
    return code, sub, quotient_merge(code.complex, sub)


def _cmd_merge(args) -> int:
    code, sub, merge = _merge_from_args(args)
    report = analyze_merge(merge)
    if args.out:
        merged = merge.merged_complex()
        out_code = from_parity_checks(merged.d1, merged.d2.T)
        Path(args.out).write_text(out_code.to_text())
    if args.json:
        print(merge_report_json(merge, report))
        return 0
    lines = [
        f"merged code: degree-1 dim {merge.quotient.dim1}"
        f" (from {merge.source.dim1}), orientation {merge.orientation}",
    ]
    if args.analyze:
        lines.append(_analysis_text(report))
    print("\n".join(lines))
    return 0


def _analysis_text(report) -> str:
    dims = ", ".join(f"{k} = {v}" for k, v in report.dims_label().items())
    flags = []
    if report.surjective_guaranteed:
        flags.append("surjective")
    if report.injective_guaranteed:
        flags.append("injective")
    lines = [
        f"subcode homology: {dims}",
        f"guaranteed flags: {', '.join(flags) if flags else 'none (inspect the matrix)'}",
        f"induced matrix rank facts: surjective={report.matrix_surjective}"
        f" injective={report.matrix_injective}",
        f"killed classes ({report.killed_count}): {report.killed_coords.to_lists()}",
        f"created classes ({report.created_count}): {report.created_coords.to_lists()}",
    ]
    return "\n".join(lines)


def _cmd_analyze(args) -> int:
    code, sub, merge = _merge_from_args(args)
    report = analyze_merge(merge)
    if args.json:
        print(merge_report_json(merge, report))
    else:
        print(_analysis_text(report))
    return 0


def _cmd_logical_map(args) -> int:
    code, sub, merge = _merge_from_args(args)
    src = homology(merge.source, 1)
    tgt = homology(merge.quotient, 1)
    mat = induced_logical_matrix(merge, src, tgt)
    _emit(
        args,
        {"type": "logical-map", "matrix": mat.to_lists()},
        "\n".join("".join(str(b) for b in row) for row in mat.to_lists()),
    )
    return 0


def _parse_ancilla(spec: str) -> AncillaStrategy:
    if spec == "trivial":
        return AncillaStrategy.trivial()
    if spec.startswith("embedded:"):
        return AncillaStrategy.embedded(int(spec.split(":", 1)[1]))
    return AncillaStrategy.provided(_load_code(spec))


def _cmd_cnot(args) -> int:
    code = _load_code(args.code)
    target = None if args.target is None else args.target
    plan = build_cnot_plan(
        code,
        control=args.control,
        target=target,
        ancilla=_parse_ancilla(args.ancilla),
        locality=args.locality,
        max_weight=args.max_weight,
    )
    payload = {
        "type": "cnot-plan",
        "steps": [type(s).__name__ for s in plan.steps],
        "measurements": plan.measurement_ids(),
        "base_n": plan.base_code.n,
    }
    lines = [
        f"plan with {len(plan.steps)} steps on {plan.base_code.n} qubits;"
        f" measurements: {', '.join(plan.measurement_ids())}"
    ]
    if args.simulate:
        ch = plan_channel(plan)
        exp = expected_plan_channel(plan)
        exp = exp / np.max(np.abs(exp))
        dev = float(np.max(np.abs(ch - exp)))
        payload["max_deviation"] = dev
        verdict = "=" if dev < PHASE_TOL else "!="
        lines.append(f"logical channel {verdict} CNOT (max deviation {dev:.2e})")
    if args.out:
        Path(args.out).write_text(plan_to_json(plan))
        lines.append(f"plan written to {args.out}")
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_switch(args) -> int:
    plan = code_switch_plan()
    merged = plan.snapshots[2]
    d = distance_bruteforce(merged)
    p1 = plan.steps[1].logical_matrix
    action = plan_symplectic_action(plan)
    identity_ok = (
        list(map(int, action["X0"][0])) == [1, 0]
        and list(map(int, action["Z0"][1])) == [1, 0]
    )
    payload = {
        "type": "code-switch",
        "merged": {"n": merged.n, "k": merged.k, "d": d},
        "p1_star": p1.to_lists(),
        "round_trip_identity": identity_ok,
    }
    human = (
        f"merged code [[{merged.n},{merged.k},{d}]]; induced map {p1.to_lists()};"
        f" round-trip logical map {'= identity' if identity_ok else 'NOT identity'}"
    )
    if args.out:
        Path(args.out).write_text(plan_to_json(plan))
    _emit(args, payload, human)
    return 0


def _cmd_simulate(args) -> int:
    if args.plan:
        plan = plan_from_json(Path(args.plan).read_text())
    else:
        if args.code is None or args.control is None:
            raise ChainsurgError("simulate needs either --plan or a code with --control")
        code = _load_code(args.code)
        target = None if args.target is None else args.target
        plan = build_cnot_plan(
            code,
            control=args.control,
            target=target,
            ancilla=_parse_ancilla(args.ancilla),
        )
    outcomes = {}
    for spec in args.outcome or []:
        name, _, val = spec.partition("=")
        outcomes[name] = int(val)
    ch = plan_channel(plan, outcomes or None, corrected=not args.no_corrections)
    exp = expected_plan_channel(plan)
    exp = exp / np.max(np.abs(exp))
    dev = float(np.max(np.abs(ch - exp)))
    corrections = measurement_correction(
        plan, {**{m: 1 for m in plan.measurement_ids()}, **outcomes}
    )
    _emit(
        args,
        {
            "type": "simulate",
            "max_deviation": dev,
            "corrections": [c.label() for c in corrections],
            "channel": [[[float(v.real), float(v.imag)] for v in row] for row in ch],
        },
        f"max deviation from target channel: {dev:.2e};"
        f" corrections applied: {[c.label() for c in corrections] or 'none'}",
    )
    return 0


def _cmd_catalog(args) -> int:
    if args.action == "list":
        names = catalog.catalog_names() + [f"example:{n}" for n in catalog.example_names()]
        _emit(args, {"type": "catalog", "names": names}, "\n".join(names))
        return 0
    name = args.name
    if name is None:
        raise ChainsurgError("catalog export needs a name")
    if name.startswith("example:"):
        ex = catalog.worked_example(name.split(":", 1)[1])
        outdir = Path(args.dir or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        files = []
        # the scenario's parent code (the direct sum for two-code examples)
        parent_code = from_parity_checks(ex.parent.d1, ex.parent.d2.T)
        p = outdir / f"{ex.name}.code"
        p.write_text(parent_code.to_text())
        files.append(str(p))
        if len(ex.codes) > 1:
            for i, code in enumerate(ex.codes):
                p = outdir / f"{ex.name}.part{i}.code"
                p.write_text(code.to_text())
                files.append(str(p))
        if ex.subcode is not None:
            p = outdir / f"{ex.name}.sub"
            p.write_text(ex.subcode.to_text())
            files.append(str(p))
        elif ex.raw_spaces is not None:
            raw = Subcode(
                parent=ex.parent,
                v2=ex.raw_spaces[0],
                v1=ex.raw_spaces[1],
                v0=ex.raw_spaces[2],
                orientation=ex.raw_orientation,
            )
            p = outdir / f"{ex.name}.sub"
            p.write_text(raw.to_text())
            files.append(str(p))
        p = outdir / f"{ex.name}.expect.json"
        p.write_text(json.dumps(ex.expect, indent=2, sort_keys=True))
        files.append(str(p))
        _emit(args, {"type": "catalog-export", "files": files}, "\n".join(files))
        return 0
    code = catalog.catalog_code(name)
    text = code.to_text()
    if args.out:
        Path(args.out).write_text(text)
        _emit(args, {"type": "catalog-export", "files": [args.out]}, args.out)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_propagate(args) -> int:
    code = _load_code(args.code)
    sub = _load_subcode(args.subcode, code.complex)
    merge = quotient_merge(code.complex, sub)
    n = code.n
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for term in args.pauli.split():
        kind, idx = term[0].upper(), int(term[1:])
        if kind == "X":
            x[idx] ^= 1
        elif kind == "Z":
            z[idx] ^= 1
        elif kind == "Y":
            x[idx] ^= 1
            z[idx] ^= 1
        else:
            raise ChainsurgError(f"bad Pauli term {term!r}")
    step = MergeStep(
        merge=merge,
        orientation=sub.orientation,
        measurement_ids=tuple(f"m{i}" for i in range(sub.oriented_spaces()[1].dim)),
        pivot_qubits=merge.subcode.oriented_spaces()[1].pivots,
        logical_matrix=F2Matrix.zeros(0, 0),
        branch_inserts=(None,) * sub.oriented_spaces()[1].dim,
    )
    p = PauliOperator(x=x, z=z)
    out, flips = propagate_pauli(step, p)
    _emit(
        args,
        {
            "type": "propagate",
            "output": out.label(),
            "flips": sorted(flips),
        },
        f"transported: {out.label()}; flipped outcomes: {sorted(flips) or 'none'}",
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainsurg",
        description="CSS code surgery: exact homology, merges/splits, CNOT plans, simulation",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a code file")
    p.add_argument("code")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("homology", help="homology basis of a code")
    p.add_argument("code")
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("merge", help="quotient merge along a subcode")
    p.add_argument("code")
    p.add_argument("--subcode", required=True)
    p.add_argument("--analyze", action="store_true")
    p.add_argument("--out", help="write the merged code file")
    p.set_defaults(func=_cmd_merge)

    p = sub.add_parser("analyze", help="exact-sequence analysis of a merge")
    p.add_argument("code")
    p.add_argument("--subcode", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("logical-map", help="induced logical matrix of a merge")
    p.add_argument("code")
    p.add_argument("--subcode", required=True)
    p.set_defaults(func=_cmd_logical_map)

    p = sub.add_parser("cnot", help="synthesize a CNOT surgery plan")
    p.add_argument("code")
    p.add_argument("--control", type=int, required=True)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--ancilla", default="trivial", help="trivial | embedded:IDX | code file")
    p.add_argument("--locality", action="store_true")
    p.add_argument("--max-weight", type=int, default=2)
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--out", help="write the plan JSON")
    p.set_defaults(func=_cmd_cnot)

    p = sub.add_parser("switch", help="the 7-to-15-qubit code switch plan")
    p.add_argument("--out", help="write the plan JSON")
    p.set_defaults(func=_cmd_switch)

    p = sub.add_parser("simulate", help="simulate a surgery plan channel")
    p.add_argument("code", nargs="?")
    p.add_argument("--plan", help="consume a plan JSON file instead of synthesizing")
    p.add_argument("--control", type=int, default=None)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--ancilla", default="trivial")
    p.add_argument("--outcome", action="append", help="MEASID=-1 (repeatable)")
    p.add_argument("--no-corrections", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("catalog", help="list or export built-in codes and examples")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.add_argument("--dir")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("propagate", help="transport a Pauli through a merge")
    p.add_argument("code")
    p.add_argument("--subcode", required=True)
    p.add_argument("--pauli", required=True, help='e.g. "X0 Z3"')
    p.set_defaults(func=_cmd_propagate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChainsurgError as exc:
        sys.stderr.write(json.dumps(exc.payload()) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
