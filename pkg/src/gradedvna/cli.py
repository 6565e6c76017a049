"""Command-line interface: ``gradedvna {report,tensor,verify,table,presets}``.

Exit status: 0 success, 1 a verification failed, 2 bad usage or input,
3 numerical inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .algebra import DEFAULT_SEED, TypeReport, center, factor_decomposition
from .errors import (
    GradedVNAError,
    InputError,
    InternalLimitError,
    InvariantViolationError,
    NumericalInconsistencyError,
)
from .graded import GradedAlgebra, _even_center, _odd_center, balance_certificate, is_central
from .linalg import set_tolerances
from .presets import PRESET_HELP, build_preset, load_algebra
from .tensor import graded_tensor, ordinary_tensor

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class _Input(argparse.Action):
    """Collect presets and file paths into one ordered list."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = getattr(namespace, "inputs", None) or []
        kind = "preset" if option_string else "file"
        for v in values if isinstance(values, list) else [values]:
            items.append((kind, v))
        namespace.inputs = items


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("files", nargs="*", action=_Input, metavar="FILE", help="algebra document (JSON)")
    p.add_argument("--preset", action=_Input, metavar="SPEC", help="preset such as sp:2 or mf:2,1")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED, help="random seed (default 0xC1F0)")
    p.add_argument("--tol-eq", type=float, help="equality tolerance (default 1e-8)")
    p.add_argument("--tol-rank", type=float, help="rank tolerance (default 1e-9)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedvna",
        description="Classify finite-dimensional graded von Neumann algebras and their graded tensor products.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("report", help="type, central and balanced flags, center dimensions")
    _add_inputs(p)
    _add_common(p)

    p = sub.add_parser("tensor", help="graded and ordinary tensor product of two algebras")
    _add_inputs(p)
    _add_common(p)

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--case", action="append", metavar="ID", help="only cases whose id starts with ID")
    _add_common(p)

    p = sub.add_parser("table", help="type multiplication table for graded tensor products")
    p.add_argument("--witness", action="store_true", help="add computed examples for small m, n")
    _add_common(p)

    p = sub.add_parser(
        "presets", help="list preset syntax", formatter_class=argparse.RawDescriptionHelpFormatter,
        description=PRESET_HELP,
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    return parser


# ---------------------------------------------------------------------------


def _load(kind: str, value: str) -> tuple[str, GradedAlgebra]:
    if kind == "preset":
        return value, build_preset(value)
    return value, load_algebra(value)


def _inputs(args, parser, count: int) -> list[tuple[str, GradedAlgebra]]:
    items = getattr(args, "inputs", None) or []
    if len(items) != count:
        parser.error(f"{args.command} takes exactly {count} algebra(s), got {len(items)}")
    return [_load(k, v) for k, v in items]


def _flags(g: GradedAlgebra, seed: int) -> dict:
    rep = factor_decomposition(g.alg, seed)
    cert = balance_certificate(g, seed)
    return {
        "type": rep.type_label,
        "summands": [[n, m] for n, m in rep.profile],
        "factor": rep.is_factor,
        "central": is_central(g),
        "balanced": cert.balanced,
        "algebra_dim": g.alg.dim,
        "hilbert_dim": g.hilbert_dim,
        "center_dim": center(g.alg).dim,
        "even_center_dim": _even_center(g).dim,
        "odd_center_dim": _odd_center(g).dim,
    }


def _describe(f: dict) -> str:
    words = [f"type {f['type']}"]
    words.append("central" if f["central"] else "not central")
    words.append("balanced" if f["balanced"] else "not balanced")
    words.append("a factor" if f["factor"] else "not a factor")
    return ", ".join(words)


def _type_dict(rep: TypeReport) -> dict:
    return {
        "type": rep.type_label,
        "summands": [[n, m] for n, m in rep.profile],
        "factor": rep.is_factor,
        "algebra_dim": rep.algebra_dim,
    }


def cmd_report(args, parser, out) -> int:
    (name, g), = _inputs(args, parser, 1)
    f = _flags(g, args.seed)
    if args.json:
        out.write(json.dumps({"input": name, **f}, sort_keys=True, ensure_ascii=False) + "\n")
        return EXIT_OK
    out.write(f"{name}: {_describe(f)}\n")
    out.write(
        f"  algebra dim {f['algebra_dim']} on C^{f['hilbert_dim']}; "
        f"center dim {f['center_dim']} (even {f['even_center_dim']}, odd {f['odd_center_dim']})\n"
    )
    return EXIT_OK


def _central_nonfactor_block(g: GradedAlgebra, seed: int) -> int | None:
    rep = factor_decomposition(g.alg, seed)
    sizes = set(rep.block_sizes)
    if rep.is_factor or not is_central(g) or len(sizes) != 1:
        return None
    return sizes.pop()


def cmd_tensor(args, parser, out) -> int:
    (n1, g1), (n2, g2) = _inputs(args, parser, 2)
    seed = args.seed
    graded = factor_decomposition(graded_tensor(g1, g2).result.alg, seed)
    ordinary = factor_decomposition(ordinary_tensor(g1, g2), seed)
    m, n = _central_nonfactor_block(g1, seed), _central_nonfactor_block(g2, seed)
    note = None
    if m is not None and n is not None:
        note = {"m": m, "n": n, "index": 2 * m * n, "holds": set(graded.block_sizes) == {2 * m * n}}
    if args.json:
        doc = {"inputs": [n1, n2], "graded": _type_dict(graded), "ordinary": _type_dict(ordinary)}
        if note:
            doc["doubling"] = note
        out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        return EXIT_OK
    fac = lambda r: "factor" if r.is_factor else "not a factor"  # noqa: E731
    out.write(f"{n1} ⊗̂ {n2}\n")
    out.write(f"  graded:   {graded.type_label}, {fac(graded)}\n")
    out.write(f"  ordinary: {ordinary.type_label}, {fac(ordinary)}\n")
    if note:
        status = "" if note["holds"] else "  (VIOLATED)"
        out.write(f"  2mn rule: 2·{m}·{n} = {2 * m * n}{status}\n")
    return EXIT_OK


def cmd_verify(args, parser, out) -> int:
    from .verify import run_suite

    report = run_suite(args.seed, args.case)
    if args.json:
        out.write(json.dumps(report.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
    else:
        for c in sorted(report.cases, key=lambda c: c.case_id):
            status = "PASS" if c.passed else "FAIL"
            extra = f", {c.skipped} not applicable" if c.skipped else ""
            out.write(
                f"{status}  {c.case_id:28s} {c.checks:4d} checks{extra}, max residual {c.max_residual:.1e}\n"
                f"      {c.anchor}\n"
            )
            for msg in c.failures[:5]:
                out.write(f"      ! {msg}\n")
        out.write("all passed\n" if report.passed else "FAILURES\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


OUT_OF_SCOPE = "out of scope (infinite-dimensional)"
COLUMNS = ("I_n (n finite)", "I_n (n infinite)", "II_1", "II_inf", "III")


def _table_rows() -> list[dict]:
    rows = []
    regimes = (
        ("factor", "R1 a type I_m factor, (R2, Γ2) central and balanced", "I_mn"),
        ("central-nonfactor", "both central and not factors", "I_2mn"),
    )
    for key, hyp, cell in regimes:
        for row in ("I_m (m finite)", "I_m (m infinite)"):
            finite = row.startswith("I_m (m finite)")
            cells = {c: OUT_OF_SCOPE for c in COLUMNS}
            if finite:
                cells[COLUMNS[0]] = cell
            rows.append({"regime": key, "hypotheses": hyp, "row": row, "cells": cells})
    return rows


def _witnesses(seed: int) -> list[dict]:
    out = []
    for p, n in ((1, 1), (1, 2), (2, 1), (2, 2)):
        g1, g2 = build_preset(f"mf:{p},{p}"), build_preset(f"sp:{n}")
        rep = factor_decomposition(graded_tensor(g1, g2).result.alg, seed)
        out.append({"regime": "factor", "inputs": [f"mf:{p},{p}", f"sp:{n}"], "m": 2 * p, "n": n,
                    "expected": f"I_{2 * p * n}", "type": rep.type_label})
    for m, n in ((1, 1), (2, 1), (2, 2), (2, 3)):
        rep = factor_decomposition(graded_tensor(build_preset(f"sp:{m}"), build_preset(f"sp:{n}")).result.alg, seed)
        out.append({"regime": "central-nonfactor", "inputs": [f"sp:{m}", f"sp:{n}"], "m": m, "n": n,
                    "expected": f"I_{2 * m * n}", "type": rep.type_label})
    return out


def cmd_table(args, parser, out) -> int:
    rows = _table_rows()
    wit = _witnesses(args.seed) if args.witness else None
    ok = True
    if wit:
        ok = all(set(w["type"].split(" ⊕ ")) == {w["expected"]} for w in wit)
    if args.json:
        doc = {"columns": list(COLUMNS), "rows": rows}
        if wit is not None:
            doc["witnesses"] = wit
        out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        return EXIT_OK if ok else EXIT_VERIFY
    for key, hyp in (("factor", rows[0]["hypotheses"]), ("central-nonfactor", rows[2]["hypotheses"])):
        out.write(f"[{key}] {hyp}\n")
        for r in rows:
            if r["regime"] == key:
                for c in COLUMNS:
                    out.write(f"  {r['row']:16s} ⊗̂ {c:16s} -> {r['cells'][c]}\n")
        out.write("\n")
    if wit:
        out.write("computed examples\n")
        for w in wit:
            out.write(f"  {w['inputs'][0]} ⊗̂ {w['inputs'][1]}: {w['type']} (m={w['m']}, n={w['n']}, expected {w['expected']})\n")
    return EXIT_OK if ok else EXIT_VERIFY


PRESET_PROFILES = (
    ("mf:p,q", "type I_{p+q} factor, central, balanced iff p = q"),
    ("sp:n", "type I_n, two summands, central, balanced, not a factor"),
    ("clifford:k", "type I_{2^⌊k/2⌋}, factor iff k even, central, balanced"),
    ("diag:d[,cycles]", "commutative, d summands of size 1; central iff the involution has one orbit"),
    ("trivial:<preset>", "same algebra as <preset> with Γ = I; never balanced"),
)


def cmd_presets(args, parser, out) -> int:
    if args.json:
        doc = [{"syntax": s, "profile": p} for s, p in PRESET_PROFILES]
        out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        return EXIT_OK
    out.write(PRESET_HELP + "\n\n")
    for s, p in PRESET_PROFILES:
        out.write(f"  {s:18s}{p}\n")
    return EXIT_OK


COMMANDS = {
    "report": cmd_report,
    "tensor": cmd_tensor,
    "verify": cmd_verify,
    "table": cmd_table,
    "presets": cmd_presets,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {}
    if getattr(args, "tol_eq", None) is not None:
        overrides["eq"] = args.tol_eq
    if getattr(args, "tol_rank", None) is not None:
        overrides["rank"] = args.tol_rank
    previous = set_tolerances(**overrides) if overrides else None
    try:
        return COMMANDS[args.command](args, parser, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (NumericalInconsistencyError, InternalLimitError) as exc:
        print(f"gradedvna: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvariantViolationError as exc:
        print(f"gradedvna: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except InputError as exc:
        print(f"gradedvna: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GradedVNAError as exc:
        print(f"gradedvna: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    finally:
        if previous is not None:
            set_tolerances(**{"eq": previous.eq, "rank": previous.rank})


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
