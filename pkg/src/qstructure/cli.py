"""Command-line interface.

Data goes to stdout, diagnostics to stderr. Exit status: 0 success, 1 domain
error or failed verification, 2 usage error (including a non-prime modulus).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fpfield import FieldError, check_prime
from .gates import (
    GateTable,
    check_restriction1,
    check_restriction2,
    enumerate_gate_classes,
    format_truth_table,
    gate_linear,
    gate_name,
    linear_index,
)
from .interrogation import (
    Scenario,
    load_scenario,
    builtin_scenario,
    run_scenario,
)
from .oarray import OrthogonalArray, combine_gates_to_oa, first_violation
from .pauli import (
    PauliLabel,
    is_orthonormal,
    matrix_to_json,
    mub_bases,
    unbiased_deviation,
)
from .structure import dof, find_commuting_families, partners_by_search, qm_cardinality, unique_partner


def prime(text: str) -> int:
    try:
        return check_prime(int(text))
    except (ValueError, FieldError):
        raise argparse.ArgumentTypeError(f"prime required, got {text!r}") from None


def _emit(args: argparse.Namespace, text: str, obj) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from None


# --- gates ------------------------------------------------------------------


def _gate_json(g: GateTable) -> dict:
    return {"name": gate_name(g), "index": linear_index(g), "table": [list(r) for r in g.table]}


def _parse_gate_file(text: str, p: int) -> list[GateTable]:
    blocks, cur = [], []
    for line in text.splitlines() + [""]:
        if line.strip():
            cur.append(line)
        elif cur:
            blocks.append("\n".join(cur))
            cur = []
    if not blocks:
        raise ValueError("no gate tables found")
    return [GateTable.from_text(b, p) for b in blocks]


def cmd_gates(args: argparse.Namespace) -> int:
    p = args.p
    if args.check:
        gates = _parse_gate_file(_read(args.check), p)
        r1 = [check_restriction1(g) for g in gates]
        r2 = {(i, j): check_restriction2(gates[i], gates[j]) for i in range(len(gates)) for j in range(i + 1, len(gates))}
        lines = [f"gate {i}: restriction1={'ok' if ok else 'fail'}" for i, ok in enumerate(r1)]
        lines += [f"gates {i},{j}: restriction2={'ok' if ok else 'fail'}" for (i, j), ok in r2.items()]
        obj = {
            "restriction1": r1,
            "restriction2": [{"pair": [i, j], "ok": ok} for (i, j), ok in r2.items()],
        }
        _emit(args, "\n".join(lines), obj)
        return 0 if all(r1) and all(r2.values()) else 1
    gates = [gate_linear(p, args.table)] if args.table is not None else list(enumerate_gate_classes(p))
    text = "\n".join(format_truth_table(g, gate_name(g)) for g in gates)
    _emit(args, text, {"p": p, "gates": [_gate_json(g) for g in gates]})
    return 0


# --- oa ---------------------------------------------------------------------


def cmd_oa(args: argparse.Namespace) -> int:
    if args.build is not None:
        oa = combine_gates_to_oa(enumerate_gate_classes(args.build))
        obj = {"levels": oa.levels, "strength": oa.strength, "rows": [list(r) for r in oa.data]}
        _emit(args, oa.to_csv(), obj)
        return 0
    path, s, t = args.verify
    oa = OrthogonalArray.from_csv(_read(path), levels=int(s), strength=int(t))
    bad = first_violation(oa)
    if bad is None:
        _emit(args, f"OK λ={oa.index}", {"ok": True, "index": oa.index})
        return 0
    obj = {"ok": False, "cols": list(bad.cols), "tuple": list(bad.tuple), "count": bad.count}
    _emit(args, f"FAIL {bad}", obj)
    return 1


# --- operators and structure -------------------------------------------------


def cmd_mub(args: argparse.Namespace) -> int:
    p = args.p
    bases = mub_bases(p)
    names = ["Z", "X"] + [str(PauliLabel(1, k, p)) for k in range(1, p)]
    dev = max(unbiased_deviation(a, b, p) for i, a in enumerate(bases) for b in bases[i + 1 :])
    lines = []
    for name, B in zip(names, bases):
        lines.append(f"basis {name}: orthonormal={'yes' if is_orthonormal(B) else 'no'}")
        for c in range(p):
            vec = " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in B[:, c])
            lines.append(f"  |{c}> {vec}")
    lines.append(f"max_deviation={dev:.3e}")
    obj = {
        "p": p,
        "bases": [{"label": n, "vectors": [matrix_to_json(B[:, c]) for c in range(p)]} for n, B in zip(names, bases)],
        "max_deviation": dev,
    }
    _emit(args, "\n".join(lines), obj)
    return 0


def cmd_families(args: argparse.Namespace) -> int:
    fams = find_commuting_families(args.p)
    if args.largest:
        fams = [f for f in fams if len(f) == max(map(len, fams))]
    text = "\n".join("; ".join(str(c) for c in f) for f in fams)
    obj = {
        "p": args.p,
        "families": [[{"a": str(c.a), "b": str(c.b), "k": c.k} for c in f] for f in fams],
    }
    _emit(args, text, obj)
    return 0


def cmd_partner(args: argparse.Namespace) -> int:
    p = args.p
    a, b, c, d = (PauliLabel.parse(s, p) for s in (args.a, args.b, args.c, args.d))
    n = unique_partner(a, b, args.m, c, d)
    found = partners_by_search(a, b, args.m % p, c, d)
    if found != [n.value]:
        raise ValueError(f"formula gives n={n.value} but the commutator search finds {found}")
    obj = {"a": str(a), "b": str(b), "m": args.m % p, "c": str(c), "d": str(d), "n": n.value}
    _emit(args, f"n={n.value}", obj)
    return 0


def cmd_dof(args: argparse.Namespace) -> int:
    q, f = qm_cardinality(args.p, args.bodies), dof(args.p, args.bodies)
    _emit(args, f"questions={q} dof={f}", {"p": args.p, "bodies": args.bodies, "questions": q, "dof": f})
    return 0


# --- scenarios --------------------------------------------------------------


def _render_trace(trace) -> str:
    lines = []
    for r in trace:
        if r.question is None:
            head = f"step {r.step}: initial"
        else:
            head = f"step {r.step}: ask {r.question} -> {r.outcome.value} (prob {r.probability:.6f})"
        lines.append(f"{head} system_info={r.info.system_info:g}")
        for q, v in r.info.per_question.items():
            lines.append(f"  info {q} = {v:.6f}")
        for q, c in r.derived:
            lines.append(f"  derived {q} -> {c.value}")
    return "\n".join(lines)


def cmd_scenario(args: argparse.Namespace) -> int:
    if args.action == "run":
        sc = load_scenario(_read(args.file))
    else:
        sc = builtin_scenario(args.which, args.m, args.n)
    if sc.seed is None:
        sc = Scenario(sc.modulus, sc.bodies, sc.steps, args.seed)
    trace = run_scenario(sc)
    _emit(args, _render_trace(trace), [r.to_dict() for r in trace])
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled outcomes (default 0)")

    ap = argparse.ArgumentParser(prog="qstructure", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gates", parents=[common], help="gate classes and truth tables")
    g.add_argument("--p", type=prime, required=True)
    mode = g.add_mutually_exclusive_group(required=True)
    mode.add_argument("--enumerate", action="store_true", help="one table per gate class")
    mode.add_argument("--table", type=int, metavar="I", help="the gate Q_a + I*Q_b")
    mode.add_argument("--check", metavar="FILE", help="check restrictions for tables in FILE")
    g.set_defaults(func=cmd_gates)

    o = sub.add_parser("oa", parents=[common], help="orthogonal arrays")
    mode = o.add_mutually_exclusive_group(required=True)
    mode.add_argument("--build", type=prime, metavar="P", help="the p^2 x (p+1) array")
    mode.add_argument("--verify", nargs=3, metavar=("FILE", "S", "T"), help="check strength T over S levels")
    o.set_defaults(func=cmd_oa)

    m = sub.add_parser("mub", parents=[common], help="mutually unbiased bases")
    m.add_argument("--p", type=prime, required=True)
    m.set_defaults(func=cmd_mub)

    f = sub.add_parser("families", parents=[common], help="maximal commuting composite families")
    f.add_argument("--p", type=prime, required=True)
    f.add_argument("--largest", action="store_true", help="only families of maximum size")
    f.set_defaults(func=cmd_families)

    pr = sub.add_parser("partner", parents=[common], help="unique commuting partner power")
    pr.add_argument("--p", type=prime, required=True)
    for name in ("a", "b"):
        pr.add_argument(f"--{name}", required=True)
    pr.add_argument("--m", type=int, required=True)
    for name in ("c", "d"):
        pr.add_argument(f"--{name}", required=True)
    pr.set_defaults(func=cmd_partner)

    d = sub.add_parser("dof", parents=[common], help="question count and density-matrix parameters")
    d.add_argument("--p", type=prime, required=True)
    d.add_argument("--bodies", type=int, default=1)
    d.set_defaults(func=cmd_dof)

    s = sub.add_parser("scenario", help="interrogation scenarios")
    ssub = s.add_subparsers(dest="action", required=True)
    run = ssub.add_parser("run", parents=[common], help="run a scenario file")
    run.add_argument("file")
    built = ssub.add_parser("builtin", aliases=["paper"], parents=[common], help="built-in worked examples")
    built.add_argument("--which", choices=("single5", "composite5", "bell2"), required=True)
    built.add_argument("--m", type=int, default=1)
    built.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_scenario)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
