"""Command line front end: ``kgraphkit <command> GRAPH [options]``.

GRAPH is a JSON graph-description file or the name of a corpus graph
(G1, G1e, G2, T2, C2, TWIST, P1_G1_11, ...).  Reports are JSON by default and
are byte-identical for identical arguments.  Exit codes: 0 success, 2 a
property violation was found (including an invalid graph), 1 an operational
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path as FsPath

import numpy as np

from . import corpus
from . import degree as deg
from .combos import GeneratorCombo, combo_from_json, from_turns
from .cycline import (
    cycline_bruteforce,
    cycline_report,
    enumerate_cycline,
    onegraph_cycline_oracle,
    per_group,
    source_matched_pairs,
)
from .errors import GraphFileError, InvalidKGraph, KGraphError, NonCyclineTerm
from .infinite import is_regular, onegraph_regular_oracle, parse_infinite
from .kgraph import check, load_graph, skeleton_from_dict
from .model import (
    build_basis,
    commutant_check,
    default_seeds,
    eval_Upsilon,
    eval_upsilon,
    find_kernel_pair,
    kernel_probe,
    op_Q,
    verify_CK,
)
from .pullback import p1_project
from .states import (
    collision_classes,
    compute_Hx,
    e_eval,
    panel,
    phi_eval,
    positivity_check,
    psi_eval,
    states_equiv_report,
)

SCHEMA = 1


class Violation(Exception):
    """A checked property failed; the report is still printed."""


# -- helpers -----------------------------------------------------------------------------------


def resolve_graph(ref: str):
    if os.path.exists(ref):
        return load_graph(ref)
    try:
        return corpus.get(ref)
    except KeyError:
        raise GraphFileError(f"{ref}: no such file or corpus graph") from None


def _json_arg(text: str):
    """Inline JSON, or ``@file`` / an existing path holding JSON."""
    if text.startswith("@"):
        text = FsPath(text[1:]).read_text(encoding="utf-8")
    elif os.path.exists(text):
        text = FsPath(text).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"bad JSON argument: {exc}") from None


def _parse_z(text: str, k: int):
    """Comma-separated unit complex numbers (``1,-1,1j``) or ``turns:1/8,0`` for exact roots of unity."""
    if text.startswith("turns:"):
        from fractions import Fraction

        turns = [Fraction(t) for t in text[6:].split(",")]
        if len(turns) == 1:
            turns = turns * k
        return from_turns(turns)
    vals = [complex(t.strip().replace("i", "j")) for t in text.split(",")]
    if len(vals) == 1:
        vals = vals * k
    if len(vals) != k:
        raise ValueError(f"--z needs {k} coordinates")
    for v in vals:
        if abs(abs(v) - 1) > 1e-12:
            raise ValueError(f"{v} is not on the unit circle")
    return tuple(vals)


def _num(v):
    v = complex(v)
    if v.imag == 0:
        return v.real
    return {"re": v.real, "im": v.imag}


def _pair(a, b):
    return [str(a), str(b)]


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        out[k] = v
    return out


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    else:
        lines.append(f"{pad}{json.dumps(obj, sort_keys=True)}")
    return "\n".join(lines)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "text":
        out.write(_text(report) + "\n")
    else:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


# -- commands -------------------------------------------------------------------------------------


def cmd_validate(args) -> dict:
    if os.path.exists(args.graph):
        try:
            data = json.loads(FsPath(args.graph).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise GraphFileError(str(exc)) from None
        if isinstance(data, dict) and "pullback" in data:
            g = load_graph(data)
            return {"valid": True, "violations": [], "k": g.k, "edges": len(g.edges)}
        sk = skeleton_from_dict(data)
        bad = check(sk)
        rep = {
            "valid": not bad,
            "violations": [{"kind": v.kind, "detail": v.detail, "items": list(v.items)} for v in bad],
            "k": sk.k,
            "edges": len(sk.edges),
        }
        if bad:
            raise Violation(rep)
        return rep
    g = resolve_graph(args.graph)
    return {"valid": True, "violations": [], "k": g.k, "edges": len(g.edges)}


def cmd_paths(args) -> dict:
    g = resolve_graph(args.graph)
    bound = deg.fit(args.bound, g.k)
    rows = []
    for p in g.paths_upto(bound):
        if args.vertex and p.rng != args.vertex:
            continue
        rows.append({"path": str(p), "degree": list(p.degree), "range": p.rng, "source": p.src})
    counts = {}
    for r in rows:
        key = ",".join(map(str, r["degree"]))
        counts[key] = counts.get(key, 0) + 1
    return {"paths": rows, "counts": counts}


def cmd_cycline(args) -> dict:
    g = resolve_graph(args.graph)
    bound = deg.fit(args.bound, g.k)
    depth = deg.fit(args.depth, g.k)
    rows, disagreements = [], []
    for a, b in source_matched_pairs(g, bound):
        rep = cycline_report(g, a, b)
        agrees = True
        # brute force can only refute, so it is consulted on positive verdicts
        if rep.decided and not args.skip_bruteforce and not cycline_bruteforce(g, a, b, depth):
            agrees = False
        if g.k == 1 and onegraph_cycline_oracle(g, a, b) != rep.decided:
            agrees = False
        if g.pullback is not None:
            E = g.pullback.base
            pa, pb = p1_project(g, a), p1_project(g, b)
            if pa.src == pb.src and onegraph_cycline_oracle(E, pa, pb) != rep.decided:
                agrees = False
        if not agrees:
            disagreements.append(_pair(a, b))
        if rep.decided:
            rows.append({"pair": _pair(a, b), "decided": True, "gfp_rounds": rep.gfp_rounds, "oracle_agrees": agrees})
    per = per_group(g, bound)
    report = {
        "bound": list(bound),
        "pairs_checked": len(source_matched_pairs(g, bound)),
        "cycline_pairs": rows,
        "nontrivial": sum(1 for r in rows if r["pair"][0] != r["pair"][1]),
        "oracle_disagreements": disagreements,
        "per": _per_json(per),
        "pullback_checked": g.pullback is not None,
    }
    if disagreements:
        raise Violation(report)
    return report


def _per_json(per) -> dict:
    return {
        "elements": [list(c) for c in sorted(per.elements)],
        "witnesses": {",".join(map(str, c)): _pair(*ab) for c, ab in sorted(per.witnesses.items())},
        "connected": per.connected,
        "closure_violations": [[list(a), list(b)] for a, b in per.closure_violations],
    }


def cmd_per(args) -> dict:
    g = resolve_graph(args.graph)
    per = per_group(g, deg.fit(args.bound, g.k))
    rep = {"bound": list(per.bound), **_per_json(per)}
    if per.closure_violations:
        raise Violation(rep)
    return rep


def cmd_regular(args) -> dict:
    g = resolve_graph(args.graph)
    x = parse_infinite(g, _json_arg(args.path))
    bound = None if args.bound is None else deg.fit(args.bound, g.k)
    v = is_regular(g, x, bound)
    rep = {
        "path": str(x),
        "canonical": x.to_json(),
        "status": v.status,
        "witnesses": [{"p": list(p), "q": list(q), "interior": i} for p, q, i in v.witnesses],
        "refutations": [{k: (list(val) if isinstance(val, tuple) else val) for k, val in d.items()} for d in v.details],
    }
    if g.k == 1:
        oracle = onegraph_regular_oracle(g, x)
        rep["oracle"] = oracle
        if (v.status == "Regular") != oracle or (v.status == "NotRegular") == oracle:
            raise Violation(rep)
    return rep


def _basis(g, args):
    if args.seeds:
        seeds = [parse_infinite(g, s) for s in _json_arg(args.seeds)]
    else:
        seeds = default_seeds(g, 2)
    return build_basis(g, seeds, prepend_bound=args.prepend_bound)


def cmd_model(args) -> dict:
    g = resolve_graph(args.graph)
    B = _basis(g, args)
    bound = deg.fit(args.bound, g.k)
    ck1, ck2, checked = [], [], 0
    for n in deg.box(deg.zero(g.k), bound):
        r = verify_CK(B, n)
        ck1 += r["ck1_violations"]
        ck2 += r["ck2_violations"]
        checked += r["ck1_checked_columns"]
    for v in ck1 + ck2:
        v["n"] = list(v["n"])
    rep = {
        "basis": [str(x) for x in B.members],
        "safe": len(B.safe),
        "rejected": B.rejected,
        "ck1_violations": ck1,
        "ck2_violations": ck2,
        "ck1_checked_columns": checked,
        "kernel_witness": None,
    }
    kp = find_kernel_pair(g, bound)
    if kp:
        rep["kernel_witness"] = kernel_probe(g, *kp, B)
        if args.export:
            c = GeneratorCombo.gen(g, *kp) - GeneratorCombo.P(g, kp[0])
            FsPath(args.export).write_text(eval_upsilon(c, B).coo_text(), encoding="utf-8")
    if ck1 or ck2 or (kp and not (rep["kernel_witness"]["upsilon_zero"] and rep["kernel_witness"]["separated"])):
        raise Violation(rep)
    return rep


def cmd_states(args) -> dict:
    g = resolve_graph(args.graph)
    x = parse_infinite(g, _json_arg(args.path))
    z = _parse_z(args.z, g.k)
    bound = deg.fit(args.bound, g.k)
    if args.combo:
        combos = [combo_from_json(g, c) for c in _json_arg(args.combo)]
    else:
        combos = panel(g, x, bound, seed=args.seed, extra=5)
    values = []
    for c in combos:
        try:
            e = _num(e_eval(g, z, x, c))
        except NonCyclineTerm as exc:
            e = f"NonCyclineTerm: {exc}"
        values.append({"combo": c.to_json(), "phi": _num(phi_eval(g, x, c)), "psi": _num(psi_eval(g, z, x, c)), "e": e})
    hx = {v: sorted(list(c) for c in compute_Hx(g, x, bound, v).diffs) for v in ("H", "Hc", "Hs")}
    rep = {"path": str(x), "z": [_num(zi) for zi in z], "values": values, "Hx": hx, "H_equal": hx["H"] == hx["Hc"] == hx["Hs"]}
    if not rep["H_equal"]:
        raise Violation(rep)
    return rep


def uniqueness_report(g, bound, prepend_bound, seed: int, tol: float, seeds=None) -> dict:
    """The end-to-end experiment behind the ``uniqueness`` command."""
    bound = deg.fit(bound, g.k)
    seeds = default_seeds(g, 2) if seeds is None else seeds
    B = build_basis(g, seeds, prepend_bound=prepend_bound)
    problems = []

    ck_total = 0
    for n in deg.box(deg.zero(g.k), bound):
        r = verify_CK(B, n, tol)
        ck_total += len(r["ck1_violations"]) + len(r["ck2_violations"])
    if ck_total:
        problems.append("CK relations violated")

    # distinct cylinders should give distinct projections
    paths = g.paths_upto(bound)
    Qs = {}
    for p in paths:
        key = tuple(op_Q(p, B).toarray().diagonal().real.round().astype(int).tolist())
        Qs.setdefault(key, []).append(p)
    from .cycline import cylinder_equal

    collisions = 0
    for group in Qs.values():
        for a in group[1:]:
            if not cylinder_equal(g, group[0], a):
                collisions += 1
    d_injective = collisions == 0

    cyc = [(a, b) for a, b in enumerate_cycline(g, bound) if a != b]
    probes = []
    for a, b in cyc[:8]:
        probes.append(kernel_probe(g, a, b, B, tol))
    kernel_nonempty = any(p["upsilon_zero"] and p["support_columns"] > 0 for p in probes)
    separates = all(p["separated"] for p in probes)
    if probes and not separates:
        problems.append("Upsilon failed to separate a kernel element")
    if any(not p["upsilon_zero"] for p in probes):
        problems.append("cycline collapse failed")

    x = B.members[min(B.safe)] if B.safe else B.members[0]
    hx = {v: sorted(compute_Hx(g, x, bound, v, basis=B).diffs) for v in ("H", "Hc", "Hs")}
    if not hx["H"] == hx["Hc"] == hx["Hs"]:
        problems.append("H_x variants differ")

    rng = np.random.default_rng(seed)
    grid = [from_turns([t / 4] * g.k) for t in range(4)]
    equiv = []
    for i, z1 in enumerate(grid):
        for z2 in grid[i:]:
            r = states_equiv_report(g, z1, z2, x, bound, tol, seed=int(rng.integers(1 << 30)))
            equiv.append(r.consistent)
    if not all(equiv):
        problems.append("state equivalence panel inconsistent")
    collisions = collision_classes(g, x, grid, bound, tol)

    comm = commutant_check(B, bound)
    if not comm["routes_agree"]:
        problems.append("commutant routes disagree")

    posit = []
    for _ in range(10):
        from .combos import random_combo

        c = random_combo(g, rng, deg.ones(g.k))
        posit.append(positivity_check(g, x, c, B, tol)["ok"])
    if not all(posit):
        problems.append("positivity check failed")

    summary = []
    summary.append("upsilon injective on D-span" if d_injective else "upsilon not injective on D-span (basis too small)")
    if cyc:
        summary.append("kernel nonempty" if kernel_nonempty else "no kernel element detected")
        summary.append("Upsilon separates all probed kernel elements" if separates else "Upsilon missed a kernel element")
        summary.append("injective-on-M shadow holds" if separates else "injective-on-M shadow fails")
    else:
        summary.append("M-span = D-span within bound (no nontrivial cycline pair)")

    return {
        "basis_size": len(B),
        "safe_size": len(B.safe),
        "seeds": [str(s) for s in seeds],
        "ck_violations": ck_total,
        "d_injective": d_injective,
        "cycline_nontrivial": len(cyc),
        "kernel_probes": probes,
        "kernel_nonempty": kernel_nonempty,
        "Upsilon_separates": separates,
        "aperiodic_branch": not cyc,
        "state_point": str(x),
        "Hx": {k: [list(c) for c in v] for k, v in hx.items()},
        "equiv_panel_consistent": all(equiv),
        "psi_collision_classes": collisions,
        "positivity_ok": all(posit),
        "commutant": {k: comm[k] for k in ("diagonal", "commutant_dim", "numeric_dim", "routes_agree")},
        "summary": summary,
        "problems": problems,
    }


def cmd_uniqueness(args) -> dict:
    g = resolve_graph(args.graph)
    rep = uniqueness_report(g, args.bound, args.prepend_bound, args.seed, args.tol)
    if rep["problems"]:
        raise Violation(rep)
    return rep


# -- argument parsing ------------------------------------------------------------------------------


def _common(bound_default="2") -> argparse.ArgumentParser:
    # a fresh parent per command: argparse shares parent actions between subparsers
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph", help="graph JSON file or corpus name")
    common.add_argument("--bound", default=bound_default, help="degree bound, e.g. 2 or 2,1")
    common.add_argument("--depth", default="6", help="brute-force depth (default 6)")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgraphkit", description="Finite higher-rank graph toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[_common()], help="check the k-graph axioms").set_defaults(func=cmd_validate)

    sp_paths = sub.add_parser("paths", parents=[_common()], help="enumerate paths up to --bound")
    sp_paths.add_argument("--vertex")
    sp_paths.set_defaults(func=cmd_paths)

    sp_cyc = sub.add_parser("cycline", parents=[_common()], help="cycline pairs with oracle cross-checks")
    sp_cyc.add_argument("--skip-bruteforce", action="store_true")
    sp_cyc.set_defaults(func=cmd_cycline)

    sub.add_parser("per", parents=[_common()], help="degree differences of cycline pairs").set_defaults(func=cmd_per)

    sp_reg = sub.add_parser("regular", parents=[_common(None)], help="classify an infinite path")
    sp_reg.add_argument("--path", required=True, help='e.g. \'{"head": [], "cycle": ["e"]}\'')
    sp_reg.set_defaults(func=cmd_regular)

    sp_model = sub.add_parser("model", parents=[_common()], help="CK relations and kernel probe on a finite basis")
    sp_model.add_argument("--seeds", help="JSON list of infinite path literals")
    sp_model.add_argument("--prepend-bound", default="2")
    sp_model.add_argument("--export", help="write the kernel witness matrix in row col re im format")
    sp_model.set_defaults(func=cmd_model)

    sp_st = sub.add_parser("states", parents=[_common()], help="evaluate phi, psi and e")
    sp_st.add_argument("--z", default="1")
    sp_st.add_argument("--path", required=True)
    sp_st.add_argument("--combo", help="JSON list of combos (each a list of terms)")
    sp_st.set_defaults(func=cmd_states)

    sp_u = sub.add_parser("uniqueness", parents=[_common()], help="end-to-end uniqueness experiment")
    sp_u.add_argument("--prepend-bound", default="2")
    sp_u.set_defaults(func=cmd_uniqueness)
    return p


def run(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    status = 0
    try:
        body = args.func(args)
    except Violation as v:
        body, status = v.args[0], 2
    except InvalidKGraph as exc:
        body = {"valid": False, "violations": [{"kind": v.kind, "detail": v.detail, "items": list(v.items)} for v in exc.violations]}
        status = 2
    except (KGraphError, OSError, ValueError, KeyError) as exc:
        body = {"error": f"{type(exc).__name__}: {exc}"}
        status = 1
    report = {"schema": SCHEMA, "command": args.command, "config": _config(args), "exit_code": status, **body}
    emit(report, args.format, out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
