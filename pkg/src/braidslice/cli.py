"""Command-line interface: ``braidslice <command> ...``.

Every command builds a report dict with an ``ok`` flag; the exit status is
0 exactly when ``ok`` is true.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import catalogue
from .braid import dgn, power
from .chevalley import (CrossingConditionError, MembershipError, SliceContext,
                        sl3_longest_context, spaltenstein_context, spaltenstein_pair,
                        spaltenstein_witness)
from .cross import (CrossingPairError, big_cross_iter, crossing_condition, crossing_exponent,
                    crossing_pair_failures, cross_iter, is_nimble)
from .rmatrix import (BDTriple, TorusConstraintError, TripleError, build_rmatrix, cayley_operator,
                      mcybe_check, operator_of, parse_algebra, reduction_criterion, solve_r0)
from .root_system import RootSystemError, build_root_system
from .survey import find_crossing_pairs, survey_convex
from .weyl import GroupTooLargeError, MAX_GROUP_ORDER, parse_word, weyl_from_word

DEFAULT_SEED = 20240611
TEXT_WIDTH = 100


# output ----------------------------------------------------------------------------

def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def format_matrix(m: Sequence[Sequence[Fraction]]) -> str:
    cells = [[str(Fraction(x)) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _text(report: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(report, dict):
        for k in sorted(report, key=str):
            v = report[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(_clip(f"{pad}{k}: {_flat(v)}"))
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines += _text(item, indent + 1)
            else:
                lines.append(_clip(f"{pad}- {_flat(item)}"))
    else:
        lines.append(_clip(pad + _flat(report)))
    return lines


def _is_flat(v: Any) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list, tuple)) for x in v)


def _is_root_name(x: Any) -> bool:
    return isinstance(x, str) and x.lstrip("-").startswith("a") and x.lstrip("-")[1:].isdigit()


def _flat(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        inner = ", ".join(_flat(x) for x in v)
        # root sets print in set notation
        return "{" + inner + "}" if v and all(_is_root_name(x) for x in v) else "[" + inner + "]"
    return str(v)


def _clip(line: str) -> str:
    return line if len(line) <= TEXT_WIDTH else line[:TEXT_WIDTH - 3] + "..."


def emit(report: Any, fmt: str = "text") -> str:
    """Deterministic serialisation: sorted keys, fractions as strings."""
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2)
    if fmt != "text":
        raise ValueError("format must be 'text' or 'json'")
    return "\n".join(_text(_jsonable(report)))


# helpers -----------------------------------------------------------------------------

def _group(args):
    if not args.type:
        raise SystemExit("--type is required (e.g. --type B3)")
    return build_root_system(args.type)


def _element(args, sys=None):
    sys = sys or _group(args)
    word = parse_word(args.w or "")
    twist = None
    if getattr(args, "twist", None):
        from .weyl import named_twist
        twist = named_twist(sys, args.twist)
    return sys, weyl_from_word(sys, word, twist)


def _matrix_json(m) -> list[list[str]]:
    return [[str(Fraction(x)) for x in row] for row in m]


# commands ----------------------------------------------------------------------------

def cmd_rootsys(args) -> dict:
    sys = _group(args)
    rep: dict[str, Any] = {
        "type": sys.label,
        "positive_roots": len(sys.positive_roots),
        "highest_root": sys.name(sys.P - 1),
        "cartan": sys.cartan,
        "ok": True,
    }
    if args.roots:
        rep["roots"] = [sys.name(i) for i in range(sys.P)]
    if args.convex is not None:
        s = sys.parse_set(args.convex)
        rep["set"] = sys.format_set(s)
        rep["convex"] = sys.is_convex(s)
        rep["ray_convex"] = sys.is_ray_convex(s)
    if args.summing is not None:
        s = sys.parse_set(args.summing)
        from .root_system import iter_bits
        try:
            rep["summing_sequence"] = [sys.name(b) for b in sys.summing_sequence(list(iter_bits(s)))]
        except RootSystemError as exc:
            rep["summing_sequence"] = f"none: {exc}"
            rep["ok"] = False
    return rep


def cmd_weyl(args) -> dict:
    sys, w = _element(args)
    rep = w.to_json()
    rep.update({
        "type": sys.label,
        "inversion_set": sys.format_set(w.inversion_set),
        "fixed_roots": sys.format_set(w.fixed_roots),
        "stable_roots": sys.format_set(w.stable_roots),
        "elliptic": w.is_elliptic,
        "convex": w.is_convex,
        "order": w.order,
        "ok": True,
    })
    return rep


def cmd_dgn(args) -> dict:
    sys, w = _element(args)
    if args.inverse:
        w = w.inverse()
    b = power(w, args.power)
    return {
        "type": sys.label,
        "w": w.word_string(),
        "power": args.power,
        "normal_form": b.render(),
        "factors": [f.word_string() for f in dgn(b)],
        "already_normal": list(b.factors) == [w] * args.power if args.power and w.length else True,
        "ok": True,
    }


def cmd_cross(args) -> dict:
    sys, w = _element(args)
    n = sys.parse_set(args.set)
    rep: dict[str, Any] = {"type": sys.label, "w": w.word_string(), "set": sys.format_set(n),
                           "iters": args.iters, "ok": True}
    if args.big:
        try:
            rep["Cross"] = sys.format_set(big_cross_iter(w, n, args.iters))
        except CrossingPairError as exc:
            rep["error"] = str(exc)
            rep["ok"] = False
    else:
        rep["cross"] = sys.format_set(cross_iter(w, n, args.iters))
    return rep


def cmd_pairs(args) -> dict:
    sys, w = _element(args)
    if args.N is not None:
        n = sys.parse_set(args.N)
        l = sys.parse_set(args.L or "{}")
        failed = crossing_pair_failures(w, n, l)
        rep = {"type": sys.label, "w": w.word_string(), "N": sys.format_set(n), "L": sys.format_set(l),
               "failed": failed, "crossing_pair": not failed, "nimble": is_nimble(w, n)}
        if is_nimble(w, n):
            rep["crossing_condition"] = crossing_condition(w, n)
            rep["exponent"] = crossing_exponent(w, n)
        rep["ok"] = not failed
        return rep
    rows = find_crossing_pairs(w, limit=args.limit)
    return {"type": sys.label, "w": w.word_string(), "pairs": rows, "count": len(rows), "ok": True}


def _slice_context(args) -> SliceContext:
    group = args.group.upper()
    if not group.startswith("SL") or not group[2:].isdigit():
        raise SystemExit("--group must look like SL3")
    n = int(group[2:])
    word = parse_word(args.w or "")
    return SliceContext.build(n, word, args.pair, args.torus, d=args.d)


def cmd_slice(args) -> dict:
    rng = random.Random(args.seed)
    if args.action == "spaltenstein":
        ctx = spaltenstein_context()
        results = []
        for _ in range(args.samples):
            s = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            t = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))
            results.append({"s": s, "t": t, "witness": spaltenstein_witness(s, t, ctx)})
        n, g = spaltenstein_pair(Fraction(1), Fraction(1))
        return {"samples": results, "n(1,1)": _matrix_json(n), "g(1,1)": _matrix_json(g),
                "psi(n,g)(1,1)": _matrix_json(ctx.psi(n, g)),
                "ok": all(r["witness"] for r in results)}
    ctx = sl3_longest_context() if args.action == "closed-form" else _slice_context(args)
    rep: dict[str, Any] = {"group": f"SL{ctx.n}", "w": ctx.w.word_string(), "d": ctx.d,
                           "N": ctx.sys.format_set(ctx.nset), "L": ctx.sys.format_set(ctx.lset),
                           "torus": ctx.torus, "lift": _matrix_json(ctx.lift),
                           "crossing_condition": ctx.crossing_holds()}
    if args.action == "closed-form":
        from .chevalley import sl3_closed_form, sl3_closed_form_inputs
        ok = 0
        for _ in range(args.samples):
            vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(7)]
            vals[3] = Fraction(rng.randint(1, 9), rng.randint(1, 5))
            n, g = sl3_closed_form_inputs(*vals)
            ok += ctx.psi(n, g) == sl3_closed_form(*vals)
        rep.update({"matches": ok, "samples": args.samples, "ok": ok == args.samples})
        return rep
    if args.action == "transversality":
        ranks = [ctx.transversality_rank(ctx.random_slice(rng)) for _ in range(args.samples)]
        dim = ctx.n * ctx.n - 1
        rep.update({"ranks": sorted(set(ranks)), "dimension": dim, "ok": all(r == dim for r in ranks)})
        return rep
    forward = backward = 0
    errors: list[str] = []
    for _ in range(args.samples):
        n = ctx.random_N(rng)
        g = ctx.random_slice(rng)
        try:
            gt = ctx.psi(n, g)
            n2, g2 = ctx.psi_inverse(gt)
            forward += (n2, g2) == (n, g)
            backward += ctx.psi(n2, g2) == gt
        except (MembershipError, CrossingConditionError) as exc:
            errors.append(str(exc))
            break
    rep.update({"samples": args.samples, "psi_inverse_psi": forward, "psi_psi_inverse": backward,
                "ok": not errors and forward == backward == args.samples})
    if errors:
        rep["error"] = errors[0]
    return rep


def _word_element(lie, text: str):
    return weyl_from_word(lie.sys, parse_word(text or ""))


def cmd_rmatrix(args) -> dict:
    lie = parse_algebra(args.algebra)
    triple = BDTriple.parse(args.triple or "")
    w = _word_element(lie, args.w)
    if args.r0 == "cayley":
        r0 = cayley_operator(lie, w)
    elif args.r0 == "zero":
        r0 = [[Fraction(0)] * lie.rank for _ in range(lie.rank)]
    elif args.r0 == "solve":
        r0 = operator_of(lie, solve_r0(lie, triple)[0])
    else:
        r0 = [[Fraction(x) for x in row.split()] for row in args.r0.split(";")]
    rep: dict[str, Any] = {"algebra": f"sl{lie.n}", "triple": triple.render(), "w": w.word_string(),
                           "r0": _matrix_json(r0) if r0 else []}
    try:
        data = build_rmatrix(lie, triple, r0)
        rep["mcybe"] = mcybe_check(data)
        rep["torus_constraint"] = True
    except TorusConstraintError as exc:
        rep["torus_constraint"] = False
        rep["mcybe"] = None
        rep["errors"] = exc.failed
    report = reduction_criterion(lie, w, args.l_spec, r0)
    rep["conditions"] = report.conditions
    rep["reduction_by_conditions"] = report.by_conditions
    rep["reduction_by_image"] = report.by_image
    rep["ok"] = bool(rep["mcybe"]) and report.agree and (report.by_conditions or not args.expect_reduction)
    return rep


def cmd_paper_example(args) -> dict:
    if args.list:
        return {"ids": [r.id for r in catalogue.RECORDS], "ok": True}
    if args.all:
        results = catalogue.run_all(args.seed)
        return {"results": sorted(results, key=lambda r: r["id"]),
                "passed": sum(r["status"] == "pass" for r in results),
                "total": len(results), "ok": all(r["status"] == "pass" for r in results)}
    if not args.id:
        raise SystemExit("give an example id, --all or --list")
    rep = catalogue.run_example(args.id, args.seed)
    rep["ok"] = rep["status"] == "pass"
    return rep


def cmd_survey(args) -> dict:
    sys = _group(args)
    rows = survey_convex(sys.kind, sys.rank, args.d_max, args.sample, args.seed, args.limit)
    return {"type": sys.label, "rows": rows, "count": len(rows), "ok": True}


def _survey_text(rep: dict) -> str:
    cols = ["w", "length", "elliptic", "convex", "braid_equation", "dg_stabilized"]
    rows = [[str(r[c]) if r[c] != "" else "e" for c in cols] for r in rep["rows"]]
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(cols)]
    widths = [min(x, 30) for x in widths]
    out = [f"{rep['type']}: {rep['count']} elements",
           "  ".join(c.ljust(wd) for c, wd in zip(cols, widths))]
    for r in rows:
        out.append(_clip("  ".join(x[:wd].ljust(wd) for x, wd in zip(r, widths))))
    return "\n".join(out)


# parser ------------------------------------------------------------------------------

def _global_flags(top: bool) -> argparse.ArgumentParser:
    # subcommands get SUPPRESS defaults so flags given before the command survive
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="seed for randomised checks")
    common.add_argument("--type", default=d(None), help="root system label, e.g. B3")
    common.add_argument("--w", default=d(""), help='reduced word, e.g. "1 2 3 1 2"')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(top=False)
    p = argparse.ArgumentParser(prog="braidslice", description=__doc__.splitlines()[0],
                                parents=[_global_flags(top=True)])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rootsys", parents=[common], help="root system data")
    s.add_argument("--roots", action="store_true")
    s.add_argument("--convex", metavar="SET", help='check convexity of a set like "{a1, a12}"')
    s.add_argument("--summing", metavar="SET", help="find a summing sequence for a set")
    s.set_defaults(func=cmd_rootsys)

    s = sub.add_parser("weyl", parents=[common], help="Weyl group element data")
    s.add_argument("--twist", help="diagram automorphism: none or flip")
    s.set_defaults(func=cmd_weyl)

    s = sub.add_parser("dgn", parents=[common], help="normal form of b_w^d")
    s.add_argument("--power", type=int, default=1)
    s.add_argument("--inverse", action="store_true", help="use w^-1")
    s.add_argument("--twist")
    s.set_defaults(func=cmd_dgn)

    s = sub.add_parser("cross", parents=[common], help="iterate cross_w or Cross_w")
    s.add_argument("--set", default="R+")
    s.add_argument("--iters", type=int, default=1)
    s.add_argument("--big", action="store_true", help="use Cross_w (needs a convex set containing R_w)")
    s.add_argument("--twist")
    s.set_defaults(func=cmd_cross)

    s = sub.add_parser("pairs", parents=[common], help="check or search crossing pairs")
    s.add_argument("--N")
    s.add_argument("--L")
    s.add_argument("--limit", type=int, default=MAX_GROUP_ORDER)
    s.add_argument("--twist")
    s.set_defaults(func=cmd_pairs)

    s = sub.add_parser("slice", parents=[common], help="exact SL_n checks of the cross section")
    s.add_argument("action", choices=["verify", "spaltenstein", "closed-form", "transversality"])
    s.add_argument("--group", default="SL3")
    s.add_argument("--pair", default="full", choices=["full", "firm", "inversion", "stable"])
    s.add_argument("--torus", default="identity", choices=["identity", "fixed", "full"])
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--d", type=int, help="override the iteration count")
    s.set_defaults(func=cmd_slice)

    s = sub.add_parser("rmatrix", parents=[common], help="r-matrix and reduction criterion checks")
    s.add_argument("action", choices=["check"])
    s.add_argument("--algebra", default="sl3")
    s.add_argument("--triple", default="")
    s.add_argument("--r0", default="cayley", help='cayley, zero, solve, or rows like "0 1;-1 0"')
    s.add_argument("--l-spec", default="fixed", help="fixed (t^w) or zero")
    s.add_argument("--expect-reduction", action="store_true", help="fail unless the criterion holds")
    s.set_defaults(func=cmd_rmatrix)

    s = sub.add_parser("paper-example", parents=[common], help="run worked examples by id")
    s.add_argument("id", nargs="?")
    s.add_argument("--all", action="store_true")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_paper_example)

    s = sub.add_parser("survey", parents=[common], help="table of all elements of a Weyl group")
    s.add_argument("--d-max", type=int)
    s.add_argument("--sample", type=int, help="sample this many random elements instead")
    s.add_argument("--limit", type=int, default=MAX_GROUP_ORDER)
    s.set_defaults(func=cmd_survey)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (RootSystemError, GroupTooLargeError, CrossingPairError, TripleError, MembershipError,
            CrossingConditionError, ValueError, KeyError) as exc:
        report = {"error": str(exc).strip("'\""), "ok": False}
    fmt = "json" if args.json else "text"
    if fmt == "text" and args.command == "survey" and "rows" in report:
        print(_survey_text(report))
    else:
        print(emit(report, fmt))
    return 0 if report.get("ok") else 1


if __name__ == "__main__":
    sys.exit(main())
