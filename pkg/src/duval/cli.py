"""Command-line interface: every operation takes flags and prints one JSON object.

Exit status is 0 on success, 1 on a domain error and 2 on a usage or parse
error.  Output is canonical (sorted keys, reduced fractions, graded term
order), so identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .errors import DuvalError, ParseError
from .expr import parse_expr
from .lattice import (
    admissible_indices,
    as_type,
    class_group,
    class_of,
    ej_class,
    fundamental_cycle,
    intersection_matrix,
    multiplicity,
)
from .scalar import scalar_to_json

DEFAULT_PRECISION = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def _expr(text: str, vars=("x", "y", "z"), precision=None):
    return parse_expr(text, vars, precision)


def _curve(text: str):
    from .blowup import CurveParam

    parts, offset, comps = text.split(","), 0, []
    if len(parts) != 3:
        raise UsageError("a curve needs three comma-separated components")
    for part in parts:
        try:
            comps.append(parse_expr(part, ("t",)))
        except ParseError as exc:
            raise ParseError(exc.message, exc.position + offset) from None
        offset += len(part) + 1
    return CurveParam(tuple(comps))


def _class_json(c) -> dict:
    return {"residues": list(c.residues), "moduli": list(c.moduli), "order": c.order()}


# -- subcommands -------------------------------------------------------------

def cmd_lattice(a):
    t = as_type(a.type)
    out = {"type": str(t)}
    show_all = not (a.matrix or a.class_group or a.ej is not None)
    if a.matrix or show_all:
        out["matrix"] = [list(r) for r in intersection_matrix(t).matrix]
    if a.class_group or show_all:
        g = class_group(t)
        out["invariant_factors"] = list(g.invariant_factors)
        out["projection"] = [list(r) for r in g.projection]
    if a.ej is not None:
        out["ej"] = dict(_class_json(ej_class(t, a.ej)), j=a.ej)
    return out


def cmd_fundcycle(a):
    t = as_type(a.type)
    return {"type": str(t), "coeffs": list(fundamental_cycle(t)),
            "admissible": sorted(admissible_indices(t))}


def cmd_reduce(a):
    from .reduce import brute_force_reduce, reduce_to_admissible

    t = as_type(a.type)
    s = _int_list(a.s)
    out = {"type": str(t), "s": s, "class": _class_json(class_of(t, s)) if len(s) == t.rank else None}
    if a.oracle:
        r = brute_force_reduce(t, s, a.bound)
        out["method"] = "oracle"
        out["bound"] = a.bound
        if r is None:
            out["found"] = False
            return out
    else:
        r = reduce_to_admissible(t, s)
        out["method"] = "cases"
    out.update(found=True, g=list(r.g), residual=list(r.residual))
    return out


def cmd_multiplicity(a):
    t = as_type(a.type)
    return {"type": str(t), "multiplicity": multiplicity(t, _int_list(a.s))}


def cmd_root(a):
    from .series.hensel import nth_root_of_unit

    vars = tuple(a.vars.split(","))
    u = parse_expr(a.u, vars, a.precision)
    a0 = parse_expr(a.a0, vars, a.precision)
    root = nth_root_of_unit(u, a.n, a0, a.k, a.precision)
    return {"root": str(root), "precision": root.precision}


def cmd_ruiz(a):
    from .series.ideal import ruiz_equivalent

    f = _expr(a.f, precision=a.precision)
    g = _expr(a.g, precision=a.precision)
    return {"equivalent": ruiz_equivalent(f, g, a.precision), "precision": a.precision}


def cmd_dnen(a):
    from .series.normal import dnen_normalize

    b = parse_expr(a.b, ("y", "z"), a.precision)
    r = dnen_normalize(a.a, a.s, a.t, b, a.precision, a.method)
    out = {
        "method": r.method,
        "precision": r.precision,
        "forward": {v: str(g) for v, g in zip(r.forward.vars, r.forward.images)},
        "inverse": {v: str(g) for v, g in zip(r.inverse.vars, r.inverse.images)},
    }
    if r.method == "rounds":
        out["steps"] = [{"k": st.k, "b": str(st.b), "v": str(st.v), "w": str(st.w)}
                        for st in r.certificate]
    else:
        out["steps"] = [{"d": st.d, "p": str(st.p), "q": str(st.q)} for st in r.certificate]
    return out


def cmd_classify(a):
    from .series.classify import classify

    precision = a.precision or max(DEFAULT_PRECISION, a.max_index + 2)
    c = classify(_expr(a.f, precision=precision), a.max_index)
    return {"type": str(c.dynkin), "milnor": c.milnor, "quadratic_rank": c.rank}


def cmd_blowup(a):
    from .blowup import SurfaceGerm, blow_up_curve, blow_up_surface, singular_points_on_exceptional

    S = SurfaceGerm(_expr(a.f))
    T = blow_up_surface(S, a.chart)
    out = {"chart": a.chart, "strict_transform": str(T.f)}
    out["singular_points"] = [
        {"point": [scalar_to_json(v) for v in p.point], "type": str(p.dynkin)}
        for p in singular_points_on_exceptional(T, a.chart, a.max_index)]
    if a.curve:
        C = blow_up_curve(_curve(a.curve), a.chart)
        out["curve"] = [str(c) for c in C.p]
    return out


def cmd_track(a):
    from .blowup import SurfaceGerm, track_class

    r = track_class(SurfaceGerm(_expr(a.f)), _curve(a.curve), a.max_index)
    out = {
        "type": str(r.dynkin),
        "indices": sorted(r.indices),
        "pair": r.is_pair,
        "classes": [_class_json(c) for c in r.classes],
        "order": r.order,
        "multiplicity": r.multiplicities()[0],
    }
    if a.trace:
        out["trace"] = [st.as_dict() for st in r.trace]
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="duval", description="Class groups and resolutions of ADE singularities.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    q = sub.add_parser("lattice", help="intersection matrix, class group, e_j classes")
    q.add_argument("--type", required=True)
    q.add_argument("--matrix", action="store_true")
    q.add_argument("--class-group", action="store_true")
    q.add_argument("--ej", type=int)
    q.set_defaults(func=cmd_lattice)

    q = sub.add_parser("fundcycle", help="fundamental cycle by Laufer iteration")
    q.add_argument("--type", required=True)
    q.set_defaults(func=cmd_fundcycle)

    q = sub.add_parser("reduce", help="reduce an intersection profile")
    q.add_argument("--type", required=True)
    q.add_argument("--s", required=True, help="comma-separated profile")
    q.add_argument("--oracle", action="store_true", help="use the brute-force search")
    q.add_argument("--bound", type=int, default=20)
    q.set_defaults(func=cmd_reduce)

    q = sub.add_parser("multiplicity", help="multiplicity of the image curve")
    q.add_argument("--type", required=True)
    q.add_argument("--s", required=True)
    q.set_defaults(func=cmd_multiplicity)

    q = sub.add_parser("root", help="n-th root of a unit power series")
    q.add_argument("--u", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--a0", default="1")
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--vars", default="x,y,z")
    q.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    q.set_defaults(func=cmd_root)

    q = sub.add_parser("ruiz", help="sufficient criterion for right equivalence")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    q.set_defaults(func=cmd_ruiz)

    q = sub.add_parser("dnen", help="normal form of y^a z + z^s - b y^t")
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--b", default="1")
    q.add_argument("--method", choices=["auto", "rounds", "jacobian"], default="auto")
    q.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    q.set_defaults(func=cmd_dnen)

    q = sub.add_parser("classify", help="ADE type of a germ")
    q.add_argument("--f", required=True)
    q.add_argument("--max-index", type=int, default=10)
    q.add_argument("--precision", type=int)
    q.set_defaults(func=cmd_classify)

    q = sub.add_parser("blowup", help="strict transforms in one chart")
    q.add_argument("--f", required=True)
    q.add_argument("--chart", required=True, choices=["X", "Y", "Z"])
    q.add_argument("--curve")
    q.add_argument("--max-index", type=int, default=10)
    q.set_defaults(func=cmd_blowup)

    q = sub.add_parser("track", help="class of a smooth curve through the singular point")
    q.add_argument("--f", required=True)
    q.add_argument("--curve", required=True, help="three components in t, comma-separated")
    q.add_argument("--trace", action="store_true")
    q.add_argument("--max-index", type=int, default=12)
    q.set_defaults(func=cmd_track)
    return p


def run(argv: Optional[Sequence[str]] = None):
    """Return ``(exit_code, payload)`` without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        result = args.func(args)
        return 0, dict(result, status="ok")
    except UsageError as exc:
        return 2, {"status": "error", "error": {"code": "usage", "message": str(exc)}}
    except ParseError as exc:
        return 2, {"status": "error", "error": {"code": "parse", "message": exc.message,
                                                 "position": exc.position}}
    except DuvalError as exc:
        return 1, {"status": "error", "error": {"code": exc.code, "message": str(exc)}}


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, payload = run(argv)
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
