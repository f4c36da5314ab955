"""Command-line entry point.

Every command prints one JSON document (or CSV for ``series --format csv``)
carrying ``"schema": 1``.  Exit status: 0 when every check passes, 1 when
a check fails, 2 on any error (bad arguments, invalid graph, inconsistent
arithmetic), with a JSON error object on stdout.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import catalog
from .cogrowth import estimate_cogrowth, grigorchuk_nu, psl2_domain, psl2_nu
from .enumeration import DEFAULT_BUDGET, path_census
from .exceptions import GraphValidationError, PathSeriesError
from .graph import MarkedGraph, free_product_truncate, marked_from_spec, named_family
from .products import (
    direct_first_series,
    direct_second_series,
    free_product_series,
    radius_additivity_report,
)
from .series import PowerSeries, ps_reciprocal
from .transfer import (
    LabelAssignment,
    enriched_series,
    eqb_sides,
    first_discrepancy,
    green_series,
    labelled_transform,
    linear_recurrence_check,
)
from .zeta import zeta_from_cycles, zeta_inverse_det, zeta_inverse_factored

SCHEMA = 1


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


@dataclass
class RunConfig:
    command: str
    order: int
    fmt: str
    budget: int
    seed: int


# ---------------------------------------------------------------------------
# graph and factor resolution
# ---------------------------------------------------------------------------

_FAMILY_KEYS = ("v", "k", "d", "e", "r")


def _marked(args) -> MarkedGraph:
    if args.spec and args.family:
        raise CliError("give either --spec or --family, not both")
    if args.spec:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"graph spec is not valid JSON: {exc}", args.spec) from None
        return marked_from_spec(doc, args.birth, args.death)
    if not args.family:
        raise CliError("a graph is required: --spec FILE or --family NAME")
    params = {k: getattr(args, k) for k in _FAMILY_KEYS if getattr(args, k) is not None}
    g = named_family(args.family, params)
    birth = 0 if args.birth is None else args.birth
    death = birth if args.death is None else args.death
    return MarkedGraph(g, birth, death)


def _factor_series(token: str, N: int) -> PowerSeries:
    name, _, arg = token.partition(":")
    try:
        n = int(arg) if arg else None
    except ValueError:
        raise CliError(f"factor {token!r}: parameter must be an integer") from None
    if name == "tree":
        return catalog.tree_series(n if n is not None else 2, N).G
    if name == "cycle":
        return catalog.cycle_series(n if n is not None else 3, N).G
    if name == "z":
        return catalog.tree_series(2, N).G
    if name in ("edge", "point", "complete"):
        return green_series(_factor_graph(token, N), N)
    raise CliError(f"unknown factor {token!r}; use tree:d, cycle:k, complete:v, z, edge or point")


def _factor_graph(token: str, N: int) -> MarkedGraph:
    name, _, arg = token.partition(":")
    n = int(arg) if arg else None
    if name == "tree":
        d = 2 if n is None else n
        g = named_family("edge") if d == 1 else named_family("tree_ball", d=d, r=N // 2 + 1)
    elif name == "z":
        g = named_family("tree_ball", d=2, r=N // 2 + 1)
    elif name == "cycle":
        g = named_family("cycle", k=3 if n is None else n)
    elif name == "complete":
        g = named_family("complete", v=3 if n is None else n)
    elif name in ("edge", "point"):
        g = named_family(name)
    else:
        raise CliError(f"unknown factor {token!r}; use tree:d, cycle:k, complete:v, z, edge or point")
    return MarkedGraph(g, 0, 0)


def _graph_info(mg: MarkedGraph) -> dict:
    g = mg.graph
    return {
        "name": g.name,
        "vertices": g.vertex_count,
        "half_edges": g.half_edge_count,
        "birth": mg.birth,
        "death": mg.death,
        "faithful_horizon": mg.faithful_horizon,
    }


def _disc(d):
    if d is None:
        return None
    n, m, exp, got = d
    return {"n": n, "m": m, "expected": str(exp), "got": str(got)}


def _check(name: str, ok: bool, **detail) -> dict:
    return {"check": name, "status": "PASS" if ok else "FAIL", **detail}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_series(args, cfg: RunConfig):
    mg = _marked(args)
    N = cfg.order
    G = green_series(mg, N, strict=False)
    out = {"graph": _graph_info(mg), "order": N, "G": G.to_json(), "diagnostics": list(G.diagnostics)}
    F = None
    if args.enriched:
        F = enriched_series(mg, N, strict=False)
        out["F"] = F.to_json()
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "numerator", "denominator"])
        if F is not None:
            for n, poly in enumerate(F.coeffs):
                for m, c in enumerate(poly.coeffs):
                    if c:
                        c = Fraction(c)
                        w.writerow([n, m, c.numerator, c.denominator])
        else:
            for n, c in enumerate(G.coeffs):
                c = Fraction(c)
                w.writerow([n, "", c.numerator, c.denominator])
        return buf.getvalue(), True
    return out, True


def _verify_eqb(args, cfg):
    mg = _marked(args)
    d = mg.graph.regular_degree()
    if d is None:
        raise CliError("eqb needs a regular graph")
    N = cfg.order
    F = enriched_series(mg, N, strict=False)
    G = green_series(mg, N, strict=False)
    left, right = eqb_sides(F, G, d, N)
    disc = first_discrepancy(left, right)
    return [_check("eqb", disc is None, d=d, order=N, first_discrepancy=_disc(disc))], _graph_info(mg)


def _verify_bass(args, cfg):
    mg = _marked(args)
    det = zeta_inverse_det(mg.graph)
    fac = zeta_inverse_factored(mg.graph)
    checks = [_check("bass", det == fac, determinant=det.to_json(), factored=fac.to_json())]
    if args.cycles:
        L = cfg.order
        prod = zeta_from_cycles(mg.graph, L, budget=cfg.budget)
        disc = first_discrepancy(prod, ps_reciprocal(det.to_series(L)))
        checks.append(_check("cycle_product", disc is None, order=L, first_discrepancy=_disc(disc)))
    return checks, _graph_info(mg)


def _verify_free(args, cfg):
    N = cfg.order
    lhs, rhs = args.lhs or "edge", args.rhs or "cycle:3"
    series = free_product_series(_factor_series(lhs, N), _factor_series(rhs, N), N)
    depth = N // 2 + 1
    mg = free_product_truncate(_factor_graph(lhs, N), _factor_graph(rhs, N), depth)
    fh = mg.faithful_horizon
    M = N if fh is None else min(N, fh)
    oracle = green_series(mg, M, strict=False)
    disc = first_discrepancy(oracle, series.truncate(M))
    return [
        _check("free", disc is None, order=M, first_discrepancy=_disc(disc), series=series.to_json())
    ], _graph_info(mg)


def _verify_oracle(args, cfg):
    mg = _marked(args)
    N = cfg.order
    census = path_census(mg, N, budget=cfg.budget).as_bivariate()
    F = enriched_series(mg, N, strict=False)
    disc = first_discrepancy(census, F)
    return [_check("oracle", disc is None, order=N, first_discrepancy=_disc(disc))], _graph_info(mg)


def _verify_labelled(args, cfg):
    mg = _marked(args)
    rng = random.Random(cfg.seed)
    h = mg.graph.half_edge_count
    checks = []
    for trial in range(args.trials):
        weights = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(h)]
        lt = labelled_transform(mg, LabelAssignment(tuple(weights)), cfg.order, strict=False)
        checks.append(
            _check(f"labelled[{trial}]", lt.agree, first_discrepancy=_disc(lt.first_discrepancy()))
        )
    return checks, _graph_info(mg)


def _verify_recurrence(args, cfg):
    mg = _marked(args)
    rep = linear_recurrence_check(mg)
    return [_check("recurrence", rep.passed, **rep.to_json())], _graph_info(mg)


_VERIFY = {
    "eqb": _verify_eqb,
    "bass": _verify_bass,
    "free": _verify_free,
    "oracle": _verify_oracle,
    "labelled": _verify_labelled,
    "recurrence": _verify_recurrence,
}


def cmd_verify(args, cfg: RunConfig):
    checks, info = _VERIFY[args.check](args, cfg)
    ok = all(c["status"] == "PASS" for c in checks)
    return {"verify": args.check, "graph": info, "checks": checks, "status": "PASS" if ok else "FAIL"}, ok


def cmd_product(args, cfg: RunConfig):
    if not args.lhs or not args.rhs:
        raise CliError("product needs --lhs and --rhs")
    N = cfg.order
    E, F = _factor_series(args.lhs, N), _factor_series(args.rhs, N)
    if args.kind == "free":
        series = free_product_series(E, F, N)
    elif args.kind == "first":
        series = direct_first_series(E, F, N)
    else:
        series = direct_second_series(E, F, N)
    out = {"product": args.kind, "lhs": args.lhs, "rhs": args.rhs, "order": N, "series": series.to_json()}
    if args.kind == "free" and args.additivity:
        out["additivity"] = radius_additivity_report(E, F, N).to_json()
    return out, True


def cmd_zeta(args, cfg: RunConfig):
    mg = _marked(args)
    g = mg.graph
    out: dict = {"graph": _graph_info(mg), "mode": args.mode}
    ok = True
    det = fac = None
    if args.mode in ("det", "all"):
        det = zeta_inverse_det(g)
        out["determinant"] = det.to_json()
    if args.mode in ("factored", "all"):
        fac = zeta_inverse_factored(g)
        out["factored"] = fac.to_json()
    if args.mode in ("cycles", "all"):
        L = cfg.order
        prod = zeta_from_cycles(g, L, budget=cfg.budget)
        out["cycle_product"] = prod.to_json()
        if det is not None:
            disc = first_discrepancy(prod, ps_reciprocal(det.to_series(L)))
            out["cycles_match"] = disc is None
            out["cycles_first_discrepancy"] = _disc(disc)
            ok = ok and disc is None
    if det is not None and fac is not None:
        out["det_equals_factored"] = det == fac
        ok = ok and det == fac
    out["status"] = "PASS" if ok else "FAIL"
    return out, ok


def cmd_cogrowth(args, cfg: RunConfig):
    if args.action == "nu":
        if args.alpha is None or args.d is None:
            raise CliError("cogrowth nu needs --alpha and --d")
        return {"cogrowth": "nu", **grigorchuk_nu(_number(args.alpha), args.d).to_json()}, True
    if args.action == "psl2":
        if args.alpha is None:
            raise CliError("cogrowth psl2 needs --alpha")
        lo, hi = psl2_domain()
        a = float(args.alpha)
        return {"cogrowth": "psl2", "alpha": a, "circuit_growth": psl2_nu(a), "domain": [lo, hi]}, True
    mg = _marked(args)
    census = path_census(mg, cfg.order, budget=cfg.budget)
    alpha = estimate_cogrowth(census)
    out = {"cogrowth": "estimate", "graph": _graph_info(mg), "order": cfg.order, "alpha": alpha}
    d = mg.graph.regular_degree()
    if d is not None and d >= 2:
        out["grigorchuk"] = grigorchuk_nu(min(alpha, d - 1), d).to_json()
    return out, True


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text) if "/" in text else float(text)
    except ValueError:
        raise CliError(f"not a number: {text!r}") from None


_CATALOG_PARAMS = {
    "complete": ("v",),
    "cycle": ("k",),
    "tree": ("d",),
    "loop_tree": ("d", "e"),
    "ladder": (),
    "z12": (),
    "psl2": (),
}


def cmd_catalog(args, cfg: RunConfig):
    N = cfg.order
    name = args.name
    need = _CATALOG_PARAMS[name]
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        raise CliError(f"catalog {name} needs --{' --'.join(missing)}")
    out: dict = {"catalog": name, "order": N}
    if name == "complete":
        out["F"] = catalog.complete_series(args.v, N).to_json()
    elif name == "cycle":
        cs = catalog.cycle_series(args.k, N)
        out["G"], out["F0"] = cs.G.to_json(), cs.F0.to_json()
    elif name == "tree":
        ts = catalog.tree_series(args.d, N)
        out["G"] = ts.G.to_json()
        out["F"] = ts.F_flip.flip_u().to_json()
    elif name == "loop_tree":
        out["G"] = catalog.loop_tree_series(args.d, args.e, N).to_json()
        out["radius"] = catalog.loop_tree_radius(args.d, args.e)
    elif name == "ladder":
        out["G"] = catalog.ladder_series(N).to_json()
    elif name == "z12":
        out["G"] = catalog.z12_series(N).to_json()
    else:
        out["G"] = catalog.psl2_series(N).to_json()
    return out, True


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _graph_args(p):
    p.add_argument("--family", help="named family: complete, cycle, tree_ball, loop_tree, ladder, z12, edge, point")
    p.add_argument("--spec", help="graph spec JSON file")
    for k in _FAMILY_KEYS:
        p.add_argument(f"--{k}", type=int)
    p.add_argument("--birth", type=int)
    p.add_argument("--death", type=int)


def _common(p, order=10):
    p.add_argument("--order", type=int, default=order)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pathseries", description="Path series of graphs, counted by length and bumps.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("series", help="path series G and, with --enriched, F")
    _graph_args(p)
    _common(p)
    p.add_argument("--enriched", action="store_true")

    p = sub.add_parser("verify", help="run an identity check")
    p.add_argument("check", choices=sorted(_VERIFY))
    _graph_args(p)
    _common(p)
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--cycles", action="store_true", help="bass: also expand the primitive-cycle product")

    p = sub.add_parser("product", help="series of a product from its factors")
    p.add_argument("kind", choices=("free", "first", "second"))
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--additivity", action="store_true")
    _common(p)

    p = sub.add_parser("zeta", help="inverse zeta function")
    _graph_args(p)
    _common(p, order=8)
    p.add_argument("--mode", choices=("det", "factored", "cycles", "all"), default="all")

    p = sub.add_parser("cogrowth", help="cogrowth and spectral radius")
    p.add_argument("action", choices=("nu", "psl2", "estimate"))
    p.add_argument("--alpha")
    _graph_args(p)
    _common(p, order=16)

    p = sub.add_parser("catalog", help="closed-form series of a named graph")
    p.add_argument("name", choices=sorted(_CATALOG_PARAMS))
    p.add_argument("--v", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--e", type=int)
    _common(p)
    return parser


_COMMANDS = {
    "series": cmd_series,
    "verify": cmd_verify,
    "product": cmd_product,
    "zeta": cmd_zeta,
    "cogrowth": cmd_cogrowth,
    "catalog": cmd_catalog,
}


def _emit(doc, stream) -> None:
    if isinstance(doc, str):
        stream.write(doc)
    else:
        stream.write(json.dumps({"schema": SCHEMA, **doc}, indent=2, sort_keys=True) + "\n")


def _error_doc(exc: BaseException) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, GraphValidationError):
        err["element"] = exc.element
    return {"error": err}


def main(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise CliError("a command is required: " + ", ".join(sorted(_COMMANDS)))
        if args.order < 0:
            raise CliError("--order must be >= 0")
        if args.budget <= 0:
            raise CliError("--budget must be positive")
        cfg = RunConfig(args.command, args.order, args.fmt, args.budget, args.seed)
        doc, ok = _COMMANDS[args.command](args, cfg)
    except (CliError, PathSeriesError, ValueError, ArithmeticError, OSError) as exc:
        _emit(_error_doc(exc), stdout)
        return 2
    _emit(doc, stdout)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
