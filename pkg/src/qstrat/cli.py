"""Command-line front end.

Every command prints one JSON document (UTF-8, sorted keys) on stdout.
Exit status: 0 success, 2 invalid input, 3 when a fit or certificate needs a
larger degree bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from math import factorial
from pathlib import Path

from qstrat import classical, steenrod, strat, toric
from qstrat.gcomplex import ActionError, GComplex, complex_from_json, subdivide
from qstrat.permgroup import CapExceeded, DegreeMismatch, enumerate_elab, group_from_json, weyl_group
from qstrat.quillen import DEFAULT_DEGREE, DEFAULT_FIT_MAX, build_category, fit_rational, limit_ring, poincare

EXIT_OK, EXIT_INVALID, EXIT_UNFITTED = 0, 2, 3


class ValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _data(kind: str, name: str) -> dict | None:
    res = resources.files("qstrat") / "data" / kind / f"{name}.json"
    if res.is_file():
        return json.loads(res.read_text())
    return None


def _load(kind: str, ref: str) -> dict:
    path = Path(ref)
    if path.is_file():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{ref}: {exc}") from exc
    data = _data(kind, ref)
    if data is None:
        raise ValidationError(f"no such file or built-in {kind[:-1]}: {ref}")
    return data


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n ** 0.5) + 1))


def _prime(value: str) -> int:
    n = int(value)
    if not _is_prime(n):
        raise argparse.ArgumentTypeError(f"{value} is not prime")
    return n


def _nonneg(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")


def _group_and_space(args):
    G = group_from_json(_load("groups", args.group))
    if args.space == "point":
        X = GComplex.point(len(G.generators))
    else:
        X = complex_from_json(_load("spaces", args.space))
    if getattr(args, "subdivide", False):
        X = subdivide(X)
    return G, X


def cmd_elab(args) -> int:
    G = group_from_json(_load("groups", args.group))
    classes = []
    for A in enumerate_elab(G, args.ell):
        classes.append({"rank": A.rank, "basis": [list(b) for b in A.basis],
                        "weyl_order": weyl_group(G, A).order})
    _emit({"group_order": G.order, "ell": args.ell, "count": len(classes), "classes": classes})
    return EXIT_OK


def _limit(args):
    G, X = _group_and_space(args)
    cat = build_category(G, X, args.ell)
    L = limit_ring(cat, args.degree, reduced=args.reduced, threads=args.threads)
    return cat, L


def cmd_limit(args) -> int:
    cat, L = _limit(args)
    ps = poincare(L, args.fit_max)
    out = ps.to_json()
    out["objects"] = cat.to_json()
    _emit(out)
    return EXIT_OK if ps.fitted else EXIT_UNFITTED


def cmd_poincare(args) -> int:
    cat, L = _limit(args)
    ps = poincare(L, args.fit_max)
    out = ps.to_json()
    out["max_rank"] = cat.max_rank
    out["reduced"] = args.reduced
    _emit(out)
    return EXIT_OK if ps.fitted else EXIT_UNFITTED


def cmd_strata(args) -> int:
    args.reduced = True
    cat, L = _limit(args)
    _emit(strat.stratify(L).to_json())
    return EXIT_OK


def cmd_steenrod_check(args) -> int:
    args.reduced = True
    cat, L = _limit(args)
    reports = [steenrod.check_stratum_stability(L, i) for i in range(cat.size)]
    items = []
    for obj, rep in zip(cat.objects, reports):
        d = rep.to_json()
        d["object"] = obj.to_json()
        items.append(d)
    _emit({"degree": L.degree_bound, "passed": all(r.passed for r in reports), "strata": items})
    return EXIT_OK


def cmd_classical(args) -> int:
    if args.which == "bgl":
        alg = classical.bgl_cohomology(args.n, args.ell)
        dims = alg.dims(args.degree)
        ps = fit_rational(dims, args.fit_max)
        _emit({"N": args.n, "ell": args.ell, **ps.to_json()})
        return EXIT_OK if ps.fitted else EXIT_UNFITTED
    if args.which == "flag":
        fl = classical.flag_algebra(args.n, args.ell)
        _emit({"N": args.n, "ell": args.ell, "dims": {str(k): v for k, v in fl.dims().items()},
               "total": fl.total_dim, "expected_total": factorial(args.n)})
        return EXIT_OK
    if args.which == "reductive":
        try:
            rep = classical.gl_reductive_check(args.n, args.ell, args.degree)
        except classical.BoundTooSmall as exc:
            _emit({"N": args.n, "ell": args.ell, "degree": args.degree, "error": str(exc)})
            return EXIT_UNFITTED
        _emit(rep.to_json())
        return EXIT_OK
    if args.which == "frobenius":
        if not _is_prime(args.n):
            raise ValidationError(f"{args.n} is not prime")
        images = classical.gl_ell_diagonal_example(args.n)
        _emit({"sigma": [classical.format_t_power(a) for a in images]})
        return EXIT_OK
    raise ValidationError(f"unknown classical command {args.which}")


def _fan(ref: str) -> toric.Fan:
    builtin = {"p1": lambda: toric.projective_space_fan(1),
               "p2": lambda: toric.projective_space_fan(2),
               "p1xp1": lambda: toric.product_fan(toric.projective_space_fan(1),
                                                  toric.projective_space_fan(1))}
    if not Path(ref).is_file() and ref in builtin:
        return builtin[ref]()
    return toric.fan_from_json(_load("fans", ref))


def cmd_toric(args) -> int:
    fan = _fan(args.fan)
    cmp = toric.compare(fan, args.ell, args.degree, args.threads)
    out = cmp.to_json()
    out.update({"ell": args.ell, "degree": args.degree})
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qstrat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def engine(p, space=True):
        p.add_argument("--group", required=True, help="group JSON file or built-in name")
        if space:
            p.add_argument("--space", default="point", help="complex JSON file, built-in name, or 'point'")
            p.add_argument("--subdivide", action="store_true", help="barycentric subdivision first")
            p.add_argument("--degree", type=_nonneg, default=DEFAULT_DEGREE)
            p.add_argument("--fit-max", type=_nonneg, default=DEFAULT_FIT_MAX)
            p.add_argument("--threads", type=_positive, default=1)
        p.add_argument("--ell", type=_prime, required=True)

    p = sub.add_parser("elab", help="conjugacy classes of elementary abelian subgroups")
    engine(p, space=False)
    p.set_defaults(func=cmd_elab)

    for name, func, help_ in [("limit", cmd_limit, "limit ring dims and Poincare series"),
                              ("poincare", cmd_poincare, "Poincare series of the limit"),
                              ("strata", cmd_strata, "stratification data"),
                              ("steenrod-check", cmd_steenrod_check, "Steenrod stability of strata")]:
        p = sub.add_parser(name, help=help_)
        engine(p)
        if name in ("limit", "poincare"):
            p.add_argument("--reduced", action="store_true", help="nilpotent-free even part")
        p.set_defaults(func=func)

    p = sub.add_parser("classical", help="closed-form GL_N examples")
    csub = p.add_subparsers(dest="which", required=True)
    for which in ("bgl", "flag", "reductive"):
        q = csub.add_parser(which)
        q.add_argument("n", type=_positive)
        q.add_argument("--ell", type=_prime, default=2)
        q.add_argument("--degree", type=_nonneg, default=20)
        q.add_argument("--fit-max", type=_nonneg, default=DEFAULT_FIT_MAX)
    q = csub.add_parser("frobenius")
    q.add_argument("n", type=int, metavar="L")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("toric", help="toric fans")
    tsub = p.add_subparsers(dest="which", required=True)
    q = tsub.add_parser("compare", help="PP vs cone limit vs Stanley-Reisner dims")
    q.add_argument("fan", help="fan JSON file or built-in name (p1, p2, p1xp1)")
    q.add_argument("--ell", type=_prime, default=2)
    q.add_argument("--degree", type=_nonneg, default=8)
    q.add_argument("--threads", type=_positive, default=1)
    p.set_defaults(func=cmd_toric)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValidationError, ActionError, CapExceeded, DegreeMismatch, toric.NonSimplicial,
            ValueError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                                    sort_keys=True) + "\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
