"""Acceptance suite: ten end-to-end criteria, one PASS/FAIL line each.

Run with pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import json
import random
import sys
import time
from contextlib import redirect_stdout
from math import factorial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from qstrat.cli import main as cli_main  # noqa: E402
from qstrat.classical import bgl_series, flag_algebra, poly_series, series_product  # noqa: E402
from qstrat.gcalg import poly_algebra  # noqa: E402
from qstrat.gcomplex import element_action, pair_transporter_elements  # noqa: E402
from qstrat.permgroup import enumerate_elab  # noqa: E402
from qstrat.quillen import poincare, series_of  # noqa: E402
from qstrat.steenrod import check_stratum_stability, steenrod, total_steenrod  # noqa: E402
from qstrat.strat import kernel_containment, stratify, weyl_faithful  # noqa: E402
from qstrat.toric import compare, product_fan, projective_space_fan  # noqa: E402

import oracles  # noqa: E402
from conftest import category, group, limit, shipped_examples, space  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def cli_json(*argv) -> tuple[int, dict]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(list(argv))
    return code, json.loads(buf.getvalue())


def criterion_1():
    t = time.perf_counter()
    code, out = cli_json("classical", "bgl", "2")
    series_ok = (code == 0 and out["dims"] == series_of([1], [1, 2], 20)
                 and out["fitted"] == {"numerator": [1], "denominator_indices": [1, 2]})
    totals = {}
    for n in range(1, 7):
        _, fl = cli_json("classical", "flag", str(n))
        totals[n] = fl["total"]
    flags_ok = all(totals[n] == factorial(n) for n in totals)
    dt = time.perf_counter() - t
    return series_ok and flags_ok and dt < 1.0, f"bgl2 series={series_ok} flag totals={totals} {dt:.2f}s"


def criterion_2():
    t = time.perf_counter()
    got = {ell: cli_json("classical", "frobenius", str(ell))[1]["sigma"] for ell in (2, 3, 5)}
    ok = all(got[ell] == [0] * (ell - 1) + [f"t^{ell}"] for ell in got)
    dt = time.perf_counter() - t
    return ok and dt < 1.0, f"{got} {dt:.2f}s"


def criterion_3():
    bad = []
    for ell in (2, 3):
        for n in range(1, 5):
            lhs = series_product(bgl_series(n, 20), flag_algebra(n, ell).series(20))
            if lhs != poly_series([2] * n, 20):
                bad.append((ell, n))
    return not bad, f"mismatches={bad}"


def criterion_4():
    bad, checked = [], 0
    for g, s, ell in shipped_examples():
        if group(g).order > 200:
            continue
        checked += 1
        if limit(g, s, ell, 8).dims != oracles.limit_dims(g, s, ell, 8):
            bad.append((g, s, ell))
    return not bad and checked > 0, f"{checked} examples, mismatches={bad}"


NORMAL_CASES = [("a4", 2), ("z3xz3_z2", 3), ("z3xz3_swap", 3)]


def criterion_5():
    t = time.perf_counter()
    bad = []
    for g, ell in NORMAL_CASES:
        if limit(g, "point", ell, 12).dims != oracles.normal_invariant_dims(g, ell, 12):
            bad.append(g)
    a4 = limit("a4", "point", 2, 12).dims[:4]
    dt = time.perf_counter() - t
    return not bad and a4 == [1, 0, 1, 2] and dt < 10.0, f"a4 0..3={a4} mismatches={bad} {dt:.2f}s"


def criterion_6():
    bad = []
    for g, s, ell in shipped_examples():
        rank = category(g, s, ell).max_rank
        for reduced in (False, True):
            ps = poincare(limit(g, s, ell, 12, reduced))
            if not ps.fitted or ps.pole_order != rank:
                bad.append((g, s, ell, reduced, ps.pole_order, rank))
    return not bad, f"{len(shipped_examples())} examples, failures={bad}"


def _random_poly(alg, d, rng):
    return alg.element({m: rng.randrange(alg.prime) for m in alg.monomials(d)})


def criterion_7():
    rng = random.Random(2024)
    problems = []
    cartan_cases = 0
    for ell in (2, 3, 5):
        e = 1 if ell == 2 else 2
        alg = poly_algebra(ell, [e] * 3)
        for d in range(0, 7, e):
            a = _random_poly(alg, d, rng)
            if steenrod(0, a) != a:
                problems.append(("P0", ell, d))
        for i in range(3):
            g = alg.gen(i)
            if steenrod(1, g) != g ** ell or not steenrod(2, g).is_zero():
                problems.append(("generator", ell, i))
        for _ in range(40):
            d1, d2 = rng.randrange(0, 7, e), rng.randrange(0, 7, e)
            a, b = _random_poly(alg, d1, rng), _random_poly(alg, d2, rng)
            ta, tb, tab = total_steenrod(a), total_steenrod(b), total_steenrod(a * b)
            for k in range((d1 + d2) // e + 2):
                rhs = alg.zero()
                for i in range(k + 1):
                    rhs = rhs + ta[i] * tb[k - i]
                if tab[k] != rhs:
                    problems.append(("cartan", ell, d1, d2, k))
            cartan_cases += 1
    morphisms = strata = 0
    for g, s, ell in shipped_examples():
        L = limit(g, s, ell, 12, True)
        e = 1 if ell == 2 else 2
        for (i, j), us in L.category.homs.items():
            for u in us:
                theta = L.morphism(i, j, u)
                morphisms += 1
                for d in range(0, 7, e):
                    a = _random_poly(L.algebras[j], d, rng)
                    ta, tb = total_steenrod(a), total_steenrod(theta(a))
                    if any(theta(ta[k]) != tb[k] for k in range(d + 1)):
                        problems.append(("restriction", g, s, ell, i, j))
        for i in range(L.category.size):
            strata += 1
            if not check_stratum_stability(L, i).passed:
                problems.append(("stability", g, s, ell, i))
    ok = not problems and cartan_cases >= 100
    return ok, f"cartan cases={cartan_cases} morphisms={morphisms} strata={strata} problems={problems[:5]}"


def criterion_8():
    problems = []
    for g, s, ell in shipped_examples():
        G = group(g)
        cat = category(g, s, ell)
        action = element_action(G, space(s, len(G.generators)))
        spec = stratify(limit(g, s, ell, 12, True))
        n = cat.size
        for i in range(n):
            st = spec.strata[i]
            if st.dim != cat.objects[i].rank or not weyl_faithful(st):
                problems.append(("stratum", g, s, i))
            for j in range(n):
                subconj = bool(pair_transporter_elements(G, action, cat.objects[i], cat.objects[j]))
                if spec.leq(i, j) != subconj:
                    problems.append(("poset", g, s, i, j))
                if kernel_containment(spec, i, j) != spec.leq(i, j):
                    problems.append(("kernel", g, s, i, j))
    return not problems, f"{len(shipped_examples())} examples, problems={problems[:5]}"


def criterion_9():
    fans = {"P1": projective_space_fan(1), "P2": projective_space_fan(2),
            "P1xP1": product_fan(projective_space_fan(1), projective_space_fan(1))}
    notes, ok = [], True
    for name, fan in fans.items():
        for ell in (2, 3):
            t = time.perf_counter()
            cmp = compare(fan, ell, 8)
            dt = time.perf_counter() - t
            good = cmp.pp_dims == cmp.limit_dims == cmp.sr_dims and len(cmp.pp_dims) == 9 and dt < 5.0
            ok &= good
            notes.append(f"{name}/l={ell}:{'ok' if good else 'FAIL'}({dt:.2f}s)")
    return ok, " ".join(notes)


COUNT_CASES = [("z2", 2), ("s3", 2), ("d8", 2), ("a4", 2), ("s4", 2), ("s3", 3)]


def criterion_10():
    got = {}
    ok = True
    for g, ell in COUNT_CASES:
        engine = len(enumerate_elab(group(g), ell))
        brute = oracles.elab_class_count(g, ell)
        got[f"{g}/l={ell}"] = engine
        ok &= engine == brute
    return ok, f"counts={got}"


CRITERIA = {
    1: ("classical presentations", criterion_1),
    2: ("frobenius example", criterion_2),
    3: ("freeness identity", criterion_3),
    4: ("equalizer vs brute-force oracle", criterion_4),
    5: ("normal-case reduction", criterion_5),
    6: ("pole order = max rank", criterion_6),
    7: ("steenrod suite", criterion_7),
    8: ("stratification suite", criterion_8),
    9: ("toric suite", criterion_9),
    10: ("enumeration counts", criterion_10),
}


def run_criterion(k: int) -> tuple[bool, str]:
    name, fn = CRITERIA[k]
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[k] = (ok, detail)
    return ok, detail


def summary_line(k: int) -> str:
    ok, detail = RESULTS[k]
    return f"criterion {k:2d} [{'PASS' if ok else 'FAIL'}] {CRITERIA[k][0]}: {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, _ = run_criterion(k)
    print(summary_line(k))
    assert ok, summary_line(k)


if __name__ == "__main__":
    status = 0
    for k in sorted(CRITERIA):
        ok, _ = run_criterion(k)
        print(summary_line(k))
        status |= not ok
    sys.exit(status)
