from __future__ import annotations

import json
import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from qstrat.gcomplex import GComplex, complex_from_json  # noqa: E402
from qstrat.permgroup import group_from_json  # noqa: E402
from qstrat.quillen import build_category, limit_ring  # noqa: E402

from oracles import load_json  # noqa: E402



def shipped_examples() -> list[tuple[str, str, int]]:
    path = Path(__file__).resolve().parents[1] / "src" / "qstrat" / "data" / "examples.json"
    return [(e["group"], e["space"], e["ell"]) for e in json.loads(path.read_text())]


@lru_cache(maxsize=None)
def group(name: str):
    return group_from_json(load_json("groups", name))


@lru_cache(maxsize=None)
def space(name: str, ngens: int):
    if name == "point":
        return GComplex.point(ngens)
    return complex_from_json(load_json("spaces", name))


@lru_cache(maxsize=None)
def category(g: str, s: str, ell: int):
    G = group(g)
    return build_category(G, space(s, len(G.generators)), ell)


@lru_cache(maxsize=None)
def limit(g: str, s: str, ell: int, degree: int = 12, reduced: bool = False):
    return limit_ring(category(g, s, ell), degree, reduced=reduced)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.summary_line(k))
