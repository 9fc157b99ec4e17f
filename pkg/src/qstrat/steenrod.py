"""Steenrod operations on polynomial cohomology and on limit elements.

The operations are determined axiomatically on the polynomial algebras in
scope: ``P_t(g) = g + g^l t`` on each generator of degree eps (1 if l = 2,
2 otherwise), extended multiplicatively (Cartan) and F_l-linearly.  For odd
l only classes without exterior factors are supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from qstrat import linalg
from qstrat.gcalg import AlgElement, GradedAlgebra, Monomial
from qstrat.quillen import DegreeOverflow, LimitElement, LimitRing


class OddPartUnsupported(ValueError):
    pass


def step(prime: int) -> int:
    """Degree shift of ``P^1``."""
    return 1 if prime == 2 else 2 * (prime - 1)


@dataclass
class SteenrodResult:
    element: AlgElement
    degree: int
    outputs: dict[int, AlgElement] = field(default_factory=dict)

    def __getitem__(self, i: int) -> AlgElement:
        return self.outputs.get(i, self.element.algebra.zero())


def _check_algebra(alg: GradedAlgebra) -> int:
    eps = 1 if alg.prime == 2 else 2
    if any(d != eps for d in alg.poly_degrees):
        raise ValueError("Steenrod operations need polynomial generators of degree eps")
    return eps


def _monomial_total(alg: GradedAlgebra, m: Monomial) -> dict[int, dict[Monomial, int]]:
    ext, exps = m
    if ext:
        raise OddPartUnsupported("exterior factors are outside the supported range")
    p = alg.prime
    # running product of prod_k (g_k + g_k^p t)^{e_k}, keyed by power of t
    acc: dict[int, dict[tuple, int]] = {0: {(0,) * len(exps): 1}}
    for k, e in enumerate(exps):
        if not e:
            continue
        nxt: dict[int, dict[tuple, int]] = {}
        for i, terms in acc.items():
            for j in range(e + 1):
                c = comb(e, j) % p
                if not c:
                    continue
                for mon, a in terms.items():
                    new = list(mon)
                    new[k] += (e - j) + p * j
                    slot = nxt.setdefault(i + j, {})
                    key = tuple(new)
                    slot[key] = (slot.get(key, 0) + a * c) % p
        acc = nxt
    return {i: {((), mon): c for mon, c in terms.items() if c} for i, terms in acc.items()}


def total_steenrod(a: AlgElement) -> SteenrodResult:
    """All nonzero ``P^i a`` of a homogeneous element."""
    alg = a.algebra
    _check_algebra(alg)
    p = alg.prime
    deg = a.degree if a.degree is not None else 0
    outs: dict[int, dict[Monomial, int]] = {}
    for m, c in a.terms.items():
        for i, terms in _monomial_total(alg, m).items():
            slot = outs.setdefault(i, {})
            for mon, v in terms.items():
                slot[mon] = (slot.get(mon, 0) + c * v) % p
    res = {i: alg.element(t) for i, t in outs.items()}
    return SteenrodResult(a, deg, {i: e for i, e in res.items() if not e.is_zero()})


def steenrod(i: int, a: AlgElement) -> AlgElement:
    """``P^i a``; ``Sq^i`` when l = 2."""
    if i < 0:
        return a.algebra.zero()
    return total_steenrod(a)[i]


def steenrod_on_limit(L: LimitRing, elem: LimitElement) -> dict[int, LimitElement]:
    """Componentwise ``P^i`` of a limit element, re-expressed in the limit.

    Raises ``DegreeOverflow`` when some nonzero ``P^i`` lands above the
    degree bound.
    """
    comps = elem.components
    results = [total_steenrod(c) for c in comps]
    top = max((max(r.outputs, default=0) for r in results), default=0)
    s = step(L.prime)
    out = {}
    for i in range(top + 1):
        d = elem.degree + s * i
        images = [r[i] for r in results]
        if all(x.is_zero() for x in images):
            continue
        if d > L.degree_bound:
            raise DegreeOverflow(f"P^{i} lands in degree {d} > {L.degree_bound}")
        out[i] = L.from_components(d, images)
    return out


def kernel_basis(L: LimitRing, obj: int, d: int) -> np.ndarray:
    """Coordinates (rows) of a basis of ``ker(restriction to obj)`` in degree ``d``."""
    offs = L.offsets[d]
    basis = L.bases[d]
    if basis.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    proj = basis[:, offs[obj]:offs[obj + 1]]
    return linalg.nullspace(proj.T, L.prime, basis.shape[0])


@dataclass
class StabilityReport:
    object: int
    checked: int
    failures: list[tuple[int, int, int]]  # (degree, kernel index, i)
    degree_bound: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"object": self.object, "checked": self.checked, "passed": self.passed,
                "failures": [list(f) for f in self.failures], "degree_bound": self.degree_bound}


def check_stratum_stability(L: LimitRing, obj: int) -> StabilityReport:
    """Check that ``P^i`` maps the kernel of the restriction to ``obj`` into itself.

    Kernel elements are taken up to degree ``D - 2(l-1)``; every ``P^i``
    landing within the bound is tested.
    """
    s = step(L.prime)
    limit_deg = L.degree_bound - 2 * (L.prime - 1)
    failures = []
    checked = 0
    for d in range(0, limit_deg + 1):
        kb = kernel_basis(L, obj, d)
        for k, coords in enumerate(kb):
            elem = L.element(d, coords)
            results = [total_steenrod(c) for c in elem.components]
            top = max((max(r.outputs, default=0) for r in results), default=0)
            for i in range(top + 1):
                if d + s * i > L.degree_bound:
                    break
                images = [r[i] for r in results]
                img = L.from_components(d + s * i, images)
                checked += 1
                if not img.components[obj].is_zero():
                    failures.append((d, k, i))
    return StabilityReport(obj, checked, failures, L.degree_bound)
