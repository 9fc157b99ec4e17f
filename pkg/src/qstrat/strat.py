"""Combinatorial shadow of the stratification of Spec of the reduced limit.

One stratum per object (A, C): its dimension (rank of A), its Weyl group as
matrices, and the degreewise kernel of the restriction to (A, C).  The
containment order of strata is subconjugacy of objects, and the kernels
must reverse it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qstrat import linalg
from qstrat.quillen import LimitRing
from qstrat.steenrod import kernel_basis


@dataclass
class Stratum:
    index: int
    object: object
    dim: int
    weyl: tuple
    weyl_expected: int | None
    kernel_bases: list[np.ndarray]

    @property
    def weyl_order(self) -> int:
        return len(self.weyl)

    @property
    def kernel_dims(self) -> list[int]:
        return [k.shape[0] for k in self.kernel_bases]


@dataclass
class StratifiedSpectrum:
    limit: LimitRing
    strata: list[Stratum]
    # below[i] = set of j with stratum i <= stratum j (a morphism i -> j exists)
    below: dict[int, set[int]] = field(default_factory=dict)

    @property
    def max_rank(self) -> int:
        return max((s.dim for s in self.strata), default=-1)

    def leq(self, i: int, j: int) -> bool:
        return j in self.below[i]

    def parents(self, i: int) -> list[int]:
        """Strata directly above ``i`` in the containment order."""
        ups = [j for j in self.below[i] if j != i and not self.leq(j, i)]
        return sorted(j for j in ups
                      if not any(k != j and self.leq(k, j) and not self.leq(j, k) for k in ups))

    def to_json(self) -> list[dict]:
        return [{
            "object": s.object.to_json(),
            "dim": s.dim,
            "weyl_order": s.weyl_order,
            "kernel_dims": s.kernel_dims,
            "parents": self.parents(s.index),
        } for s in self.strata]


def stratify(L: LimitRing) -> StratifiedSpectrum:
    cat = L.category
    strata = []
    for i, obj in enumerate(cat.objects):
        weyl = tuple(u.matrix for u in cat.hom(i, i))
        counts = cat.aut_counts.get(i)
        expected = counts[0] // counts[1] if counts else None
        kernels = []
        for d in range(L.degree_bound + 1):
            kb = kernel_basis(L, i, d)
            kernels.append(kb if kb.size else np.zeros((0, L.dim(d)), dtype=np.int64))
        strata.append(Stratum(i, obj, obj.rank, weyl, expected, kernels))
    below = {i: {j for j in range(cat.size) if cat.hom(i, j)} for i in range(cat.size)}
    return StratifiedSpectrum(L, strata, below)


def weyl_faithful(s: Stratum) -> bool:
    """Distinct group elements give distinct automorphisms of ``A``.

    Only the identity coset may act as the identity matrix, and the number of
    distinct matrices must equal ``|Trans((A,C),(A,C))| / |Cent(A,C)|``.
    """
    r = s.dim
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    if sum(1 for w in s.weyl if w == ident) != 1:
        return False
    if len(set(s.weyl)) != len(s.weyl):
        return False
    return s.weyl_expected is None or s.weyl_expected == len(s.weyl)


def kernel_containment(spec: StratifiedSpectrum, s1: int, s2: int) -> bool:
    """True iff ``ker(s2) <= ker(s1)`` in every degree up to the bound."""
    p = spec.limit.prime
    a, b = spec.strata[s1], spec.strata[s2]
    for k1, k2 in zip(a.kernel_bases, b.kernel_bases):
        if k2.shape[0] == 0:
            continue
        if not linalg.span_contains(k1, k2, p):
            return False
    return True
