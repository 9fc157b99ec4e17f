"""Quillen category of pairs (A, C), the presheaf of H*(BA), and its limit.

The limit is computed degree by degree as the equalizer of

    prod_i H^d(BA_i)  ==>  prod_{u: i -> j} H^d(BA_i),

i.e. the null space of the stacked constraints ``theta_u(h_j) - h_i = 0``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from qstrat import linalg
from qstrat.gcalg import AlgElement, AlgebraMorphism, GradedAlgebra, cohomology_of_BA, linear_morphism
from qstrat.gcomplex import (
    Component,
    GComplex,
    PairObject,
    components,
    element_action,
    fixed_subcomplex,
)
from qstrat.permgroup import ElabSubgroup, FiniteGroup, GroupHom, centralizer, conjugation_hom, enumerate_elab, normalizer

DEFAULT_DEGREE = 12
DEFAULT_FIT_MAX = 16


class ObjectNotFound(KeyError):
    pass


class NotInLimit(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


class Unfitted(RuntimeError):
    """No candidate denominator reproduces the series; raise the degree bound."""


@dataclass(eq=False)
class QuillenCategory:
    """Skeleton of the category: objects with an elementary abelian ``A`` and hom sets.

    ``homs[(i, j)]`` holds the distinct induced homs ``A_i -> A_j``; an empty
    tuple means no morphism.  Objects only need ``rank`` and ``prime``
    attributes, so cone categories of fans reuse the same machinery.
    """

    prime: int
    objects: list
    homs: dict[tuple[int, int], tuple[GroupHom, ...]]
    # |Trans((A,C),(A,C))| and |Cent(A,C)| per object, when built from a group
    aut_counts: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.objects)

    @property
    def max_rank(self) -> int:
        return max((o.rank for o in self.objects), default=-1)

    def hom(self, i: int, j: int) -> tuple[GroupHom, ...]:
        return self.homs.get((i, j), ())

    def index(self, obj) -> int:
        if isinstance(obj, int):
            if not 0 <= obj < len(self.objects):
                raise ObjectNotFound(obj)
            return obj
        for i, o in enumerate(self.objects):
            if o == obj:
                return i
        raise ObjectNotFound(obj)

    def to_json(self) -> list:
        return [o.to_json() for o in self.objects]


def _component_orbit_rep(comp: Component, norm: Sequence, action) -> Component:
    imgs = {comp.image(action[g]) for g in norm}
    return Component(min(imgs, key=lambda s: (min(s), sorted(s))))


def build_category(G: FiniteGroup, X: GComplex, prime: int) -> QuillenCategory:
    """Skeleton of the category of pairs ``(A, C)`` with its hom sets.

    Objects run over conjugacy-class representatives ``A`` paired with
    representatives of the ``N_G(A)``-orbits of components of ``X^A``.
    """
    action = element_action(G, X)
    objects: list[PairObject] = []
    for A in enumerate_elab(G, prime):
        comps = components(fixed_subcomplex(X, A, action))
        if not comps:
            continue
        norm = normalizer(G, A)
        reps = sorted({_component_orbit_rep(c, norm, action) for c in comps}, key=lambda c: c.id)
        objects.extend(PairObject(A, c) for c in reps)

    homs: dict[tuple[int, int], tuple[GroupHom, ...]] = {}
    aut_counts: dict[int, tuple[int, int]] = {}
    for i, src in enumerate(objects):
        cent = [g for g in centralizer(G, src.A) if src.C.image(action[g]) == src.C.vertex_set]
        for j, dst in enumerate(objects):
            if src.rank > dst.rank:
                continue
            fibers: dict[GroupHom, int] = {}
            for g in G.elements:
                u = conjugation_hom(src.A, dst.A, g)
                if u is None or not src.C.image(action[g]) >= dst.C.vertex_set:
                    continue
                fibers[u] = fibers.get(u, 0) + 1
            # Cent(A,C) \ Trans((A,C),(A',C')) -> Hom(A, A') must be injective
            if any(n != len(cent) for n in fibers.values()):
                raise AssertionError(f"hom set ({i},{j}) is not a free quotient by Cent(A,C)")
            if fibers:
                homs[(i, j)] = tuple(sorted(fibers, key=lambda u: u.matrix))
            if i == j:
                aut_counts[i] = (sum(fibers.values()), len(cent))
    return QuillenCategory(prime, objects, homs, aut_counts)


# -- limit ------------------------------------------------------------------

@dataclass(eq=False)
class LimitElement:
    ring: "LimitRing"
    degree: int
    vector: np.ndarray

    @property
    def components(self) -> list[AlgElement]:
        return self.ring.split(self.degree, self.vector)

    @property
    def coordinates(self) -> np.ndarray:
        return self.ring.coordinates(self.degree, self.vector)

    def __mul__(self, other: "LimitElement") -> "LimitElement":
        return self.ring.multiply(self, other)

    def __add__(self, other: "LimitElement") -> "LimitElement":
        if other.degree != self.degree:
            raise ValueError("sum of elements of different degrees")
        return LimitElement(self.ring, self.degree, (self.vector + other.vector) % self.ring.prime)

    def is_zero(self) -> bool:
        return not self.vector.any()


class LimitRing:
    """Degreewise basis of ``lim H*(BA)`` over a :class:`QuillenCategory`.

    With ``reduced=True`` and odd l every ``H*(BA)`` is replaced by its
    nilpotent-free even part ``F_l[y_1..y_r]``; for l = 2 the two agree.
    """

    def __init__(self, category: QuillenCategory, degree_bound: int = DEFAULT_DEGREE,
                 reduced: bool = False, threads: int = 1, algebras: Sequence[GradedAlgebra] | None = None):
        if degree_bound < 0:
            raise ValueError("degree bound must be >= 0")
        self.category = category
        self.prime = category.prime
        self.degree_bound = degree_bound
        self.reduced = reduced
        self.epsilon = 1 if self.prime == 2 else 2
        if algebras is None:
            algebras = [cohomology_of_BA(o.rank, self.prime, reduced=reduced) for o in category.objects]
        self.algebras = list(algebras)
        self._morphisms: dict[tuple[int, int, GroupHom], AlgebraMorphism] = {}
        for (i, j), us in category.homs.items():
            for u in us:
                self._morphisms[(i, j, u)] = linear_morphism(self.algebras[j], self.algebras[i], u.matrix)
        degrees = range(degree_bound + 1)
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(self._solve, degrees))
        else:
            results = [self._solve(d) for d in degrees]
        self.offsets = [r[0] for r in results]
        self.bases = [r[1] for r in results]
        self.free = [linalg.free_columns(b) for b in self.bases]

    def morphism(self, i: int, j: int, u: GroupHom) -> AlgebraMorphism:
        """``theta_u: H*(BA_j) -> H*(BA_i)``."""
        return self._morphisms[(i, j, u)]

    def constraint_matrix(self, d: int) -> tuple[list[int], np.ndarray]:
        p = self.prime
        sizes = [a.free_dim(d) for a in self.algebras]
        offsets = [0] + list(itertools.accumulate(sizes))
        total = offsets[-1]
        rows = []
        for (i, j), us in sorted(self.category.homs.items()):
            for u in us:
                if i == j and u.is_identity():
                    continue
                theta = self._morphisms[(i, j, u)].matrix(d)
                block = np.zeros((sizes[i], total), dtype=np.int64)
                block[:, offsets[j]:offsets[j + 1]] += theta
                block[:, offsets[i]:offsets[i + 1]] -= np.eye(sizes[i], dtype=np.int64)
                rows.append(block % p)
        mat = np.vstack(rows) if rows else np.zeros((0, total), dtype=np.int64)
        return offsets, mat

    def _solve(self, d: int) -> tuple[list[int], np.ndarray]:
        offsets, mat = self.constraint_matrix(d)
        return offsets, linalg.nullspace(mat, self.prime, offsets[-1])

    # -- queries ---------------------------------------------------------
    @property
    def dims(self) -> list[int]:
        return [b.shape[0] for b in self.bases]

    def dim(self, d: int) -> int:
        return self.bases[d].shape[0] if 0 <= d <= self.degree_bound else 0

    def _check_degree(self, d: int) -> None:
        if not 0 <= d <= self.degree_bound:
            raise DegreeOverflow(f"degree {d} outside computed range 0..{self.degree_bound}")

    def basis(self, d: int) -> list[LimitElement]:
        self._check_degree(d)
        return [LimitElement(self, d, v.copy()) for v in self.bases[d]]

    def element(self, d: int, coords) -> LimitElement:
        self._check_degree(d)
        coords = np.asarray(coords, dtype=np.int64)
        vec = (coords @ self.bases[d]) % self.prime if len(coords) else np.zeros(
            self.offsets[d][-1], dtype=np.int64)
        return LimitElement(self, d, vec)

    def split(self, d: int, vec) -> list[AlgElement]:
        offs = self.offsets[d]
        return [alg.from_vector(vec[offs[i]:offs[i + 1]], d) for i, alg in enumerate(self.algebras)]

    def join(self, d: int, comps: Sequence[AlgElement]) -> np.ndarray:
        return np.concatenate([alg.vector(c, d) for alg, c in zip(self.algebras, comps)]).astype(np.int64)

    def coordinates(self, d: int, vec) -> np.ndarray:
        """Coordinates of a tuple in the limit basis; ``NotInLimit`` if it is not compatible."""
        self._check_degree(d)
        vec = np.asarray(vec, dtype=np.int64) % self.prime
        coords = vec[self.free[d]] if self.free[d] else np.zeros(0, dtype=np.int64)
        back = (coords @ self.bases[d]) % self.prime if len(coords) else np.zeros_like(vec)
        if not np.array_equal(back, vec):
            raise NotInLimit(f"tuple is not in the degree-{d} limit")
        return coords

    def from_components(self, d: int, comps: Sequence[AlgElement]) -> LimitElement:
        vec = self.join(d, comps)
        self.coordinates(d, vec)
        return LimitElement(self, d, vec % self.prime)

    def multiply(self, a: LimitElement, b: LimitElement) -> LimitElement:
        d = a.degree + b.degree
        self._check_degree(d)
        prods = [x * y for x, y in zip(a.components, b.components)]
        return self.from_components(d, prods)

    def verify(self) -> bool:
        """Re-check every basis tuple against every hom by direct substitution."""
        for d in range(self.degree_bound + 1):
            for e in self.basis(d):
                comps = e.components
                for (i, j), us in self.category.homs.items():
                    for u in us:
                        if self._morphisms[(i, j, u)](comps[j]) != comps[i]:
                            return False
        return True


def limit_ring(cat: QuillenCategory, degree_bound: int = DEFAULT_DEGREE, reduced: bool = False,
               threads: int = 1) -> LimitRing:
    return LimitRing(cat, degree_bound, reduced, threads)


def restriction_to_pair(L: LimitRing, elem: LimitElement, obj) -> AlgElement:
    """Component of a limit element at an object (index or object)."""
    return elem.components[L.category.index(obj)]


# -- Poincare series --------------------------------------------------------

@dataclass
class PoincareSeries:
    coefficients: list[int]
    numerator: list[int] | None = None
    denominator_indices: list[int] | None = None
    pole_order: int | None = None

    @property
    def fitted(self) -> bool:
        return self.numerator is not None

    def expand(self, upto: int) -> list[int]:
        """Power-series coefficients of the fitted form up to ``upto``."""
        if not self.fitted:
            raise Unfitted("series has no fitted form")
        return series_of(self.numerator, self.denominator_indices, upto)

    def to_json(self) -> dict:
        fitted = None
        if self.fitted:
            fitted = {"numerator": self.numerator, "denominator_indices": self.denominator_indices}
        return {"dims": self.coefficients, "fitted": fitted, "pole_order": self.pole_order}


def series_of(numerator: Sequence[int], denominator_indices: Sequence[int], upto: int) -> list[int]:
    """Expand ``numerator / prod (1 - t^(2i))`` to degree ``upto``."""
    out = [0] * (upto + 1)
    for k, c in enumerate(numerator[: upto + 1]):
        out[k] = c
    for i in denominator_indices:
        step = 2 * i
        for n in range(step, upto + 1):
            out[n] += out[n - step]
    return out


def _multisets(max_degree: int):
    def rec(start, budget):
        yield ()
        for i in range(start, budget // 2 + 1):
            for rest in rec(i, budget - 2 * i):
                yield (i,) + rest
    cands = set(rec(1, max_degree))
    return sorted(cands, key=lambda m: (len(m), sum(m), m))


def _times_one_minus(series: list[int], step: int) -> list[int]:
    out = list(series)
    for n in range(len(series) - 1, step - 1, -1):
        out[n] -= series[n - step]
    return out


def root_multiplicity_at_one(poly: Sequence[int]) -> int:
    poly = list(poly)
    mult = 0
    while poly and any(poly) and sum(poly) == 0:
        # synthetic division by (t - 1)
        q = []
        acc = 0
        for c in reversed(poly):
            acc += c
            q.append(acc)
        q.pop()
        poly = list(reversed(q))
        mult += 1
    return mult


def fit_rational(coeffs: Sequence[int], max_denom_degree: int = DEFAULT_FIT_MAX) -> PoincareSeries:
    """Fit ``P(t) / prod (1 - t^(2i))`` to the coefficients.

    Candidate denominators are tried by (number of factors, degree).  A
    candidate is accepted when the product with the series vanishes over the
    last ``max(4, D // 3)`` coefficients.  Denominators of degree above ``D``
    are not tried: the data cannot distinguish them.  Returns an unfitted
    series when no candidate works.
    """
    coeffs = [int(c) for c in coeffs]
    D = len(coeffs) - 1
    window = max(4, D // 3)
    top = D - window
    for cand in _multisets(min(max_denom_degree, D)):
        prod = coeffs
        for i in cand:
            prod = _times_one_minus(prod, 2 * i)
        if top < -1 or any(prod[top + 1:]):
            continue
        numerator = prod[: top + 1]
        while numerator and numerator[-1] == 0:
            numerator.pop()
        pole = len(cand) - root_multiplicity_at_one(numerator)
        return PoincareSeries(coeffs, numerator, list(cand), pole)
    return PoincareSeries(coeffs)


def poincare(L: LimitRing, max_denom_degree: int = DEFAULT_FIT_MAX) -> PoincareSeries:
    return fit_rational(L.dims, max_denom_degree)
