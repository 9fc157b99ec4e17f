"""Finite G-simplicial complexes, fixed subcomplexes and pair transporters.

``X^A`` is taken to be the full subcomplex on the A-fixed vertices.  That is
the topological fixed set only when the action is regular (a simplex fixed
setwise is fixed pointwise); pass the complex through :func:`subdivide`
first when it is not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from qstrat.permgroup import (
    ElabSubgroup,
    FiniteGroup,
    GroupHom,
    Perm,
    closure,
    conjugation_hom,
    group_cap,
)


class ActionError(ValueError):
    pass


def _maximal(faces: Iterable[frozenset]) -> tuple[frozenset, ...]:
    faces = set(f for f in faces if f)
    out = [f for f in faces if not any(f < g for g in faces)]
    return tuple(sorted(out, key=lambda f: (sorted(f), len(f))))


@dataclass(frozen=True, eq=False)
class GComplex:
    """Simplicial complex on ``range(vertices)`` given by facets.

    ``action`` lists one vertex permutation per group generator, aligned with
    the generator order of the group file.  Subcomplexes produced by
    :func:`fixed_subcomplex` carry an empty action.
    """

    vertices: int
    facets: tuple[frozenset, ...]
    action: tuple[Perm, ...] = ()

    @classmethod
    def build(cls, vertices: int, facets: Iterable[Iterable[int]],
              action: Iterable[Sequence[int]] = ()) -> "GComplex":
        fs = _maximal(frozenset(f) for f in facets)
        act = tuple(Perm(a) for a in action)
        for a in act:
            if sorted(a) != list(range(vertices)):
                raise ActionError(f"{list(a)} is not a permutation of {vertices} vertices")
        return cls(vertices, fs, act)

    @classmethod
    def point(cls, ngens: int) -> "GComplex":
        return cls(1, (frozenset([0]),), tuple(Perm([0]) for _ in range(ngens)))

    @cached_property
    def support(self) -> frozenset:
        return frozenset().union(*self.facets) if self.facets else frozenset()

    def is_face(self, s: frozenset) -> bool:
        return any(s <= f for f in self.facets)

    def faces(self) -> list[frozenset]:
        out = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out.update(frozenset(c) for c in itertools.combinations(sorted(f), k))
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "facets": [sorted(f) for f in self.facets],
            "action": [list(a) for a in self.action],
        }


def complex_from_json(data: dict) -> GComplex:
    X = GComplex.build(data["vertices"], data["facets"], data.get("action", []))
    if X.support != frozenset(range(X.vertices)):
        raise ActionError("every vertex must lie in some facet")
    return X


def element_action(G: FiniteGroup, X: GComplex) -> dict[Perm, Perm]:
    """Extend the generator action to every group element.

    The group and vertex permutations are closed jointly; the action is a
    homomorphism iff each group element picks up a single vertex permutation.
    """
    if len(X.action) != len(G.generators):
        raise ActionError(
            f"complex gives {len(X.action)} generator actions, group has {len(G.generators)}")
    n, m = G.degree, X.vertices
    joint = [tuple(g) + tuple(n + v for v in a) for g, a in zip(G.generators, X.action)]
    out: dict[Perm, Perm] = {}
    for e in closure(joint, n + m, group_cap() * max(1, m)):
        g = Perm(e[:n])
        v = Perm(x - n for x in e[n:])
        if out.setdefault(g, v) != v:
            raise ActionError("vertex action is not a homomorphism of the group")
    if len(out) != G.order:
        raise ActionError("joint closure does not cover the group")
    for v in set(out.values()):
        for f in X.facets:
            if not X.is_face(frozenset(v[i] for i in f)):
                raise ActionError("action does not map faces to faces")
    return out


@dataclass(frozen=True)
class Component:
    vertex_set: frozenset

    @property
    def id(self) -> int:
        return min(self.vertex_set)

    def image(self, v: Perm) -> frozenset:
        return frozenset(v[i] for i in self.vertex_set)

    def to_json(self) -> list[int]:
        return sorted(self.vertex_set)


@dataclass(frozen=True)
class PairObject:
    A: ElabSubgroup
    C: Component

    @property
    def rank(self) -> int:
        return self.A.rank

    @property
    def prime(self) -> int:
        return self.A.prime

    def to_json(self) -> dict:
        return {"rank": self.A.rank, "basis": [list(b) for b in self.A.basis],
                "component": self.C.to_json()}


def fixed_vertices(X: GComplex, A: ElabSubgroup, action: dict[Perm, Perm]) -> frozenset:
    fixed = set(X.support)
    for a in A.basis:
        v = action[a]
        fixed = {i for i in fixed if v[i] == i}
    return frozenset(fixed)


def fixed_subcomplex(X: GComplex, A: ElabSubgroup, action: dict[Perm, Perm]) -> GComplex:
    """Full subcomplex of ``X`` on the vertices fixed by every element of ``A``."""
    fixed = fixed_vertices(X, A, action)
    return GComplex(X.vertices, _maximal(f & fixed for f in X.facets))


def components(X: GComplex) -> list[Component]:
    """Connected components of the 1-skeleton, ordered by minimal vertex."""
    parent = {v: v for v in X.support}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for f in X.facets:
        vs = sorted(f)
        for w in vs[1:]:
            ra, rb = find(vs[0]), find(w)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set] = {}
    for v in X.support:
        groups.setdefault(find(v), set()).add(v)
    return sorted((Component(frozenset(s)) for s in groups.values()), key=lambda c: c.id)


def pair_transporter_elements(G: FiniteGroup, action: dict[Perm, Perm],
                              src: PairObject, dst: PairObject) -> list[Perm]:
    """``{g : g^-1 A g <= A', C.g >= C'}``."""
    out = []
    for g in G.elements:
        if not all(a.conj(g) in dst.A for a in src.A.basis):
            continue
        if src.C.image(action[g]) >= dst.C.vertex_set:
            out.append(g)
    return out


def pair_transporter(G: FiniteGroup, action: dict[Perm, Perm],
                     src: PairObject, dst: PairObject) -> set[GroupHom]:
    """Morphisms ``src -> dst`` of the Quillen category as induced homs ``A -> A'``."""
    return {conjugation_hom(src.A, dst.A, g)
            for g in pair_transporter_elements(G, action, src, dst)}


def subdivide(X: GComplex) -> GComplex:
    """Barycentric subdivision with the induced action on faces."""
    faces = X.faces()
    idx = {f: i for i, f in enumerate(faces)}
    chains = []
    for f in X.facets:
        for order in itertools.permutations(sorted(f)):
            chains.append(frozenset(idx[frozenset(order[:k])] for k in range(1, len(order) + 1)))
    action = []
    for a in X.action:
        action.append(Perm(idx[frozenset(a[v] for v in f)] for f in faces))
    return GComplex(len(faces), _maximal(chains), tuple(action))
