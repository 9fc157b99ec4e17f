"""Finite permutation groups and their elementary abelian l-subgroups.

Permutations act on the right: ``i^g = g[i]`` and ``(g*h)[i] = h[g[i]]``.
Groups are materialized as sorted element lists, which is fine at desk
scale (order cap 20160 by default, ``QSTRAT_CAP`` overrides).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_CAP = 20160


class CapExceeded(RuntimeError):
    pass


class DegreeMismatch(ValueError):
    pass


def group_cap() -> int:
    return int(os.environ.get("QSTRAT_CAP", DEFAULT_CAP))


class Perm(tuple):
    """A permutation of ``{0..n-1}`` stored as its image tuple."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(other[i] for i in self)

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Perm(inv)

    def conj(self, g: "Perm") -> "Perm":
        """``g^-1 * self * g``."""
        out = [0] * len(self)
        for i in range(len(self)):
            out[g[i]] = g[self[i]]
        return Perm(out)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def order(self) -> int:
        seen = [False] * len(self)
        o = 1
        for i in range(len(self)):
            if seen[i]:
                continue
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self[j]
                n += 1
            o = o * n // _gcd(o, n)
        return o

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out = Perm.identity(len(self))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"Perm({list(self)})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def closure(generators: Sequence[tuple], degree: int, cap: int) -> list[tuple]:
    """All products of ``generators`` (as image tuples); BFS by right multiplication."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[Perm, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g) -> bool:
        return g in self.index

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a, b in itertools.combinations(self.generators, 2))

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": [list(g) for g in self.generators]}


def enumerate_elements(generators: Sequence[Sequence[int]], degree: int | None = None,
                       cap: int | None = None) -> FiniteGroup:
    """Materialize the group generated by ``generators``."""
    gens = [Perm(g) for g in generators]
    if degree is None:
        if not gens:
            raise DegreeMismatch("degree required for an empty generating set")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree:
            raise DegreeMismatch(f"generator {list(g)} has degree {len(g)}, expected {degree}")
        if sorted(g) != list(range(degree)):
            raise ValueError(f"{list(g)} is not a permutation")
    elems = closure(gens, degree, cap if cap is not None else group_cap())
    return FiniteGroup(degree, tuple(gens), tuple(Perm(e) for e in elems))


def group_from_json(data: dict, cap: int | None = None) -> FiniteGroup:
    return enumerate_elements(data["generators"], data["degree"], cap)


@dataclass(frozen=True)
class ElabSubgroup:
    """Elementary abelian l-subgroup given by an F_l-basis of commuting elements."""

    basis: tuple[Perm, ...]
    prime: int
    degree: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def coords(self) -> dict[Perm, tuple[int, ...]]:
        """Element -> exponent vector in the basis."""
        out = {}
        ident = Perm.identity(self.degree)
        powers = [[ident] for _ in self.basis]
        for k, b in enumerate(self.basis):
            for _ in range(self.prime - 1):
                powers[k].append(powers[k][-1] * b)
        for exps in itertools.product(range(self.prime), repeat=self.rank):
            x = ident
            for k, e in enumerate(exps):
                x = x * powers[k][e]
            out[x] = exps
        return out

    @cached_property
    def elements(self) -> frozenset[Perm]:
        return frozenset(self.coords)

    def __contains__(self, g) -> bool:
        return g in self.coords

    def verify(self) -> None:
        """Re-check the three defining invariants; raise ``ValueError`` on failure."""
        for b in self.basis:
            if b.order() != self.prime:
                raise ValueError(f"basis element {b!r} does not have order {self.prime}")
        for a, b in itertools.combinations(self.basis, 2):
            if a * b != b * a:
                raise ValueError("basis elements do not commute")
        if len(self.coords) != self.prime ** self.rank:
            raise ValueError("basis is not F_l-independent")

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": [list(b) for b in self.basis]}


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism of elementary abelian groups as an ``r' x r`` matrix over F_l.

    Column ``k`` holds the coordinates (in the target basis) of the image of
    the k-th source basis element.
    """

    source: object
    target: object
    matrix: tuple[tuple[int, ...], ...]

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self o other`` (apply ``other`` first)."""
        p = self.source.prime
        rows = len(self.matrix)
        inner = len(other.matrix)
        cols = other.source.rank
        m = tuple(
            tuple(sum(self.matrix[i][j] * other.matrix[j][k] for j in range(inner)) % p
                  for k in range(cols))
            for i in range(rows)
        )
        return GroupHom(other.source, self.target, m)

    def is_identity(self) -> bool:
        return all(v == (i == j) for i, row in enumerate(self.matrix) for j, v in enumerate(row))


def conjugation_hom(A: ElabSubgroup, B: ElabSubgroup, g: Perm) -> GroupHom | None:
    """``c_g: a -> g^-1 a g`` as a hom ``A -> B``, or ``None`` if it does not land in ``B``."""
    cols = []
    for a in A.basis:
        c = B.coords.get(a.conj(g))
        if c is None:
            return None
        cols.append(c)
    matrix = tuple(tuple(cols[k][i] for k in range(A.rank)) for i in range(B.rank))
    return GroupHom(A, B, matrix)


def _canonical_basis(elems: Iterable[Perm], prime: int, degree: int) -> tuple[Perm, ...]:
    ident = Perm.identity(degree)
    span = {ident}
    basis: list[Perm] = []
    for x in sorted(Perm(e) for e in elems):
        if x in span:
            continue
        basis.append(x)
        new = set(span)
        for s in span:
            y = s
            for _ in range(prime - 1):
                y = y * x
                new.add(y)
        span = new
    return tuple(basis)


def _conj_set(elems: frozenset, g: Perm) -> frozenset:
    return frozenset(x.conj(g) for x in elems)


def subgroup_orbit(G: FiniteGroup, elems: frozenset) -> set[frozenset]:
    """G-conjugates of a subgroup given as its element set."""
    orbit = {elems}
    frontier = [elems]
    while frontier:
        nxt = []
        for s in frontier:
            for g in G.generators:
                t = _conj_set(s, g)
                if t not in orbit:
                    orbit.add(t)
                    nxt.append(t)
        frontier = nxt
    return orbit


def _sort_key(elems: Iterable[Perm]) -> tuple:
    return tuple(sorted(elems))


def elab_from_elements(elems: Iterable[Perm], prime: int, degree: int) -> ElabSubgroup:
    return ElabSubgroup(_canonical_basis(elems, prime, degree), prime, degree)


def enumerate_elab(G: FiniteGroup, prime: int) -> list[ElabSubgroup]:
    """Conjugacy-class representatives of elementary abelian ``prime``-subgroups.

    Each class is represented by its lexicographically minimal sorted element
    list; the trivial subgroup is included.  Sorted by ``(rank, elements)``.
    """
    if prime < 2 or any(prime % q == 0 for q in range(2, int(prime ** 0.5) + 1)):
        raise ValueError(f"{prime} is not prime")
    ident = G.identity
    order_p = [x for x in G.elements if not x.is_identity() and x.order() == prime]
    level = {frozenset([ident])}
    reps: list[frozenset] = list(level)
    while level:
        nxt: set[frozenset] = set()
        for A in level:
            for x in order_p:
                if x in A or any(x * a != a * x for a in A):
                    continue
                B = set(A)
                y = ident
                for _ in range(prime - 1):
                    y = y * x
                    B.update(a * y for a in A)
                B = frozenset(B)
                nxt.add(min(subgroup_orbit(G, B), key=_sort_key))
        level = nxt
        reps.extend(level)
    groups = [elab_from_elements(s, prime, G.degree) for s in reps]
    groups.sort(key=lambda A: (A.rank, _sort_key(A.elements)))
    return groups


def transporter(G: FiniteGroup, A: ElabSubgroup, B: ElabSubgroup) -> list[Perm]:
    """``{g in G : g^-1 A g <= B}`` by exhaustive scan."""
    return [g for g in G.elements if all(a.conj(g) in B for a in A.basis)]


def centralizer(G: FiniteGroup, A: ElabSubgroup) -> list[Perm]:
    return [g for g in G.elements if all(a.conj(g) == a for a in A.basis)]


def normalizer(G: FiniteGroup, A: ElabSubgroup) -> list[Perm]:
    return transporter(G, A, A)


@dataclass(frozen=True)
class MatrixGroup:
    """Finite subgroup of GL_r(F_l) given by all of its elements."""

    prime: int
    rank: int
    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def order(self) -> int:
        return len(self.matrices)


def weyl_group(G: FiniteGroup, A: ElabSubgroup) -> MatrixGroup:
    """Image of ``N_G(A)`` in ``Aut(A) = GL_r(F_l)`` under conjugation."""
    mats = {conjugation_hom(A, A, g).matrix for g in normalizer(G, A)}
    return MatrixGroup(A.prime, A.rank, tuple(sorted(mats)))
