"""Graded-commutative algebras over F_l shaped like H*(BA, F_l).

A monomial is a pair ``(ext, exps)``: ``ext`` is a sorted tuple of exterior
generator indices (each of degree 1) and ``exps`` the exponent vector of the
polynomial generators.  Exterior generators anticommute and square to zero;
polynomial generators have even degree, or degree 1 when l = 2, and are
central.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from qstrat import linalg

Monomial = tuple[tuple[int, ...], tuple[int, ...]]


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GradedAlgebra:
    """Free graded-commutative algebra ``/\\(x_1..x_e) (x) F_l[y_1..y_s]``, optionally a quotient.

    ``kind`` is ``"poly"`` (no exterior part) or ``"ext_poly"`` (``e = s``,
    ``y_i`` of degree 2 is the Bockstein of ``x_i``).  ``relations`` holds
    homogeneous elements (as sorted term tuples) generating the ideal
    divided out.
    """

    prime: int
    n_ext: int
    poly_degrees: tuple[int, ...]
    kind: str = "poly"
    relations: tuple[tuple[tuple[Monomial, int], ...], ...] = ()

    def __post_init__(self):
        if self.prime != 2 and self.n_ext == 0 and any(d % 2 for d in self.poly_degrees):
            raise ValueError("odd-degree polynomial generators need l = 2")

    @property
    def rank(self) -> int:
        return max(self.n_ext, len(self.poly_degrees))

    @property
    def ngens(self) -> int:
        return self.n_ext + len(self.poly_degrees)

    def gen_degree(self, i: int) -> int:
        return 1 if i < self.n_ext else self.poly_degrees[i - self.n_ext]

    # -- monomials -------------------------------------------------------
    def monomial_degree(self, m: Monomial) -> int:
        ext, exps = m
        return len(ext) + sum(e * d for e, d in zip(exps, self.poly_degrees))

    def monomials(self, d: int) -> list[Monomial]:
        """Monomials of the free algebra in degree ``d``, lexicographically ordered."""
        return list(_monomials(self.n_ext, self.poly_degrees, d))

    def monomial_index(self, d: int) -> dict[Monomial, int]:
        return _monomial_index(self.n_ext, self.poly_degrees, d)

    def free_dim(self, d: int) -> int:
        return len(self.monomial_index(d))

    def _ideal_matrix(self, d: int) -> np.ndarray:
        idx = self.monomial_index(d)
        rows = []
        for rel in self.relations:
            r = AlgElement(self, dict(rel))
            e = r.degree
            for m in self.monomials(d - e) if e <= d else ():
                prod = self.multiply(r, AlgElement(self, {m: 1}))
                if prod.terms:
                    rows.append(self.vector(prod, d, idx))
        if not rows:
            return np.zeros((0, len(idx)), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    def basis(self, d: int) -> list[Monomial]:
        """Degree-``d`` basis: monomials, or standard monomials of the quotient."""
        mons = self.monomials(d)
        if not self.relations or d < 0:
            return mons
        ideal = self._ideal_matrix(d)
        if ideal.shape[0] == 0:
            return mons
        # pivot on the largest monomials first so the survivors are the smallest
        _, piv = linalg.rref(ideal[:, ::-1], self.prime)
        lead = {len(mons) - 1 - c for c in piv}
        return [m for i, m in enumerate(mons) if i not in lead]

    def dim(self, d: int) -> int:
        if d < 0:
            return 0
        if not self.relations:
            return self.free_dim(d)
        return self.free_dim(d) - linalg.rank(self._ideal_matrix(d), self.prime)

    def dims(self, upto: int) -> list[int]:
        return [self.dim(d) for d in range(upto + 1)]

    def quotient(self, relations: Iterable["AlgElement"]) -> "GradedAlgebra":
        rels = tuple(tuple(sorted(r.terms.items())) for r in relations if r.terms)
        return GradedAlgebra(self.prime, self.n_ext, self.poly_degrees, self.kind,
                             self.relations + rels)

    def reduced(self) -> "GradedAlgebra":
        """Nilpotent-free even part: drop the exterior generators."""
        if self.kind == "ext_poly":
            return GradedAlgebra(self.prime, 0, self.poly_degrees, "poly")
        return self

    # -- elements --------------------------------------------------------
    def zero(self) -> "AlgElement":
        return AlgElement(self, {})

    def one(self) -> "AlgElement":
        return AlgElement(self, {((), (0,) * len(self.poly_degrees)): 1})

    def monomial(self, ext: Sequence[int] = (), exps: Sequence[int] | None = None,
                 coeff: int = 1) -> "AlgElement":
        if exps is None:
            exps = (0,) * len(self.poly_degrees)
        ext = tuple(ext)
        if len(set(ext)) != len(ext):
            return self.zero()
        sign = _sort_sign(ext)
        return AlgElement(self, {(tuple(sorted(ext)), tuple(exps)): (sign * coeff) % self.prime})

    def gen(self, i: int) -> "AlgElement":
        """Generator ``i``: exterior ones first, then polynomial ones."""
        if i < self.n_ext:
            return self.monomial((i,))
        e = [0] * len(self.poly_degrees)
        e[i - self.n_ext] = 1
        return self.monomial((), e)

    def x(self, i: int) -> "AlgElement":
        """Degree-1 class ``x_i`` (0-based)."""
        return self.gen(i)

    def y(self, i: int) -> "AlgElement":
        """Polynomial generator ``y_i`` (0-based)."""
        return self.gen(self.n_ext + i)

    def element(self, terms: Mapping[Monomial, int]) -> "AlgElement":
        p = self.prime
        return AlgElement(self, {m: c % p for m, c in terms.items() if c % p})

    def mul_monomials(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        ea, pa = a
        eb, pb = b
        if set(ea) & set(eb):
            return None
        # inversions between the two exterior words
        inv = 0
        for s in ea:
            for t in eb:
                if s > t:
                    inv += 1
        ext = tuple(sorted(ea + eb))
        exps = tuple(i + j for i, j in zip(pa, pb))
        return (-1 if inv % 2 else 1), (ext, exps)

    def multiply(self, a: "AlgElement", b: "AlgElement") -> "AlgElement":
        p = self.prime
        out: dict[Monomial, int] = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                r = self.mul_monomials(ma, mb)
                if r is None:
                    continue
                s, m = r
                out[m] = (out.get(m, 0) + s * ca * cb) % p
        return AlgElement(self, {m: c for m, c in out.items() if c})

    def bockstein(self, a: "AlgElement") -> "AlgElement":
        """Degree +1 derivation: ``x_i -> y_i`` (``x_i -> x_i^2`` when l = 2)."""
        p = self.prime
        out: dict[Monomial, int] = {}
        if self.kind == "ext_poly":
            for (ext, exps), c in a.terms.items():
                for k, s in enumerate(ext):
                    e = list(exps)
                    e[s] += 1
                    m = (ext[:k] + ext[k + 1:], tuple(e))
                    out[m] = (out.get(m, 0) + (-1) ** k * c) % p
        elif p == 2 and self.n_ext == 0 and all(d == 1 for d in self.poly_degrees):
            # Sq^1 on F_2[x]: x^n -> n x^(n+1), extended as a derivation
            for (ext, exps), c in a.terms.items():
                for i, e in enumerate(exps):
                    if e % 2:
                        ee = list(exps)
                        ee[i] += 1
                        m = (ext, tuple(ee))
                        out[m] = (out.get(m, 0) + c) % p
        elif self.n_ext == 0 and all(d % 2 == 0 for d in self.poly_degrees):
            pass  # concentrated in even degrees: beta = 0
        else:
            raise ValueError(f"no Bockstein on algebra of kind {self.kind!r}")
        return AlgElement(self, {m: c for m, c in out.items() if c})

    def vector(self, a: "AlgElement", d: int, index: dict | None = None) -> np.ndarray:
        idx = index if index is not None else self.monomial_index(d)
        v = np.zeros(len(idx), dtype=np.int64)
        for m, c in a.terms.items():
            if m not in idx:
                raise DegreeMismatch(f"monomial {m} not in degree {d}")
            v[idx[m]] = c
        return v

    def from_vector(self, v, d: int) -> "AlgElement":
        mons = self.monomials(d)
        return AlgElement(self, {mons[i]: int(c) % self.prime
                                 for i, c in enumerate(v) if int(c) % self.prime})

    def format_monomial(self, m: Monomial, names: tuple[str, str] = ("x", "y")) -> str:
        ext, exps = m
        parts = [f"{names[0]}{i + 1}" for i in ext]
        pname = names[1] if self.n_ext else names[0]
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(f"{pname}{i + 1}")
            elif e > 1:
                parts.append(f"{pname}{i + 1}^{e}")
        return "*".join(parts) or "1"


def _sort_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _exponents(degrees: tuple[int, ...], d: int):
    if not degrees:
        if d == 0:
            yield ()
        return
    w = degrees[0]
    for e in range(d // w + 1):
        for rest in _exponents(degrees[1:], d - e * w):
            yield (e,) + rest


@lru_cache(maxsize=None)
def _monomials(n_ext: int, degrees: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    if d < 0:
        return ()
    out = []
    for j in range(min(d, n_ext) + 1):
        for ext in itertools.combinations(range(n_ext), j):
            for exps in _exponents(degrees, d - j):
                out.append((ext, exps))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _monomial_index(n_ext: int, degrees: tuple[int, ...], d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(_monomials(n_ext, degrees, d))}


@dataclass(eq=False)
class AlgElement:
    algebra: GradedAlgebra
    terms: dict[Monomial, int] = field(default_factory=dict)

    @property
    def degree(self) -> int | None:
        """Common degree of the terms; ``None`` for zero, error if inhomogeneous."""
        degs = {self.algebra.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeMismatch("element is not homogeneous")
        return degs.pop()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "AlgElement") -> "AlgElement":
        p = self.algebra.prime
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = (out.get(m, 0) + c) % p
        return AlgElement(self.algebra, {m: c for m, c in out.items() if c})

    def __neg__(self) -> "AlgElement":
        p = self.algebra.prime
        return AlgElement(self.algebra, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def __mul__(self, other) -> "AlgElement":
        if isinstance(other, int):
            return self.algebra.element({m: c * other for m, c in self.terms.items()})
        return self.algebra.multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AlgElement":
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.algebra.one() * other
        return isinstance(other, AlgElement) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            (f"{c}*" if c != 1 else "") + self.algebra.format_monomial(m)
            for m, c in sorted(self.terms.items()))

    def to_json(self) -> dict:
        return {self.algebra.format_monomial(m): c for m, c in sorted(self.terms.items())}


# -- standard algebras ----------------------------------------------------

def poly_algebra(prime: int, degrees: Sequence[int]) -> GradedAlgebra:
    return GradedAlgebra(prime, 0, tuple(degrees), "poly")


def cohomology_of_BA(A, prime: int | None = None, reduced: bool = False) -> GradedAlgebra:
    """``H*(BA, F_l)``: ``F_2[x_1..x_r]`` or ``/\\(x_1..x_r) (x) F_l[y_1..y_r]``.

    ``A`` is an object with ``rank`` and ``prime`` attributes or a bare rank
    (then ``prime`` is required).  ``reduced=True`` gives the nilpotent-free
    even part ``F_l[y_1..y_r]`` for odd l.
    """
    if isinstance(A, int):
        r, p = A, prime
    else:
        r, p = A.rank, A.prime
    if p == 2:
        return GradedAlgebra(2, 0, (1,) * r, "poly")
    if reduced:
        return GradedAlgebra(p, 0, (2,) * r, "poly")
    return GradedAlgebra(p, r, (2,) * r, "ext_poly")


def closed_form_dim(prime: int, r: int, d: int) -> int:
    """Degreewise dimension of ``H^d(B(Z/l)^r)`` by the counting formula."""
    if d < 0:
        return 0
    if r == 0:
        return int(d == 0)
    if prime == 2:
        return comb(d + r - 1, r - 1)
    return sum(comb(r, j) * comb((d - j) // 2 + r - 1, r - 1)
               for j in range(min(d, r) + 1) if (d - j) % 2 == 0)


# -- morphisms ------------------------------------------------------------

@dataclass(eq=False)
class AlgebraMorphism:
    """Ring map given by the images of the source generators."""

    source: GradedAlgebra
    target: GradedAlgebra
    images: tuple[AlgElement, ...]
    _powers: dict = field(default_factory=dict, repr=False)
    _mats: dict = field(default_factory=dict, repr=False)

    def _power(self, i: int, e: int) -> AlgElement:
        key = (i, e)
        if key not in self._powers:
            if e == 0:
                val = self.target.one()
            elif e == 1:
                val = self.images[i]
            else:
                val = self._power(i, e - 1) * self.images[i]
            self._powers[key] = val
        return self._powers[key]

    def apply_monomial(self, m: Monomial) -> AlgElement:
        ext, exps = m
        out = self.target.one()
        for i in ext:
            out = out * self.images[i]
        n = self.source.n_ext
        for i, e in enumerate(exps):
            if e:
                out = out * self._power(n + i, e)
        return out

    def __call__(self, a: AlgElement) -> AlgElement:
        return apply(self, a)

    def matrix(self, d: int) -> np.ndarray:
        """Matrix of the degree-``d`` part: columns indexed by source monomials."""
        if d not in self._mats:
            tidx = self.target.monomial_index(d)
            smons = self.source.monomials(d)
            mat = np.zeros((len(tidx), len(smons)), dtype=np.int64)
            for j, m in enumerate(smons):
                img = self.apply_monomial(m)
                for tm, c in img.terms.items():
                    if tm not in tidx:
                        raise DegreeMismatch("morphism does not preserve degree")
                    mat[tidx[tm], j] = c
            self._mats[d] = mat
        return self._mats[d]

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self o other`` (apply ``other`` first)."""
        return AlgebraMorphism(other.source, self.target,
                               tuple(self(img) for img in other.images))


def apply(m: AlgebraMorphism, a: AlgElement) -> AlgElement:
    if a.algebra != m.source:
        raise DegreeMismatch("element does not belong to the morphism source")
    out = m.target.zero()
    p = m.target.prime
    acc: dict[Monomial, int] = {}
    for mon, c in a.terms.items():
        for tm, tc in m.apply_monomial(mon).terms.items():
            acc[tm] = (acc.get(tm, 0) + c * tc) % p
    out.terms = {k: v for k, v in acc.items() if v}
    return out


def linear_morphism(source: GradedAlgebra, target: GradedAlgebra,
                    matrix: Sequence[Sequence[int]]) -> AlgebraMorphism:
    """Map sending generator ``j`` of each block to ``sum_k matrix[j][k] * gen_k``.

    Used for maps induced by a homomorphism of elementary abelian groups:
    the degree-1 classes (and their Bocksteins) transform by the same
    matrix.
    """
    p = target.prime
    images = []

    def combo(row, getter):
        out = target.zero()
        for k, c in enumerate(row):
            if c % p:
                out = out + getter(k) * int(c)
        return out

    for j in range(source.n_ext):
        images.append(combo(matrix[j], target.x))
    for j in range(len(source.poly_degrees)):
        images.append(combo(matrix[j], target.y))
    return AlgebraMorphism(source, target, tuple(images))


def restriction_map(u, reduced: bool = False) -> AlgebraMorphism:
    """``theta: H*(BA') -> H*(BA)`` induced by ``u: A -> A'``.

    ``u.matrix`` is ``r' x r`` with columns the images of the basis of ``A``,
    so the dual class ``x'_j`` pulls back to ``sum_k u[j][k] x_k``.
    """
    src = cohomology_of_BA(u.target, reduced=reduced)
    tgt = cohomology_of_BA(u.source, reduced=reduced)
    return linear_morphism(src, tgt, u.matrix)


def invariants(alg: GradedAlgebra, action: Iterable[Sequence[Sequence[int]]],
               d: int) -> list[AlgElement]:
    """Basis of the degree-``d`` elements fixed by every matrix in ``action``.

    Each matrix acts as the ring automorphism of :func:`linear_morphism`.
    Computed as the exact null space of the stacked ``rho(g) - I``.
    """
    n = alg.free_dim(d)
    blocks = []
    for g in action:
        mat = linear_morphism(alg, alg, g).matrix(d)
        blocks.append((mat - np.eye(n, dtype=np.int64)) % alg.prime)
    if not blocks:
        blocks.append(np.zeros((0, n), dtype=np.int64))
    ker = linalg.nullspace(np.vstack(blocks), alg.prime, n)
    return [alg.from_vector(v, d) for v in ker]
