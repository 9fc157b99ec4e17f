"""Simplicial fans: the cone category, piecewise polynomials, Stanley-Reisner rings.

Degrees here are polynomial degrees (the Chow grading); the cohomological
degree is ``eps * d``.  Cones whose multiplicity is divisible by l are
rejected, so ``A_sigma`` is spanned by the rays of ``sigma`` mod l.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from qstrat import linalg
from qstrat.gcalg import GradedAlgebra, linear_morphism, poly_algebra
from qstrat.permgroup import GroupHom
from qstrat.quillen import LimitRing, QuillenCategory


class NonSimplicial(ValueError):
    pass


class NonSmooth(ValueError):
    pass


class PrimeDividesMultiplicity(ValueError):
    pass


def _det(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return int(det)


def multiplicity(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the span of ``vectors`` in its saturation; 0 if dependent."""
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = gcd(g, abs(_det([[v[c] for c in cols] for v in vectors])))
    return g


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[frozenset, ...]

    @classmethod
    def build(cls, rank: int, rays, max_cones) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        for r in rays:
            if len(r) != rank:
                raise ValueError(f"ray {r} does not have length {rank}")
            if gcd(*r) != 1:
                raise ValueError(f"ray {r} is not primitive")
        fan = cls(rank, rays, tuple(frozenset(c) for c in max_cones))
        for c in fan.cones:
            if c and multiplicity([rays[i] for i in sorted(c)]) == 0:
                raise NonSimplicial(f"cone {sorted(c)} has dependent rays")
        return fan

    @cached_property
    def cones(self) -> tuple[frozenset, ...]:
        """All cones (face closure), ordered by dimension then ray indices."""
        out = {frozenset()}
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(frozenset(s) for s in itertools.combinations(sorted(c), k))
        return tuple(sorted(out, key=lambda s: (len(s), sorted(s))))

    def multiplicity(self, cone: frozenset) -> int:
        return multiplicity([self.rays[i] for i in sorted(cone)])

    def is_smooth(self) -> bool:
        return all(self.multiplicity(c) == 1 for c in self.cones)

    def validate_prime(self, prime: int) -> None:
        for c in self.cones:
            if self.multiplicity(c) % prime == 0:
                raise PrimeDividesMultiplicity(f"l = {prime} divides the multiplicity of cone {sorted(c)}")

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "max_cones": [sorted(c) for c in self.max_cones]}


def fan_from_json(data: dict) -> Fan:
    return Fan.build(data["rank"], data["rays"], data["max_cones"])


def projective_space_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [set(range(n + 1)) - {i} for i in range(n + 1)]
    return Fan.build(n, rays, cones)


def product_fan(a: Fan, b: Fan) -> Fan:
    rays = [r + (0,) * b.rank for r in a.rays] + [(0,) * a.rank + r for r in b.rays]
    off = len(a.rays)
    cones = [set(ca) | {off + i for i in cb} for ca in a.max_cones for cb in b.max_cones]
    return Fan.build(a.rank + b.rank, rays, cones)


@dataclass(frozen=True)
class ConeSubgroup:
    """``A_sigma``: image of ``N_sigma`` in ``N (x) F_l``, with the rays as basis."""

    cone: frozenset
    basis: tuple[tuple[int, ...], ...]
    prime: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"cone": sorted(self.cone), "rank": self.rank}


def cone_category(fan: Fan, prime: int) -> QuillenCategory:
    """Objects are cones, morphisms the face inclusions ``A_tau <= A_sigma``."""
    fan.validate_prime(prime)
    objs = [ConeSubgroup(c, tuple(tuple(x % prime for x in fan.rays[i]) for i in sorted(c)), prime)
            for c in fan.cones]
    homs = {}
    for i, tau in enumerate(fan.cones):
        for j, sigma in enumerate(fan.cones):
            if tau <= sigma:
                t, s = sorted(tau), sorted(sigma)
                mat = tuple(tuple(int(rs == rt) for rt in t) for rs in s)
                homs[(i, j)] = (GroupHom(objs[i], objs[j], mat),)
    return QuillenCategory(prime, objs, homs)


def _eps(prime: int) -> int:
    return 1 if prime == 2 else 2


def cone_limit(fan: Fan, prime: int, degree: int, threads: int = 1) -> LimitRing:
    """Limit of the reduced cohomologies over the cone category, PP degree ``<= degree``.

    The ring is graded cohomologically, so it is computed up to ``eps * degree``.
    """
    cat = cone_category(fan, prime)
    eps = _eps(prime)
    algs = [poly_algebra(prime, [eps] * o.rank) for o in cat.objects]
    return LimitRing(cat, eps * degree, reduced=True, threads=threads, algebras=algs)


def pp_dims_of_limit(L: LimitRing) -> list[int]:
    eps = _eps(L.prime)
    return L.dims[::eps]


# -- piecewise polynomials -------------------------------------------------

def _span_basis(vectors: list[tuple[int, ...]], n: int, p: int) -> np.ndarray:
    if not vectors:
        return np.zeros((0, n), dtype=np.int64)
    r, piv = linalg.rref(np.array(vectors, dtype=np.int64), p)
    return r


def _coords_in(basis: np.ndarray, vecs: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of the rows of ``vecs`` in the RREF row basis ``basis``."""
    piv = [int(np.flatnonzero(row)[0]) for row in basis]
    coords = vecs[:, piv] % p
    if not np.array_equal((coords @ basis) % p, vecs % p):
        raise ValueError("vectors do not lie in the span")
    return coords


@dataclass
class PiecewisePolyAlgebra:
    fan: Fan
    prime: int
    degree: int
    algebras: list[GradedAlgebra]
    frames: list[np.ndarray]
    bases: list[np.ndarray]
    offsets: list[list[int]]

    @property
    def dims(self) -> list[int]:
        """Dimensions by PP degree."""
        return [b.shape[0] for b in self.bases]

    def tuples(self, d: int):
        """Basis tuples ``(f_sigma)`` of PP degree ``d`` as algebra elements."""
        offs = self.offsets[d]
        cdeg = _eps(self.prime) * d
        for v in self.bases[d]:
            yield [alg.from_vector(v[offs[i]:offs[i + 1]], cdeg) for i, alg in enumerate(self.algebras)]


def _restriction(fan, frames, algs, i, j, p):
    """Map ``S(V_sigma^*) -> S(V_tau^*)`` for ``tau = cones[i] <= sigma = cones[j]``."""
    # point of V_tau: w . frames[i]; in sigma's frame its coordinates are w . C
    c = _coords_in(frames[j], frames[i], p) if frames[i].shape[0] else np.zeros((0, frames[j].shape[0]), np.int64)
    # coordinate z_a on V_sigma pulls back to sum_b C[b, a] w_b
    return linear_morphism(algs[j], algs[i], c.T.tolist())


def piecewise_poly(fan: Fan, prime: int, degree: int) -> PiecewisePolyAlgebra:
    """Tuples of polynomial functions on the cones agreeing on shared faces, over F_l.

    Each cone's functions are written in the coordinates of the RREF basis of
    the span of its rays in ``F_l^n``; this is independent of the ray basis
    used by :func:`cone_category`.
    """
    fan.validate_prime(prime)
    p = prime
    cones = fan.cones
    frames = [_span_basis([fan.rays[k] for k in sorted(c)], fan.rank, p) for c in cones]
    eps = _eps(p)
    algs = [poly_algebra(p, [eps] * f.shape[0]) for f in frames]
    maps = {(i, j): _restriction(fan, frames, algs, i, j, p)
            for i, tau in enumerate(cones) for j, sigma in enumerate(cones)
            if tau < sigma and len(sigma) == len(tau) + 1}
    bases, offsets = [], []
    for d in range(0, eps * degree + 1, eps):
        sizes = [a.free_dim(d) for a in algs]
        offs = [0] + list(itertools.accumulate(sizes))
        rows = []
        for (i, j), m in maps.items():
            block = np.zeros((sizes[i], offs[-1]), dtype=np.int64)
            block[:, offs[j]:offs[j + 1]] = m.matrix(d)  # d is cohomological here
            block[:, offs[i]:offs[i + 1]] -= np.eye(sizes[i], dtype=np.int64)
            rows.append(block % p)
        mat = np.vstack(rows) if rows else np.zeros((0, offs[-1]), dtype=np.int64)
        bases.append(linalg.nullspace(mat, p, offs[-1]))
        offsets.append(offs)
    return PiecewisePolyAlgebra(fan, prime, degree, algs, frames, bases, offsets)


def check_face_agreement(pp: PiecewisePolyAlgebra) -> bool:
    """Restrict every basis tuple to every face (not only facets) and compare."""
    cones = pp.fan.cones
    p = pp.prime
    for d in range(pp.degree + 1):
        for tup in pp.tuples(d):
            for i, tau in enumerate(cones):
                for j, sigma in enumerate(cones):
                    if tau <= sigma:
                        m = _restriction(pp.fan, pp.frames, pp.algebras, i, j, p)
                        if m(tup[j]) != tup[i]:
                            return False
    return True


# -- Stanley-Reisner --------------------------------------------------------

def stanley_reisner(fan: Fan, prime: int) -> GradedAlgebra:
    """``F_l[u_rho] / (squarefree monomials of non-faces)`` with ``deg u = eps``."""
    n = len(fan.rays)
    alg = poly_algebra(prime, [_eps(prime)] * n)
    cones = set(fan.cones)
    minimal = []
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            fs = frozenset(s)
            if fs in cones:
                continue
            if any(m <= fs for m in minimal):
                continue
            minimal.append(fs)
    rels = []
    for m in minimal:
        e = tuple(int(i in m) for i in range(n))
        rels.append(alg.element({((), e): 1}))
    return alg.quotient(rels)


def stanley_reisner_dims(fan: Fan, degree: int) -> list[int]:
    """Count monomials whose support is a cone."""
    n = len(fan.rays)
    cones = set(fan.cones)
    out = []
    for d in range(degree + 1):
        cnt = 0
        for combo in itertools.combinations_with_replacement(range(n), d):
            if frozenset(combo) in cones:
                cnt += 1
        out.append(cnt)
    return out


@dataclass
class ToricComparison:
    smooth: bool
    pp_dims: list[int]
    limit_dims: list[int]
    sr_dims: list[int] | None

    @property
    def agree(self) -> bool:
        ok = self.pp_dims == self.limit_dims
        if self.sr_dims is not None:
            ok &= self.sr_dims == self.pp_dims
        return ok

    def to_json(self) -> dict:
        return {"smooth": self.smooth, "pp_dims": self.pp_dims, "limit_dims": self.limit_dims,
                "sr_dims": self.sr_dims, "agree": self.agree}


def compare(fan: Fan, prime: int, degree: int, threads: int = 1) -> ToricComparison:
    """Degreewise dims of PP*(fan) (x) F_l, the cone-category limit and (smooth fans) SR."""
    pp = piecewise_poly(fan, prime, degree)
    lim = cone_limit(fan, prime, degree, threads)
    smooth = fan.is_smooth()
    sr = stanley_reisner_dims(fan, degree) if smooth else None
    return ToricComparison(smooth, pp.dims, pp_dims_of_limit(lim), sr)
