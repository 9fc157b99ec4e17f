"""Closed-form presentations: H*(BGL_N), the flag algebra, and the GL_N checks.

Tate twists are ignored throughout: over an algebraically closed base they
trivialize.  The torus side works in ``F_l[u_1..u_N]`` with every ``u_i`` in
degree 2 for both parities of l (for l = 2 this doubles the degree of
``x_i``), so the comparison code is shared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from qstrat import linalg
from qstrat.gcalg import AlgElement, AlgebraMorphism, GradedAlgebra, invariants, poly_algebra
from qstrat.quillen import fit_rational


class BoundTooSmall(RuntimeError):
    pass


def bgl_cohomology(N: int, prime: int) -> GradedAlgebra:
    """``F_l[c_1..c_N]`` with ``deg c_i = 2i``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return poly_algebra(prime, [2 * i for i in range(1, N + 1)])


def torus_algebra(N: int, prime: int) -> GradedAlgebra:
    return poly_algebra(prime, [2] * N)


def elementary_symmetric(alg: GradedAlgebra, k: int, variables: list[int] | None = None) -> AlgElement:
    n = len(alg.poly_degrees)
    variables = list(range(n)) if variables is None else variables
    terms = {}
    for combo in itertools.combinations(variables, k):
        e = [0] * n
        for v in combo:
            e[v] = 1
        terms[((), tuple(e))] = 1
    return alg.element(terms)


def complete_symmetric(alg: GradedAlgebra, k: int, variables: list[int]) -> AlgElement:
    n = len(alg.poly_degrees)
    terms = {}
    for combo in itertools.combinations_with_replacement(variables, k):
        e = [0] * n
        for v in combo:
            e[v] += 1
        terms[((), tuple(e))] = 1
    return alg.element(terms)


@dataclass
class SymPolyMap:
    """``c_i -> sigma_i(t_1..t_N)``."""

    N: int
    prime: int
    morphism: AlgebraMorphism = field(init=False)

    def __post_init__(self):
        src = bgl_cohomology(self.N, self.prime)
        tgt = torus_algebra(self.N, self.prime)
        imgs = tuple(elementary_symmetric(tgt, i) for i in range(1, self.N + 1))
        self.morphism = AlgebraMorphism(src, tgt, imgs)

    def __call__(self, a: AlgElement) -> AlgElement:
        return self.morphism(a)


@dataclass
class FlagAlgebra:
    """``F_l[t_1..t_N] / (sigma_1..sigma_N)`` with ``deg t_i = 2``.

    Normal forms come from the Groebner basis ``h_k(t_k..t_N)`` (lex order,
    ``t_1 > .. > t_N``), whose leading terms are ``t_k^k``; the standard
    monomials are ``t^a`` with ``a_k < k``.
    """

    N: int
    prime: int

    @property
    def ambient(self) -> GradedAlgebra:
        return torus_algebra(self.N, self.prime)

    def groebner(self) -> list[AlgElement]:
        alg = self.ambient
        return [complete_symmetric(alg, k, list(range(k - 1, self.N))) for k in range(1, self.N + 1)]

    def standard_monomials(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(k) for k in range(1, self.N + 1)]))

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self.standard_monomials():
            d = 2 * sum(a)
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    @property
    def total_dim(self) -> int:
        return sum(self.dims().values())

    def series(self, upto: int) -> list[int]:
        dims = self.dims()
        return [dims.get(d, 0) for d in range(upto + 1)]

    def normal_form(self, f: AlgElement) -> AlgElement:
        """Reduce ``f`` modulo the ideal; the result is supported on standard monomials."""
        p = self.prime
        gb = self.groebner()
        leads = [k for k in range(self.N)]  # g_k leads with t_k^(k+1)
        rem = dict(f.terms)
        out: dict = {}
        while rem:
            # lex-largest monomial first
            m = max(rem, key=lambda mm: mm[1])
            c = rem.pop(m)
            exps = m[1]
            hit = next((k for k in leads if exps[k] >= k + 1), None)
            if hit is None:
                out[m] = (out.get(m, 0) + c) % p
                continue
            g = gb[hit]
            quot = list(exps)
            quot[hit] -= hit + 1
            lead = [0] * self.N
            lead[hit] = hit + 1
            for gm, gc in g.terms.items():
                if gm[1] == tuple(lead):
                    continue
                new = ((), tuple(q + e for q, e in zip(quot, gm[1])))
                rem[new] = (rem.get(new, 0) - c * gc) % p
                if not rem[new]:
                    del rem[new]
        return self.ambient.element(out)

    def quotient_dim_by_linear_algebra(self, d: int) -> int:
        """Independent degreewise count: dim of ``F[t]_d`` minus rank of the ideal part."""
        alg = self.ambient.quotient(elementary_symmetric(self.ambient, i) for i in range(1, self.N + 1))
        return alg.dim(d)


def flag_algebra(N: int, prime: int) -> FlagAlgebra:
    if N < 1:
        raise ValueError("N must be >= 1")
    return FlagAlgebra(N, prime)


def poly_series(degrees: list[int], upto: int) -> list[int]:
    out = [0] * (upto + 1)
    out[0] = 1
    for w in degrees:
        for n in range(w, upto + 1):
            out[n] += out[n - w]
    return out


def bgl_series(N: int, upto: int) -> list[int]:
    return poly_series([2 * i for i in range(1, N + 1)], upto)


def series_product(a: list[int], b: list[int]) -> list[int]:
    n = min(len(a), len(b))
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


@dataclass
class ReductiveReport:
    N: int
    prime: int
    degree_bound: int
    injective: bool
    image_in_invariants: bool
    f_exponent: int
    image_dims: list[int]
    invariant_dims: list[int]

    @property
    def passed(self) -> bool:
        return self.injective and self.image_in_invariants and self.f_exponent >= 0

    def to_json(self) -> dict:
        return {
            "N": self.N, "ell": self.prime, "degree": self.degree_bound,
            "injective": self.injective, "image_in_invariants": self.image_in_invariants,
            "f_exponent": self.f_exponent, "image_dims": self.image_dims,
            "invariant_dims": self.invariant_dims, "passed": self.passed,
        }


def _perm_matrices(N: int) -> list[tuple[tuple[int, ...], ...]]:
    gens = []
    for k in range(N - 1):
        m = [[int(i == j) for j in range(N)] for i in range(N)]
        m[k], m[k + 1] = m[k + 1], m[k]
        gens.append(tuple(tuple(r) for r in m))
    return gens


def gl_reductive_check(N: int, prime: int, degree_bound: int) -> ReductiveReport:
    """Compare ``F_l[sigma_1..sigma_N]`` with the S_N-invariants of ``F_l[u_1..u_N]``.

    Checks injectivity and containment degreewise, then finds the least
    ``k`` such that every invariant basis element has its ``l^k``-th power in
    the image within the bound (``BoundTooSmall`` if there is none).
    """
    smap = SymPolyMap(N, prime)
    src, tgt = smap.morphism.source, smap.morphism.target
    gens = _perm_matrices(N)
    injective = True
    contained = True
    image_dims, inv_dims = [], []
    image_spans: dict[int, np.ndarray] = {}
    inv_basis: dict[int, list[AlgElement]] = {}
    for d in range(0, degree_bound + 1, 2):
        mat = smap.morphism.matrix(d)
        r = linalg.rank(mat, prime) if mat.size else 0
        injective &= r == src.free_dim(d)
        image_dims.append(r)
        image_spans[d] = mat.T.copy()
        inv = invariants(tgt, gens, d)
        inv_basis[d] = inv
        inv_dims.append(len(inv))
        if mat.size:
            inv_mat = np.array([tgt.vector(v, d) for v in inv]) if inv else np.zeros((0, mat.shape[0]), np.int64)
            contained &= linalg.span_contains(inv_mat, mat.T, prime)
    f_exp = 0
    for d, inv in inv_basis.items():
        for f in inv:
            k, power, deg = 0, f, d
            while True:
                if deg > degree_bound:
                    raise BoundTooSmall(f"cannot certify invariant in degree {d} below {degree_bound}")
                span = image_spans[deg]
                if linalg.span_contains(span, tgt.vector(power, deg)[None, :], prime):
                    break
                k, power, deg = k + 1, power ** prime, deg * prime
            f_exp = max(f_exp, k)
    return ReductiveReport(N, prime, degree_bound, bool(injective), bool(contained), f_exp,
                           image_dims, inv_dims)


def gl_ell_diagonal_example(prime: int) -> list[AlgElement]:
    """Images of ``sigma_1..sigma_l`` under ``F_l[t_1..t_l] -> F_l[t]``, ``t_i -> t``."""
    src = torus_algebra(prime, prime)
    tgt = torus_algebra(1, prime)
    phi = AlgebraMorphism(src, tgt, tuple(tgt.gen(0) for _ in range(prime)))
    return [phi(elementary_symmetric(src, d)) for d in range(1, prime + 1)]


def format_t_power(a: AlgElement) -> str | int:
    if a.is_zero():
        return 0
    parts = []
    for (_, (e,)), c in sorted(a.terms.items()):
        mon = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
        parts.append(mon if c == 1 else f"{c}*{mon}")
    return " + ".join(parts)
