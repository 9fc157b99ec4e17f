from __future__ import annotations

import random

import pytest

from qstrat.gcalg import cohomology_of_BA, linear_morphism, poly_algebra
from qstrat.quillen import DegreeOverflow
from qstrat.steenrod import (
    OddPartUnsupported,
    check_stratum_stability,
    step,
    steenrod,
    steenrod_on_limit,
    total_steenrod,
)

from conftest import category, limit, shipped_examples

EXAMPLES = shipped_examples()


def random_homogeneous(alg, d, rng):
    mons = alg.monomials(d)
    return alg.element({m: rng.randrange(alg.prime) for m in mons})


def eps(prime):
    return 1 if prime == 2 else 2


@pytest.mark.parametrize("prime", [2, 3, 5])
def test_p0_is_identity_and_generator_rule(prime):
    alg = poly_algebra(prime, [eps(prime)] * 3)
    rng = random.Random(prime)
    for d in range(0, 7 * eps(prime), eps(prime)):
        a = random_homogeneous(alg, d, rng)
        assert steenrod(0, a) == a
    for i in range(3):
        g = alg.gen(i)
        assert steenrod(1, g) == g ** prime
        assert all(steenrod(k, g).is_zero() for k in range(2, 5))


@pytest.mark.parametrize("prime", [2, 3])
def test_top_power_and_instability(prime):
    alg = poly_algebra(prime, [eps(prime)] * 2)
    rng = random.Random(7)
    for n in range(1, 5):
        a = random_homogeneous(alg, n * eps(prime), rng)
        assert steenrod(n, a) == a ** prime
        assert steenrod(n + 1, a).is_zero()


@pytest.mark.parametrize("prime", [2, 3])
def test_cartan_formula(prime):
    alg = poly_algebra(prime, [eps(prime)] * 3)
    rng = random.Random(100 + prime)
    cases = 0
    e = eps(prime)
    while cases < 120:
        d1, d2 = rng.randrange(0, 7, e), rng.randrange(0, 7, e)
        a, b = random_homogeneous(alg, d1, rng), random_homogeneous(alg, d2, rng)
        ta, tb, tab = total_steenrod(a), total_steenrod(b), total_steenrod(a * b)
        for k in range(0, (d1 + d2) // e + 2):
            rhs = alg.zero()
            for i in range(k + 1):
                rhs = rhs + ta[i] * tb[k - i]
            assert tab[k] == rhs
        cases += 1


def test_step():
    assert step(2) == 1 and step(3) == 4 and step(5) == 8


def test_exterior_classes_unsupported():
    alg = cohomology_of_BA(1, 3)
    with pytest.raises(OddPartUnsupported):
        total_steenrod(alg.x(0))


@pytest.mark.parametrize("prime", [2, 3])
def test_commutes_with_linear_maps(prime):
    src, tgt = poly_algebra(prime, [eps(prime)] * 2), poly_algebra(prime, [eps(prime)] * 1)
    theta = linear_morphism(src, tgt, [[1], [prime - 1]])
    rng = random.Random(3)
    for d in range(0, 7, eps(prime)):
        a = random_homogeneous(src, d, rng)
        ta, tb = total_steenrod(a), total_steenrod(theta(a))
        for i in range(d + 1):
            assert theta(ta[i]) == tb[i]


@pytest.mark.parametrize("g,s,ell", EXAMPLES)
def test_restriction_compatibility_on_category(g, s, ell):
    L = limit(g, s, ell, reduced=True)
    rng = random.Random(11)
    for (i, j), us in L.category.homs.items():
        for u in us:
            theta = L.morphism(i, j, u)
            alg = L.algebras[j]
            for d in range(0, 7, eps(ell)):
                a = random_homogeneous(alg, d, rng)
                ta, tb = total_steenrod(a), total_steenrod(theta(a))
                for k in range(d + 1):
                    assert theta(ta[k]) == tb[k]


def test_a4_square_of_degree_two_class_lands_in_limit():
    L = limit("a4", "point", 2, reduced=True)
    (e,) = L.basis(2)
    out = steenrod_on_limit(L, e)
    assert out[0].vector.tolist() == e.vector.tolist()
    assert out[1].degree == 3
    L.coordinates(3, out[1].vector)


def test_limit_overflow():
    L = limit("a4", "point", 2, reduced=True)
    (e,) = L.basis(12)[:1]
    with pytest.raises(DegreeOverflow):
        steenrod_on_limit(L, e)


@pytest.mark.parametrize("g,s,ell", EXAMPLES)
def test_stratum_kernels_are_stable(g, s, ell):
    L = limit(g, s, ell, reduced=True)
    for i in range(category(g, s, ell).size):
        rep = check_stratum_stability(L, i)
        assert rep.passed, rep.failures
