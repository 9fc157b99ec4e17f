from __future__ import annotations

import pytest

from qstrat.permgroup import transporter
from qstrat.strat import kernel_containment, stratify, weyl_faithful

from conftest import category, group, limit, shipped_examples

EXAMPLES = shipped_examples()


def spectrum(g, s, ell):
    return stratify(limit(g, s, ell, reduced=True))


def test_a4_chain():
    spec = spectrum("a4", "point", 2)
    assert [s.dim for s in spec.strata] == [0, 1, 2]
    assert [spec.parents(i) for i in range(3)] == [[1], [2], []]
    assert spec.strata[2].weyl_order == 3
    assert all(weyl_faithful(s) for s in spec.strata)


def test_s4_strata():
    spec = spectrum("s4", "point", 2)
    assert [s.dim for s in spec.strata] == [0, 1, 1, 2, 2]
    assert spec.max_rank == 2


@pytest.mark.parametrize("g,s,ell", EXAMPLES)
def test_poset_is_subconjugacy(g, s, ell):
    cat = category(g, s, ell)
    G = group(g)
    spec = spectrum(g, s, ell)
    for i, a in enumerate(cat.objects):
        for j, b in enumerate(cat.objects):
            if s == "point":
                subconj = bool(transporter(G, a.A, b.A))
                assert spec.leq(i, j) == subconj


@pytest.mark.parametrize("g,s,ell", EXAMPLES)
def test_kernel_containment_agrees_with_poset(g, s, ell):
    spec = spectrum(g, s, ell)
    n = len(spec.strata)
    for i in range(n):
        for j in range(n):
            assert kernel_containment(spec, i, j) == spec.leq(i, j)


@pytest.mark.parametrize("g,s,ell", EXAMPLES)
def test_strata_dims_and_weyl(g, s, ell):
    spec = spectrum(g, s, ell)
    cat = category(g, s, ell)
    assert [st.dim for st in spec.strata] == [o.rank for o in cat.objects]
    assert all(weyl_faithful(st) for st in spec.strata)


def test_kernel_of_top_stratum_vanishes_in_normal_case():
    spec = spectrum("a4", "point", 2)
    assert all(k == 0 for k in spec.strata[2].kernel_dims)
    # the bottom stratum kills everything of positive degree
    L = spec.limit
    assert spec.strata[0].kernel_dims[1:] == L.dims[1:]


def test_to_json_shape():
    out = spectrum("s3", "point", 3).to_json()
    assert [sorted(d) for d in out] == [["dim", "kernel_dims", "object", "parents", "weyl_order"]] * 2
    assert out[1]["weyl_order"] == 2
