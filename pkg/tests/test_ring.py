import json
import random
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from ffdeg.cryptosys import random_system
from ffdeg.errors import DimensionMismatch, FormatError, NonHomogeneousSystem, ZeroPolynomial
from ffdeg.field import FieldSpec
from ffdeg.ring import (
    Homogeneity,
    Poly,
    RingSpec,
    SystemInstance,
    deglex_cmp,
    degrees_up_to,
    dumps_system,
    is_multihomogeneous,
    loads_system,
    monomial_basis,
    system_from_dict,
    top_component,
)
from ffdeg.series import hilbert_series_ring

F = FieldSpec(65521)
BIL = RingSpec(F, (("x", 2), ("y", 2)))
STD2 = RingSpec.standard(65521, 2)


def test_monomial_basis_examples():
    assert set(monomial_basis(BIL, (1, 1))) == {(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)}
    assert len(monomial_basis(STD2, (3,))) == 4
    assert monomial_basis(STD2, (4,), 3) == ((2, 2),)
    with pytest.raises(DimensionMismatch):
        monomial_basis(STD2, (1, 1))


def test_monomial_basis_is_descending_lex():
    basis = monomial_basis(RingSpec.standard(7, 3), (3,))
    assert list(basis) == sorted(basis, reverse=True)
    assert len(basis) == comb(5, 2)


def test_weighted_basis():
    r = RingSpec(F, (("x", 3),), weights=((1,), (2,), (3,)))
    # partitions of 4 into parts 1, 2, 3
    assert len(monomial_basis(r, (4,))) == 4


def test_empty_block_rejected():
    with pytest.raises(DimensionMismatch):
        RingSpec(F, (("x", 0),))


def test_homogeneity_examples():
    x1, x2, y1, y2 = (Poly.var(BIL, k) for k in range(4))
    assert is_multihomogeneous(x1 * y1 + x2 * y2) == (1, 1)
    assert is_multihomogeneous(x1 * y1 + x1 * x1) is Homogeneity.NOT_HOMOGENEOUS
    assert is_multihomogeneous(Poly(BIL)) is Homogeneity.ZERO


def test_top_component_examples():
    x1, x2 = Poly.var(STD2, 0), Poly.var(STD2, 1)
    one = Poly.const(STD2, 1)
    assert top_component(x1 * x2 + x1 + one) == x1 * x2
    assert top_component(x1 * x2) == x1 * x2
    a, b = Poly.var(BIL, 0), Poly.var(BIL, 2)
    assert top_component(a * b + a * a) == a * b + a * a
    with pytest.raises(ZeroPolynomial):
        top_component(Poly(STD2))


def test_deglex_examples():
    assert deglex_cmp((1, 2), (2, 1)) == -1
    assert deglex_cmp((2, 0), (0, 3)) == -1
    assert deglex_cmp((1, 1), (1, 1)) == 0
    with pytest.raises(DimensionMismatch):
        deglex_cmp((1,), (1, 1))


degs = st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple)


@given(degs, degs, degs)
def test_deglex_is_total_order_compatible_with_total_degree(a, b, c):
    assert deglex_cmp(a, b) == -deglex_cmp(b, a)
    if deglex_cmp(a, b) <= 0 and deglex_cmp(b, c) <= 0:
        assert deglex_cmp(a, c) <= 0
    if sum(a) < sum(b):
        assert deglex_cmp(a, b) == -1


def test_basis_sizes_match_ring_series():
    r = RingSpec(F, (("x", 2), ("y", 3)))
    hs = hilbert_series_ring(r, 6)
    for d in degrees_up_to(2, 6):
        assert len(monomial_basis(r, d)) == hs[d]


def _to_sympy(f, gens):
    return sp.Poly(sum(c * sp.prod([g**e for g, e in zip(gens, m)]) for m, c in f.terms.items()), *gens, modulus=f.ring.p)


def test_product_matches_sympy():
    r = RingSpec.standard(101, 3)
    gens = sp.symbols("a b c")
    s = random_system(r, [(2,), (1,)], 5)
    f, g = s.polys
    prod = f * g
    assert _to_sympy(prod, gens) == _to_sympy(f, gens) * _to_sympy(g, gens)
    assert is_multihomogeneous(prod) == (3,)


@given(st.integers(0, 10**6))
def test_product_of_homogeneous_is_homogeneous(seed):
    rng = random.Random(seed)
    d1 = (rng.randint(0, 2), rng.randint(1, 2))
    d2 = (rng.randint(1, 2), rng.randint(0, 2))
    s = random_system(BIL, [d1, d2], seed)
    assert is_multihomogeneous(s.polys[0] * s.polys[1]) == (d1[0] + d2[0], d1[1] + d2[1])


def test_poly_arithmetic_and_evaluation():
    x1, x2 = Poly.var(STD2, 0), Poly.var(STD2, 1)
    f = (x1 + x2) ** 2 - x1 * x1
    assert f == x2 * x2 + x1 * x2 * 2
    assert f([3, 4]) == (16 + 24) % 65521
    assert (f - f).is_zero()


def test_system_mdegs_require_homogeneity():
    x1 = Poly.var(STD2, 0)
    with pytest.raises(NonHomogeneousSystem):
        SystemInstance(STD2, [x1 + Poly.const(STD2, 1)]).mdegs
    with pytest.raises(NonHomogeneousSystem):
        SystemInstance(STD2, [Poly.const(STD2, 3)]).mdegs


def test_json_round_trip_and_format():
    s = random_system(BIL, [(1, 1), (2, 0)], 9)
    text = dumps_system(s)
    assert loads_system(text) == s
    obj = json.loads(text)
    assert obj["field"] == {"p": 65521}
    assert obj["blocks"] == [{"name": "x", "vars": 2}, {"name": "y", "vars": 2}]
    assert all(0 <= c < 65521 and len(e) == 4 for poly in obj["polys"] for c, e in poly)
    assert dumps_system(loads_system(text)) == text


def test_weights_round_trip():
    r = RingSpec(F, (("x", 2),), weights=((1,), (2,)))
    s = random_system(r, [(4,)], 1)
    assert loads_system(dumps_system(s)) == s


@pytest.mark.parametrize(
    "obj",
    [
        {"field": {"p": 7}, "blocks": [{"name": "x", "vars": 1}], "polys": [[[7, [1]]]]},
        {"field": {"p": 7}, "blocks": [{"name": "x", "vars": 1}], "polys": [[[1.5, [1]]]]},
        {"field": {"p": 7}, "polys": []},
    ],
)
def test_malformed_files(obj):
    with pytest.raises(FormatError):
        system_from_dict(obj)


def test_invalid_json():
    with pytest.raises(FormatError):
        loads_system("{not json")
