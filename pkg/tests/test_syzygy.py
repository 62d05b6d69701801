import itertools
import random

import numpy as np
import pytest

from ffdeg.cryptosys import random_system
from ffdeg.errors import MixedDegrees, NonHomogeneousSystem
from ffdeg.field import FieldSpec
from ffdeg.ring import Poly, RingSpec, SystemInstance
from ffdeg.series import Found, NotFoundUpTo
from ffdeg.syzygy import (
    UnknownAboveBound,
    dff_prime,
    dff_truncated,
    h1_dim,
    ksyz_dim,
    profile_csv,
    profile_table,
    regular_up_to,
    syz_dim,
    is_semiregular,
    syzygy_profile,
)

P = 65521
STD2 = RingSpec.standard(P, 2)
BIL = RingSpec(FieldSpec(P), (("x", 2), ("y", 2)))


def three_quadratics():
    return random_system(STD2, [(2,)] * 3, 1)


def two_quadratics():
    return random_system(STD2, [(2,)] * 2, 1)


def bilinear4():
    return random_system(BIL, [(1, 1)] * 4, 3)


def test_syz_examples():
    assert syz_dim(three_quadratics(), (3,)) == 2
    assert syz_dim(two_quadratics(), (4,)) == 1
    single = random_system(STD2, [(2,)], 4)
    assert all(syz_dim(single, (d,)) == 0 for d in range(8))


def test_ksyz_examples():
    assert ksyz_dim(three_quadratics(), (3,)) == 0
    assert ksyz_dim(two_quadratics(), (4,)) == 1
    assert ksyz_dim(three_quadratics(), (4,)) == 3


def test_dff_prime_examples():
    assert dff_prime(three_quadratics(), 10) == Found(3)
    assert dff_prime(two_quadratics(), 12) == NotFoundUpTo(12)
    assert dff_prime(bilinear4(), 6, ordered=True) == Found((1, 2))
    assert dff_prime(bilinear4(), 6) == Found(3)


def _brute_force_dff(h_terms, n, q, d0, bound):
    """First image degree d with a nonzero b in B_{d-d0} killing h in B.

    Valid for one generator while d < d0 * q, where TSyz is zero.
    """

    def mons(deg):
        return [e for e in itertools.product(range(q), repeat=n) if sum(e) == deg]

    for d in range(d0, bound + 1):
        basis = mons(d - d0)
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            if not any(coeffs):
                continue
            prod = {}
            for c, m in zip(coeffs, basis):
                for hm, hc in h_terms.items():
                    e = tuple(a + b for a, b in zip(m, hm))
                    if max(e) < q:
                        prod[e] = (prod.get(e, 0) + c * hc) % q
            if not any(prod.values()):
                return d
    return None


@pytest.mark.parametrize("exps,expected", [(((1, 1),), 4), (((2, 0),), 3)])
def test_dff_truncated_worked_cases(exps, expected):
    r = RingSpec.standard(3, 2)
    h = Poly(r, {e: 1 for e in exps})
    assert _brute_force_dff(h.terms, 2, 3, 2, 5) == expected
    assert dff_truncated(SystemInstance(r, [h]), 10) == Found(expected)


def test_dff_truncated_brute_force_random():
    rng = random.Random(2)
    r = RingSpec.standard(3, 2)
    for _ in range(6):
        terms = {e: rng.randint(1, 2) for e in [(2, 0), (1, 1), (0, 2)] if rng.random() < 0.7} or {(1, 1): 1}
        h = Poly(r, terms)
        oracle = _brute_force_dff(h.terms, 2, 3, 2, 5)
        got = dff_truncated(SystemInstance(r, [h]), 5)
        assert got == (Found(oracle) if oracle is not None else NotFoundUpTo(5))


def test_dff_truncated_large_field():
    s = random_system(RingSpec.standard(11, 2), [(2,)] * 2, 1)
    assert dff_truncated(s, 8) == NotFoundUpTo(8)


def test_dff_truncated_mixed_degrees():
    s = random_system(STD2, [(2,), (3,)], 1)
    with pytest.raises(MixedDegrees):
        dff_truncated(s, 5)


def test_regular_up_to_examples():
    assert regular_up_to(two_quadratics(), 10)
    assert not regular_up_to(bilinear4(), (2, 2))
    assert regular_up_to(bilinear4(), (0, 0))


def test_semiregular_examples():
    assert is_semiregular(three_quadratics(), 10) is True
    assert is_semiregular(two_quadratics(), 10) is True
    assert is_semiregular(bilinear4(), 10) is False
    unknown = is_semiregular(random_system(RingSpec.standard(P, 3), [(2,)], 1), 10)
    assert isinstance(unknown, UnknownAboveBound)
    with pytest.raises(TypeError):
        bool(unknown)


def test_profile_table_and_csv():
    table = profile_table(bilinear4(), 3)
    assert all(p.h1_dim >= 0 and p.ksyz_dim <= p.syz_dim for p in table)
    prof = syzygy_profile(bilinear4(), (1, 2))
    assert prof.h1_dim > 0
    text = profile_csv(table, 2)
    assert text.splitlines()[0] == "d1,d2,syz,ksyz,h1"
    assert "1,2," in text


def test_non_homogeneous():
    x = Poly.var(STD2, 0)
    with pytest.raises(NonHomogeneousSystem):
        syz_dim(SystemInstance(STD2, [x * x + x]), 2)


def _change_blocks(sys, seed):
    """Apply a random invertible block-diagonal linear substitution."""
    rng = np.random.default_rng(seed)
    r = sys.ring
    p = r.p
    images = []
    for sl in r.block_slices():
        k = sl.stop - sl.start
        while True:
            A = rng.integers(0, p, size=(k, k))
            from ffdeg import linalg

            if linalg.rank(A, p) == k:
                break
        for i in range(k):
            images.append(sum((Poly.var(r, sl.start + j) * int(A[i, j]) for j in range(k)), Poly(r)))
    out = []
    for f in sys.polys:
        g = Poly(r)
        for m, c in f.terms.items():
            term = Poly.const(r, c)
            for v, e in enumerate(m):
                term = term * images[v] ** e if e else term
            g = g + term
        out.append(g)
    return SystemInstance(r, out)


def test_dff_prime_invariances():
    for seed in range(3):
        s = random_system(BIL, [(1, 1)] * 3 + [(2, 1)], seed)
        base = dff_prime(s, 5, ordered=True)
        scaled = SystemInstance(BIL, [f * (k + 2) for k, f in enumerate(s.polys)])
        assert dff_prime(scaled, 5, ordered=True) == base
        assert dff_prime(_change_blocks(s, seed), 5, ordered=True) == base


def test_h1_zero_for_regular_sequences():
    s = random_system(RingSpec.standard(P, 3), [(2,), (3,), (2,)], 6)
    assert all(h1_dim(s, t) == 0 for t in range(10))
