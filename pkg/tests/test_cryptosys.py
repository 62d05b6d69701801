import random

import numpy as np
import pytest

from ffdeg import linalg
from ffdeg.cryptosys import (
    gemss_rank,
    ks_closed_form,
    ks_expected_mdegs,
    ks_solution,
    ks_system,
    minrank_instance,
    quad_form,
    rainbow_keygen,
    rainbow_sign,
    rainbow_sign_verify,
    rainbow_verify,
    random_system,
    rbs_best_hybrid,
    rbs_closed_form,
    rbs_expected_mdegs,
    rbs_system,
)
from ffdeg.errors import DimensionMismatch, EvenCharacteristic, ShapeMismatch
from ffdeg.field import FieldSpec
from ffdeg.ring import RingSpec, is_multihomogeneous
from ffdeg.series import estimate_series

BIL = RingSpec(FieldSpec(65521), (("x", 2), ("y", 2)))


def test_random_system_deterministic():
    a = random_system(BIL, [(1, 1)] * 3, 1)
    assert a == random_system(BIL, [(1, 1)] * 3, 1)
    assert a != random_system(BIL, [(1, 1)] * 3, 2)
    assert [is_multihomogeneous(f) for f in a.polys] == [(1, 1)] * 3
    with pytest.raises(DimensionMismatch):
        random_system(BIL, [(0, 0)], 1)


def test_rainbow_key_construction():
    key = rainbow_keygen(31, 2, 1, 1, 5)
    assert key.relation_holds() and key.layer_pattern_ok()
    rng = random.Random(0)
    for _ in range(10):
        a = [rng.randrange(31) for _ in range(key.n)]
        assert key.composition_holds(a)
    with pytest.raises(EvenCharacteristic):
        rainbow_keygen(2, 2, 1, 1, 5)
    big = rainbow_keygen(31, 3, 2, 2, 1)
    assert big.m == 4 and all(P.shape == (7, 7) and (P == P.T).all() for P in big.public)


def test_sign_verify():
    key = rainbow_keygen(31, 3, 2, 2, 3)
    for seed in range(5):
        msg = [random.Random(seed).randrange(31) for _ in range(key.m)]
        sig, ok = rainbow_sign_verify(key, msg, seed)
        assert ok and key.public_map(sig) == msg
    sig, ok = rainbow_sign_verify(key, [0] * key.m, 0)
    assert ok


def test_tampered_signatures_rejected():
    key = rainbow_keygen(31, 2, 1, 1, 4)
    rng = random.Random(1)
    rejected = 0
    for trial in range(100):
        msg = [rng.randrange(31) for _ in range(key.m)]
        sig = rainbow_sign(key, msg, trial)
        k = rng.randrange(key.n)
        bad = list(sig)
        bad[k] = (bad[k] + 1) % 31
        rejected += not rainbow_verify(key, msg, bad)
    assert rejected >= 95


def test_rbs_shape_and_series():
    key = rainbow_keygen(31, 2, 1, 1, 7)
    s = rbs_system(key.public, 2, 1, 1, 31)
    assert s.m == 5 and s.ring.n == 4
    top = s.top()
    assert top.mdegs == rbs_expected_mdegs(2, 1, 1)
    assert estimate_series(top.ring, top.mdegs, 15) == rbs_closed_form(2, 1, 1, 15)
    with pytest.raises(ShapeMismatch):
        rbs_system(key.public[:1], 2, 1, 1, 31)


def test_rbs_control_group_random_symmetric():
    rng = np.random.default_rng(2)
    pub = []
    for _ in range(4):
        A = rng.integers(0, 31, size=(7, 7))
        pub.append((A + A.T) % 31)
    s = rbs_system(pub, 3, 2, 2, 31)
    assert s.top().mdegs == rbs_expected_mdegs(3, 2, 2)


def test_minrank_instance():
    inst = minrank_instance(4, 3, 1, 11)
    again = minrank_instance(4, 3, 1, 11)
    assert inst.secret == again.secret
    assert all((a == b).all() for a, b in zip(inst.matrices, again.matrices))
    assert inst.secret_rank() <= 1
    rng = random.Random(3)
    for _ in range(5):
        probe = [rng.randrange(inst.p) for _ in range(3)]
        assert linalg.rank(inst.combination(probe), inst.p) > 1


def test_ks_shape_and_certificate():
    inst = minrank_instance(4, 3, 1, 11)
    a, positions = ks_solution(inst, 1, 1)
    s = ks_system(inst, 1, 1, positions)
    assert s.m == 3
    assert [(b, c) for b, c in s.ring.blocks] == [("x", 3), ("k1_", 1)]
    assert s.top().mdegs == [(1, 1)] * 3 == ks_expected_mdegs(3, 1)
    assert all(f(a) == 0 for f in s.polys)


@pytest.mark.parametrize("N,k,r,c", [(5, 4, 2, 2), (6, 3, 2, 3), (5, 5, 1, 2)])
def test_ks_certificates_and_series(N, k, r, c):
    inst = minrank_instance(N, k, r, N + k)
    a, positions = ks_solution(inst, r, c)
    s = ks_system(inst, r, c, positions)
    assert all(f(a) == 0 for f in s.polys)
    top = s.top()
    assert top.mdegs == ks_expected_mdegs(k, c)
    assert estimate_series(top.ring, top.mdegs, 10) == ks_closed_form(k, k, r, c, 10)


def test_ks_shape_errors():
    inst = minrank_instance(4, 3, 1, 11)
    with pytest.raises(ShapeMismatch):
        ks_system(inst, 1, 4)
    wide = minrank_instance(3, 4, 1, 2)
    with pytest.raises(ShapeMismatch):
        ks_system(wide, 1, 1)


def test_quad_form_exact():
    M = np.array([[1, 2], [2, 3]])
    assert quad_form(M, [1, 1], 7) == (1 + 4 + 3) % 7


def test_rbs_closed_form_reference_values():
    # Rainbow round-2 parameters (q, v, o1, o2): Ia, IIIc, Vc
    assert rbs_best_hybrid(256, 68, 36, 36).guessed == 0
    assert gemss_rank(513, 12, 12) == 33
