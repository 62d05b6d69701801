import pytest
import sympy as sp

from ffdeg.cryptosys import random_system
from ffdeg.errors import DimensionMismatch, NonHomogeneousSystem
from ffdeg.field import FieldSpec
from ffdeg.groebner import grevlex_desc, leading_monomial, quotient_dims_from_trace, reduced_gb_bounded, solving_degree
from ffdeg.macaulay import quotient_hilbert_total
from ffdeg.ring import Poly, RingSpec, SystemInstance, mono_divides
from ffdeg.series import Found, NotFoundUpTo

P = 65521
STD2 = RingSpec.standard(P, 2)
BIL = RingSpec(FieldSpec(P), (("x", 2), ("y", 2)))


def sympy_gb(sys):
    gens = sp.symbols(f"v0:{sys.ring.n}")
    exprs = [sum(c * sp.prod([g**e for g, e in zip(gens, m)]) for m, c in f.terms.items()) for f in sys.polys]
    G = sp.groebner(exprs, *gens, order="grevlex", modulus=sys.ring.p)
    return sorted(sp.Poly(g, *gens).monoms(order="grevlex")[0] for g in G.exprs)


def test_grevlex_order():
    monos = [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    assert grevlex_desc(monos) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    x, y, z = (Poly.var(RingSpec.standard(P, 3), k) for k in range(3))
    assert leading_monomial(x * z + y * y) == (0, 2, 0)


def test_three_quadratics():
    trace = reduced_gb_bounded(random_system(STD2, [(2,)] * 3, 1), 6)
    assert sorted(trace.leading) == [(0, 2), (1, 1), (2, 0)]
    assert trace.d_slv == Found(2)


def test_linear_system():
    s = random_system(RingSpec.standard(P, 3), [(1,)] * 3, 1)
    assert solving_degree(s, 4) == Found(1)


def test_generic_bilinear_four_forms():
    # four generic (1,1)-forms span S_(1,1), so the basis is the four x_i y_j
    s = random_system(BIL, [(1, 1)] * 4, 3)
    trace = reduced_gb_bounded(s, 6)
    assert sorted(trace.leading) == sympy_gb(s)
    assert trace.d_slv == Found(2)


@pytest.mark.parametrize("seed", range(4))
def test_leading_monomials_match_sympy(seed):
    s = random_system(RingSpec.standard(P, 3), [(2,), (2,), (3,)], seed)
    trace = reduced_gb_bounded(s, 8)
    assert sorted(trace.leading) == sympy_gb(s)


def test_trace_invariants_and_quotient_agreement():
    s = random_system(BIL, [(1, 1), (1, 1), (2, 0)], 2)
    trace = reduced_gb_bounded(s, 7)
    lead = trace.leading
    assert all(not mono_divides(a, b) for a in lead for b in lead if a != b)
    assert all(k <= 7 for k in trace.new_leading_by_degree)
    assert quotient_dims_from_trace(trace, s.collapsed().ring, 7) == quotient_hilbert_total(s, 7)
    assert all(leading_monomial(g) == l for g, l in zip(trace.basis, lead))


def test_not_found_when_window_not_reached():
    s = random_system(RingSpec.standard(P, 3), [(2,)] * 2, 1)
    assert solving_degree(s, 4) == NotFoundUpTo(4)


def test_deterministic():
    s = random_system(RingSpec.standard(P, 3), [(2,)] * 4, 9)
    a, b = reduced_gb_bounded(s, 6), reduced_gb_bounded(s, 6)
    assert a.to_json() == b.to_json() and a.basis == b.basis


def test_errors():
    x = Poly.var(STD2, 0)
    with pytest.raises(NonHomogeneousSystem):
        reduced_gb_bounded(SystemInstance(STD2, [x * x + x]), 4)
    with pytest.raises(DimensionMismatch):
        reduced_gb_bounded(random_system(STD2, [(3,)], 1), 2)
