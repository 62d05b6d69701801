"""Syzygy and Koszul-syzygy dimensions per (multi)degree, the first fall
degree variants d_ff' / d'_ff,deglex / d_ff, and regularity checks.

A syzygy has degree d when sum b_i h_i lies in S_d, so its i-th component
lives in S_{d - deg h_i}. All dimensions are ranks of explicit matrices.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import MixedDegrees
from .macaulay import Degree, multiply_truncated, piece_rank, pieces, quotient_dim
from .ring import (
    MultiDegree,
    Poly,
    SystemInstance,
    basis_index,
    deglex_key,
    deglex_prefix,
    degrees_up_to,
    monomial_basis,
    sub_degree,
)
from .series import DegreeAnswer, Found, NotFoundUpTo, estimate_series, find_dreg


@dataclass(frozen=True)
class SyzygyProfile:
    degree: MultiDegree
    syz_dim: int
    ksyz_dim: int

    @property
    def h1_dim(self) -> int:
        return self.syz_dim - self.ksyz_dim


@dataclass(frozen=True)
class UnknownAboveBound:
    bound: int

    def __bool__(self) -> bool:
        raise TypeError("semi-regularity is unknown above the bound; test with `is True`")


def domain_dim(sys: SystemInstance, d: MultiDegree, exp_cap: int | None = None) -> int:
    r = sys.ring
    return sum(len(monomial_basis(r, e, exp_cap)) for di in sys.mdegs if (e := sub_degree(d, di)) is not None)


def _syz_piece(sys: SystemInstance, d: MultiDegree, exp_cap: int | None = None) -> int:
    return domain_dim(sys, d, exp_cap) - piece_rank(sys, d, exp_cap)


def syz_dim(sys: SystemInstance, d: Degree) -> int:
    """dim Syz(h)_d = sum_i dim S_{d-d_i} - rank phi_d."""
    sys.require_homogeneous()
    return sum(_syz_piece(sys, e) for e in pieces(sys, d))


def _slot_layout(sys: SystemInstance, d: MultiDegree, exp_cap: int | None):
    """Column offsets of each component S_{d - d_k} in the direct sum."""
    offsets, indices, width = [], [], 0
    for dk in sys.mdegs:
        e = sub_degree(d, dk)
        idx = basis_index(sys.ring, e, exp_cap) if e is not None else {}
        offsets.append(width)
        indices.append(idx)
        width += len(idx)
    return offsets, indices, width


def _trivial_rows(
    sys: SystemInstance, d: MultiDegree, exp_cap: int | None = None, frobenius_q: int | None = None
) -> tuple[list[list[tuple[int, int]]], int]:
    """Sparse rows spanning the Koszul syzygies (and Frobenius ones) in degree d."""
    r, mdegs, p = sys.ring, sys.mdegs, sys.ring.p
    offsets, indices, width = _slot_layout(sys, d, exp_cap)
    rows: list[list[tuple[int, int]]] = []
    m = len(sys.polys)
    terms = [list(h.terms.items()) for h in sys.polys]
    for i in range(m):
        for j in range(i + 1, m):
            e = sub_degree(d, tuple(a + b for a, b in zip(mdegs[i], mdegs[j])))
            if e is None:
                continue
            for mono in monomial_basis(r, e, exp_cap):
                row = []
                # pi_ij = (.., -h_j at slot i, .., h_i at slot j, ..)
                for prod, c in multiply_truncated(terms[j], mono, exp_cap):
                    row.append((offsets[i] + indices[i][prod], (-c) % p))
                for prod, c in multiply_truncated(terms[i], mono, exp_cap):
                    row.append((offsets[j] + indices[j][prod], c))
                rows.append(row)
    if frobenius_q is not None:
        q = frobenius_q
        for i in range(m):
            tau_deg = tuple(x * q for x in mdegs[i])
            e = sub_degree(d, tau_deg)
            if e is None:
                continue
            tau = _truncated_power(sys.polys[i], q - 1, q)
            tau_terms = list(tau.terms.items())
            for mono in monomial_basis(r, e, exp_cap):
                row = [
                    (offsets[i] + indices[i][prod], c)
                    for prod, c in multiply_truncated(tau_terms, mono, exp_cap)
                ]
                rows.append(row)
    return rows, width


def _truncated_power(h: Poly, k: int, cap: int) -> Poly:
    """h^k with every monomial having an exponent >= cap dropped."""
    def trunc(f: Poly) -> Poly:
        return Poly(f.ring, {mm: c for mm, c in f.terms.items() if max(mm) < cap})

    result = Poly.const(h.ring, 1)
    for _ in range(k):
        result = trunc(result * h)
        if result.is_zero():
            break
    return result


def _sparse_rank(rows: list[list[tuple[int, int]]], width: int, p: int) -> int:
    if not rows or width == 0:
        return 0
    M = np.zeros((len(rows), width), dtype=np.int64)
    for k, row in enumerate(rows):
        for col, c in row:
            M[k, col] = (M[k, col] + c) % p
    return linalg.rank(M, p)


def _ksyz_piece(sys: SystemInstance, d: MultiDegree) -> int:
    key = ("ksyz", d)
    if key not in sys._cache:
        rows, width = _trivial_rows(sys, d)
        sys._cache[key] = _sparse_rank(rows, width, sys.ring.p)
    return sys._cache[key]


def ksyz_dim(sys: SystemInstance, d: Degree) -> int:
    """dim KSyz(h)_d: rank of all monomial multiples of the pi_ij in degree d."""
    sys.require_homogeneous()
    return sum(_ksyz_piece(sys, e) for e in pieces(sys, d))


def _h1_piece(sys: SystemInstance, d: MultiDegree) -> int:
    syz = _syz_piece(sys, d)
    if syz == 0:
        return 0
    return syz - _ksyz_piece(sys, d)


def h1_dim(sys: SystemInstance, d: Degree) -> int:
    sys.require_homogeneous()
    return sum(_h1_piece(sys, e) for e in pieces(sys, d))


def syzygy_profile(sys: SystemInstance, d: MultiDegree) -> SyzygyProfile:
    sys.require_homogeneous()
    d = sys.ring.check_degree(d)
    return SyzygyProfile(d, _syz_piece(sys, d), _ksyz_piece(sys, d))


def profile_table(sys: SystemInstance, bound: int) -> list[SyzygyProfile]:
    return [syzygy_profile(sys, d) for d in degrees_up_to(sys.ring.s, bound) if any(d)]


def profile_csv(table: list[SyzygyProfile], s: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"d{i + 1}" for i in range(s)] + ["syz", "ksyz", "h1"])
    for prof in table:
        w.writerow(list(prof.degree) + [prof.syz_dim, prof.ksyz_dim, prof.h1_dim])
    return buf.getvalue()


def dff_prime(sys: SystemInstance, bound: int, ordered: bool = False) -> DegreeAnswer:
    """First degree (deglex scan, |d| <= bound) with Syz_d != KSyz_d.

    ``ordered=False`` reports the total degree |d|; ``ordered=True`` the
    multidegree itself.
    """
    sys.require_homogeneous()
    for d in degrees_up_to(sys.ring.s, bound):
        if any(d) and _h1_piece(sys, d) > 0:
            return Found(d if ordered else sum(d))
    return NotFoundUpTo(bound)


def _standard_view(sys: SystemInstance) -> SystemInstance:
    return sys.collapsed()


def dff_truncated(sys: SystemInstance, bound: int) -> DegreeAnswer:
    """First fall degree over B = F_q[x]/(x_1^q, ..., x_n^q), q = p.

    Requires all generators of the same degree d0. Trivial syzygies are the
    multiples of the pi_ij and of tau_i = h_i^(q-1) e_i.
    """
    std = _standard_view(sys)
    degs = {d for d in std.mdegs}
    if len(degs) > 1:
        raise MixedDegrees(f"generators have degrees {sorted(degs)}")
    q = std.ring.p
    for t in range(1, bound + 1):
        d = (t,)
        key = ("trunc", d)
        if key not in std._cache:
            syz = domain_dim(std, d, q) - piece_rank(std, d, q)
            tsyz = 0
            if syz:
                rows, width = _trivial_rows(std, d, exp_cap=q, frobenius_q=q)
                tsyz = _sparse_rank(rows, width, q)
            std._cache[key] = syz - tsyz
        if std._cache[key] > 0:
            return Found(t)
    return NotFoundUpTo(bound)


def _as_degree(sys: SystemInstance, d: Degree) -> MultiDegree:
    """An int means the standard-graded degree: every piece with |d0| <= d."""
    if isinstance(d, (int, np.integer)):
        return (int(d),) + (0,) * (sys.ring.s - 1)
    return sys.ring.check_degree(d)


def first_irregular_degree(sys: SystemInstance, bound: int) -> DegreeAnswer:
    """Deglex-first d0 where some x h_i fails to be injective on S/<h_1..h_{i-1}>."""
    mdegs = sys.require_homogeneous()
    for d0 in degrees_up_to(sys.ring.s, bound):
        if _irregular_at(sys, mdegs, d0):
            return Found(d0)
    return NotFoundUpTo(bound)


def _irregular_at(sys: SystemInstance, mdegs: list[MultiDegree], d0: MultiDegree) -> bool:
    for i in range(1, len(mdegs) + 1):
        prev, cur = sys.prefix(i - 1), sys.prefix(i)
        shifted = sub_degree(d0, mdegs[i - 1])
        prev_shift = quotient_dim(prev, shifted) if shifted is not None else 0
        if quotient_dim(cur, d0) != quotient_dim(prev, d0) - prev_shift:
            return True
    return False


def regular_up_to(sys: SystemInstance, d: Degree) -> bool:
    """True iff every x h_i is injective on (S/<h_1..h_{i-1}>)_{d0 - d_i} for all d0 ⪯ d."""
    mdegs = sys.require_homogeneous()
    target = _as_degree(sys, d)
    return not any(_irregular_at(sys, mdegs, d0) for d0 in deglex_prefix(target))


def hilbert_matches_series(sys: SystemInstance, d: Degree) -> bool:
    """HS_{S/<h>} agrees with prod(1 - t^{d_i}) HS_S on every d0 ⪯ d."""
    mdegs = sys.require_homogeneous()
    target = _as_degree(sys, d)
    series = estimate_series(sys.ring, mdegs, sum(target))
    return all(quotient_dim(sys, d0) == series[d0] for d0 in deglex_prefix(target))


def h1_vanishes_up_to(sys: SystemInstance, d: Degree) -> bool:
    sys.require_homogeneous()
    target = _as_degree(sys, d)
    return all(_h1_piece(sys, d0) == 0 for d0 in deglex_prefix(target) if any(d0))


def dreg_series(sys: SystemInstance, bound: int) -> DegreeAnswer:
    """D_reg of the system in its standard-graded (total degree) view."""
    mdegs = sys.require_homogeneous()
    std = sys.ring.collapsed()
    return find_dreg(estimate_series(std, [(sum(d),) for d in mdegs], bound))


def is_semiregular(sys: SystemInstance, bound: int) -> bool | UnknownAboveBound:
    """Semi-regular iff regular up to degree D_reg - 1 (standard grading)."""
    sys.require_homogeneous()
    D = dreg_series(sys, bound + 1)
    if not isinstance(D, Found) or D.value - 1 > bound:
        return UnknownAboveBound(bound)
    return regular_up_to(sys, D.value - 1)


def deglex_le(a: MultiDegree, b: MultiDegree) -> bool:
    return deglex_key(a) <= deglex_key(b)
