"""Macaulay matrices of homogeneous systems, their ranks over F_p, quotient
Hilbert functions and the degree of regularity d_reg.

A degree argument may be a multidegree tuple (one graded piece) or a plain
int, meaning the total-degree piece S_d = sum over |d'| = d of S_{d'}. Every
quantity computed here is additive over the multigraded pieces, so the int
form is evaluated piece by piece; :func:`macaulay_rank` on an int builds the
literal total-degree matrix of the collapsed system instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from . import linalg
from .ring import (
    Monomial,
    MultiDegree,
    SystemInstance,
    basis_index,
    compositions,
    degrees_up_to,
    mono_mul,
    monomial_basis,
    sub_degree,
)
from .series import DegreeAnswer, Found, NotFoundUpTo

Degree = MultiDegree | int


@dataclass
class MacaulayView:
    target: MultiDegree
    row_index: list[tuple[int, Monomial]]
    col_index: tuple[Monomial, ...]
    matrix: np.ndarray
    rank: int

    @property
    def kernel_dim(self) -> int:
        return len(self.row_index) - self.rank

    def dump(self, fh: IO[str], p: int) -> None:
        rows, cols = self.matrix.shape
        fh.write(f"{rows} {cols} {p}\n")
        for row in self.matrix:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def pieces(sys: SystemInstance, d: Degree) -> list[MultiDegree]:
    if isinstance(d, (int, np.integer)):
        if d < 0:
            return []
        return list(compositions(int(d), sys.ring.s))
    return [sys.ring.check_degree(d)]


def multiply_truncated(
    terms: list[tuple[Monomial, int]], mono: Monomial, exp_cap: int | None
) -> list[tuple[Monomial, int]]:
    out = []
    for m, c in terms:
        prod = mono_mul(m, mono)
        if exp_cap is not None and max(prod) >= exp_cap:
            continue
        out.append((prod, c))
    return out


def _build(
    sys: SystemInstance, d: MultiDegree, exp_cap: int | None
) -> tuple[list[tuple[int, Monomial]], tuple[Monomial, ...], np.ndarray]:
    r = sys.ring
    mdegs = sys.mdegs
    cols = monomial_basis(r, d, exp_cap)
    index = basis_index(r, d, exp_cap)
    row_index: list[tuple[int, Monomial]] = []
    entries: list[tuple[int, int, int]] = []
    for i, (h, di) in enumerate(zip(sys.polys, mdegs)):
        e = sub_degree(d, di)
        if e is None:
            continue
        terms = list(h.terms.items())
        for m in monomial_basis(r, e, exp_cap):
            row = len(row_index)
            row_index.append((i, m))
            for prod, c in multiply_truncated(terms, m, exp_cap):
                entries.append((row, index[prod], c))
    M = np.zeros((len(row_index), len(cols)), dtype=np.int64)
    if entries:
        rr, cc, vv = zip(*entries)
        M[list(rr), list(cc)] = vv
    return row_index, cols, M


def row_count(sys: SystemInstance, d: MultiDegree, exp_cap: int | None = None) -> int:
    r = sys.ring
    return sum(len(monomial_basis(r, e, exp_cap)) for di in sys.mdegs if (e := sub_degree(d, di)) is not None)


def piece_rank(sys: SystemInstance, d: MultiDegree, exp_cap: int | None = None) -> int:
    """rank of phi_d = dim <h>_d in one multigraded piece (cached on the system)."""
    key = ("rank", d, exp_cap)
    cache = sys._cache
    if key not in cache:
        if row_count(sys, d, exp_cap) == 0:
            cache[key] = 0
        else:
            _, _, M = _build(sys, d, exp_cap)
            cache[key] = linalg.rank(M, sys.ring.p)
    return cache[key]


def ideal_dim(sys: SystemInstance, d: Degree, exp_cap: int | None = None) -> int:
    return sum(piece_rank(sys, e, exp_cap) for e in pieces(sys, d))


def macaulay_rank(sys: SystemInstance, d: Degree, exp_cap: int | None = None) -> MacaulayView:
    """Assemble the Macaulay matrix in degree d and compute its rank."""
    sys.require_homogeneous()
    if isinstance(d, (int, np.integer)):
        sys = sys.collapsed()
        d = (int(d),)
    d = sys.ring.check_degree(d)
    row_index, cols, M = _build(sys, d, exp_cap)
    rk = linalg.rank(M, sys.ring.p) if M.size else 0
    return MacaulayView(d, row_index, cols, M, rk)


def quotient_dim(sys: SystemInstance, d: Degree, exp_cap: int | None = None) -> int:
    """dim (S/<h>)_d = dim S_d - rank phi_d."""
    sys.require_homogeneous()
    r = sys.ring
    return sum(len(monomial_basis(r, e, exp_cap)) - piece_rank(sys, e, exp_cap) for e in pieces(sys, d))


def quotient_hilbert(sys: SystemInstance, bound: int) -> dict[MultiDegree, int]:
    """Hilbert function of S/<h> on every multidegree with |d| <= bound."""
    sys.require_homogeneous()
    return {d: quotient_dim(sys, d) for d in degrees_up_to(sys.ring.s, bound)}


def quotient_hilbert_total(sys: SystemInstance, bound: int) -> list[int]:
    sys.require_homogeneous()
    return [quotient_dim(sys, t) for t in range(bound + 1)]


def _fills(sys: SystemInstance, t: int) -> bool:
    r = sys.ring
    ps = pieces(sys, t)
    # rank <= rows: a piece with fewer rows than columns cannot be filled
    for e in ps:
        if row_count(sys, e) < len(monomial_basis(r, e)):
            return False
    return all(piece_rank(sys, e) == len(monomial_basis(r, e)) for e in ps)


def dreg_actual(sys: SystemInstance, bound: int) -> DegreeAnswer:
    """Smallest total degree d with <h>_d = S_d, else NotFoundUpTo(bound)."""
    sys.require_homogeneous()
    for t in range(bound + 1):
        if _fills(sys, t):
            return Found(t)
    return NotFoundUpTo(bound)
