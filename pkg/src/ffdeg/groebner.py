"""Degree-bounded homogeneous Groebner bases (Macaulay-matrix / XL style) in
grevlex order, used to measure the experimental solving degree d_slv.

Degree d is processed by row reducing every monomial multiple of the basis
elements found so far that lands in S_d. Rows whose leading monomial is not
divisible by an earlier leading monomial are adjoined to the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import BoundTooLarge, DimensionMismatch
from .ring import Monomial, Poly, SystemInstance, mono_divides, monomial_basis
from .series import DegreeAnswer, Found, NotFoundUpTo

ENTRY_CAP = 5 * 10**7
STABLE_WINDOW = 2


def grevlex_desc(monos) -> list[Monomial]:
    """Sort same-degree monomials from largest to smallest in grevlex."""
    return sorted(monos, key=lambda m: tuple(reversed(m)))


def leading_monomial(f: Poly) -> Monomial:
    if f.is_zero():
        raise DimensionMismatch("zero polynomial has no leading monomial")
    return grevlex_desc(f.terms)[0]


@dataclass
class GBTrace:
    max_degree: int
    new_leading_by_degree: dict[int, int]
    basis: list[Poly]
    d_slv: DegreeAnswer
    leading: list[Monomial] = field(default_factory=list)

    def standard_count(self, ring, d: int) -> int:
        """Degree-d monomials not divisible by any leading monomial."""
        return sum(1 for m in monomial_basis(ring, (d,)) if not any(mono_divides(l, m) for l in self.leading))

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "degrees": sorted(self.new_leading_by_degree),
            "new_leading_by_degree": {str(d): c for d, c in sorted(self.new_leading_by_degree.items())},
            "d_slv": self.d_slv.to_json(),
        }


def _degree_rows(basis: list[tuple[int, Poly]], ring, d: int) -> list[Poly]:
    rows = []
    for deg, g in basis:
        if deg > d:
            continue
        if deg == d:
            rows.append(g)
            continue
        for m in monomial_basis(ring, (d - deg,)):
            rows.append(g.mul_monomial(m))
    return rows


def reduced_gb_bounded(sys: SystemInstance, max_degree: int) -> GBTrace:
    """Reduced grevlex basis of <h> up to ``max_degree`` (standard grading).

    d_slv is the largest degree contributing a new minimal leading monomial.
    It is Found once either some degree piece of the ideal fills S_d (no
    new leading monomial can appear afterwards) or the last two degrees
    before the bound added nothing; otherwise NotFoundUpTo(max_degree).
    """
    sys.require_homogeneous()
    std = sys.collapsed()
    ring = std.ring
    p = ring.p
    gens = [(d[0], h) for d, h in zip(std.mdegs, std.polys)]
    if max_degree < max(d for d, _ in gens):
        raise DimensionMismatch("max_degree must be at least the largest generator degree")
    basis: list[tuple[int, Poly]] = []
    leading: list[Monomial] = []
    new_by_degree: dict[int, int] = {}
    last_new: int | None = None
    quiet = 0
    filled = False
    start = min(d for d, _ in gens)
    for d in range(start, max_degree + 1):
        cur = basis + [(g_deg, g) for g_deg, g in gens if g_deg == d]
        rows = _degree_rows(cur, ring, d)
        cols = grevlex_desc(monomial_basis(ring, (d,)))
        if len(rows) * len(cols) > ENTRY_CAP:
            raise BoundTooLarge(f"degree {d} matrix {len(rows)}x{len(cols)} exceeds cap")
        index = {m: k for k, m in enumerate(cols)}
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for i, f in enumerate(rows):
            for m, c in f.terms.items():
                M[i, index[m]] = c
        R, pivots = linalg.row_echelon(M, p, reduced=True)
        added = 0
        for k, col in enumerate(pivots):
            lm = cols[col]
            if any(mono_divides(l, lm) for l in leading):
                continue
            terms = {cols[j]: int(R[k, j]) for j in np.nonzero(R[k])[0]}
            basis.append((d, Poly(ring, terms)))
            leading.append(lm)
            added += 1
        if added:
            new_by_degree[d] = added
            last_new = d
            quiet = 0
        else:
            quiet += 1
        if len(pivots) == len(cols):
            filled = True
            break
    # rows come from a reduced echelon form whose pivots include every
    # monomial divisible by a lower-degree leading monomial, so each new
    # element is already reduced against the whole basis
    if last_new is not None and (filled or quiet >= STABLE_WINDOW):
        answer: DegreeAnswer = Found(last_new)
    else:
        answer = NotFoundUpTo(max_degree)
    return GBTrace(max_degree, new_by_degree, [g for _, g in basis], answer, [leading_monomial(g) for _, g in basis])


def solving_degree(sys: SystemInstance, max_degree: int) -> DegreeAnswer:
    return reduced_gb_bounded(sys, max_degree).d_slv


def quotient_dims_from_trace(trace: GBTrace, ring, max_degree: int) -> list[int]:
    return [trace.standard_count(ring, d) for d in range(max_degree + 1)]
