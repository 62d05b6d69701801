"""Truncated multivariate integer power series and the degree indicators
read off them (D_reg, D_{Z^s}, D_{Z^s,deglex}).

Series are truncated by total degree: a :class:`SeriesTrunc` of bound B holds
a coefficient for every d with |d| <= B. Coefficients are Python ints, so the
large cryptographic parameter sets never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .errors import ArityError, BoundTooLarge, DimensionMismatch
from .ring import MultiDegree, RingSpec, deglex_key, degrees_up_to

DEFAULT_ENTRY_CAP = 10**8


@dataclass(frozen=True)
class Found:
    value: int | MultiDegree

    def to_json(self):
        v = self.value
        return {"found": list(v) if isinstance(v, tuple) else v}

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int

    def to_json(self):
        return {"not_found_up_to": self.bound}

    def __str__(self) -> str:
        return f"not found <= {self.bound}"


DegreeAnswer = Found | NotFoundUpTo


def answer_from_json(obj: dict) -> DegreeAnswer:
    if "found" in obj:
        v = obj["found"]
        return Found(tuple(v) if isinstance(v, list) else v)
    return NotFoundUpTo(obj["not_found_up_to"])


def _entry_count(s: int, bound: int) -> int:
    return comb(bound + s, s)


@dataclass
class SeriesTrunc:
    s: int
    bound: int
    coeffs: dict[MultiDegree, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for d in self.coeffs:
            if len(d) != self.s or sum(d) > self.bound:
                raise DimensionMismatch(f"key {d} outside arity {self.s} / bound {self.bound}")

    def __getitem__(self, d: Sequence[int] | int) -> int:
        if isinstance(d, int):
            d = (d,)
        return self.coeffs.get(tuple(d), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesTrunc):
            return NotImplemented
        return (
            self.s == other.s
            and self.bound == other.bound
            and {k: v for k, v in self.coeffs.items() if v}
            == {k: v for k, v in other.coeffs.items() if v}
        )

    def degrees(self) -> tuple[MultiDegree, ...]:
        return degrees_up_to(self.s, self.bound)

    def items(self) -> list[tuple[MultiDegree, int]]:
        """(d, coefficient) for every |d| <= bound, deglex ascending."""
        return [(d, self.coeffs.get(d, 0)) for d in self.degrees()]

    def truncate(self, bound: int) -> SeriesTrunc:
        bound = min(bound, self.bound)
        return SeriesTrunc(self.s, bound, {d: c for d, c in self.coeffs.items() if sum(d) <= bound})

    def __add__(self, other: SeriesTrunc) -> SeriesTrunc:
        _same_arity(self, other)
        bound = min(self.bound, other.bound)
        out = {}
        for d in degrees_up_to(self.s, bound):
            c = self[d] + other[d]
            if c:
                out[d] = c
        return SeriesTrunc(self.s, bound, out)

    def __neg__(self) -> SeriesTrunc:
        return SeriesTrunc(self.s, self.bound, {d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: SeriesTrunc) -> SeriesTrunc:
        return self + (-other)

    def __mul__(self, other: SeriesTrunc) -> SeriesTrunc:
        _same_arity(self, other)
        bound = min(self.bound, other.bound)
        out: dict[MultiDegree, int] = {}
        a = [(d, c) for d, c in self.coeffs.items() if c and sum(d) <= bound]
        b = [(d, c) for d, c in other.coeffs.items() if c and sum(d) <= bound]
        for d1, c1 in a:
            t1 = sum(d1)
            for d2, c2 in b:
                if t1 + sum(d2) > bound:
                    continue
                d = tuple(x + y for x, y in zip(d1, d2))
                out[d] = out.get(d, 0) + c1 * c2
        return SeriesTrunc(self.s, bound, {d: c for d, c in out.items() if c})

    def collapse(self) -> SeriesTrunc:
        """Substitute t_i := t, summing coefficients by total degree."""
        out: dict[MultiDegree, int] = {}
        for d, c in self.coeffs.items():
            key = (sum(d),)
            out[key] = out.get(key, 0) + c
        return SeriesTrunc(1, self.bound, {d: c for d, c in out.items() if c})

    def to_json(self) -> list:
        return [[list(d), str(c)] for d, c in self.items()]


def _same_arity(a: SeriesTrunc, b: SeriesTrunc) -> None:
    if a.s != b.s:
        raise DimensionMismatch(f"series arities differ: {a.s} vs {b.s}")


def _check_cap(s: int, bound: int, cap: int) -> None:
    if bound < 0:
        raise DimensionMismatch("bound must be >= 0")
    if _entry_count(s, bound) > cap:
        raise BoundTooLarge(f"{_entry_count(s, bound)} coefficients exceed cap {cap}")


def _divide_inplace(c: dict, degs: Sequence[MultiDegree], w: MultiDegree) -> None:
    """Multiply by 1/(1 - t^w): ascending sweep, c[d] += c[d - w]."""
    for d in degs:
        prev = tuple(x - y for x, y in zip(d, w))
        if min(prev) >= 0:
            v = c.get(prev, 0)
            if v:
                c[d] = c.get(d, 0) + v


def _times_one_minus_inplace(c: dict, degs: Sequence[MultiDegree], g: MultiDegree) -> None:
    """Multiply by (1 - t^g): descending sweep, c[d] -= c[d - g]."""
    for d in reversed(degs):
        prev = tuple(x - y for x, y in zip(d, g))
        if min(prev) >= 0:
            v = c.get(prev, 0)
            if v:
                c[d] = c.get(d, 0) - v


def _one(s: int, bound: int) -> dict:
    return {(0,) * s: 1}


def hilbert_series_ring(r: RingSpec, bound: int, cap: int = DEFAULT_ENTRY_CAP) -> SeriesTrunc:
    """HS_S = prod over variables of 1/(1 - t^weight), truncated."""
    _check_cap(r.s, bound, cap)
    degs = degrees_up_to(r.s, bound)
    c = _one(r.s, bound)
    for w in r.weights:
        _divide_inplace(c, degs, w)
    return SeriesTrunc(r.s, bound, {d: v for d, v in c.items() if v})


def estimate_series(
    r: RingSpec, gen_degs: Iterable[Sequence[int]], bound: int, cap: int = DEFAULT_ENTRY_CAP
) -> SeriesTrunc:
    """Coefficients a_d of prod_i (1 - t^{deg h_i}) * HS_S(t), |d| <= bound."""
    gens = [r.check_degree(g) for g in gen_degs]
    for g in gens:
        if not any(g) or min(g) < 0:
            raise DimensionMismatch(f"generator degree {g} must be nonzero and nonnegative")
    hs = hilbert_series_ring(r, bound, cap)
    c = dict(hs.coeffs)
    degs = degrees_up_to(r.s, bound)
    for g in gens:
        _times_one_minus_inplace(c, degs, g)
    return SeriesTrunc(r.s, bound, {d: v for d, v in c.items() if v})


def divide_by_generators(series: SeriesTrunc, gen_degs: Iterable[Sequence[int]]) -> SeriesTrunc:
    """Multiply by prod_i (1 - t^{g_i})^{-1}; inverse of the numerator step."""
    degs = degrees_up_to(series.s, series.bound)
    c = dict(series.coeffs)
    for g in gen_degs:
        _divide_inplace(c, degs, tuple(g))
    return SeriesTrunc(series.s, series.bound, {d: v for d, v in c.items() if v})


def expand_rational(
    s: int,
    numerator: Iterable[tuple[Sequence[int], int]],
    denominator: Iterable[tuple[Sequence[int], int]],
    bound: int,
    cap: int = DEFAULT_ENTRY_CAP,
) -> SeriesTrunc:
    """Expand prod (1 - t^g)^e / prod (1 - t^w)^k as a truncated series.

    Each factor is expanded by its binomial series and the factors are
    convolved; this path shares no code with :func:`estimate_series`.
    """
    _check_cap(s, bound, cap)
    result = SeriesTrunc(s, bound, _one(s, bound))
    for g, e in numerator:
        g = tuple(g)
        tg = sum(g)
        terms = {}
        for k in range(0, min(e, bound // tg) + 1):
            terms[tuple(k * x for x in g)] = (-1) ** k * comb(e, k)
        result = result * SeriesTrunc(s, bound, terms)
    for w, k in denominator:
        w = tuple(w)
        tw = sum(w)
        terms = {tuple(j * x for x in w): comb(k - 1 + j, j) for j in range(bound // tw + 1)}
        result = result * SeriesTrunc(s, bound, terms)
    return result


def find_dreg(series: SeriesTrunc) -> DegreeAnswer:
    """Smallest d >= 1 whose coefficient is <= 0 (non-positive)."""
    if series.s != 1:
        raise ArityError(f"D_reg needs a univariate series, got s={series.s}; collapse it first")
    for d in range(1, series.bound + 1):
        if series[(d,)] <= 0:
            return Found(d)
    return NotFoundUpTo(series.bound)


def find_dmulti(series: SeriesTrunc) -> DegreeAnswer:
    """Minimal |d| with a_d strictly negative."""
    for d, c in series.items():
        if c < 0:
            return Found(sum(d))
    return NotFoundUpTo(series.bound)


def find_dmulti_ordered(series: SeriesTrunc) -> DegreeAnswer:
    """Deglex-minimal multidegree d with a_d strictly negative."""
    for d, c in series.items():
        if c < 0:
            return Found(d)
    return NotFoundUpTo(series.bound)


def first_nonpositive_ordered(series: SeriesTrunc) -> DegreeAnswer:
    """Deglex-minimal d != 0 with a_d <= 0 (the non-positive variant)."""
    for d, c in series.items():
        if any(d) and c <= 0:
            return Found(d)
    return NotFoundUpTo(series.bound)


def answer_le(a: DegreeAnswer, b: DegreeAnswer) -> bool:
    """a <= b for Found answers (deglex for multidegrees)."""
    if not (isinstance(a, Found) and isinstance(b, Found)):
        raise ValueError("comparison needs two Found answers")
    va, vb = a.value, b.value
    if isinstance(va, tuple):
        return deglex_key(va) <= deglex_key(vb)
    return va <= vb
