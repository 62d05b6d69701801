"""Z^s-graded polynomial rings over prime fields.

Monomials are exponent tuples of length n and multidegrees are tuples of
length s. Inside a degree piece monomials are listed in descending
lexicographic order of their exponent vectors; every matrix in the package
indexes columns that way.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, FormatError, NonHomogeneousSystem, ZeroPolynomial
from .field import FieldSpec

MultiDegree = tuple[int, ...]
Monomial = tuple[int, ...]


@dataclass(frozen=True)
class RingSpec:
    field: FieldSpec
    blocks: tuple[tuple[str, int], ...]
    weights: tuple[MultiDegree, ...] | None = None

    def __post_init__(self) -> None:
        blocks = tuple((str(name), int(count)) for name, count in self.blocks)
        if not blocks:
            raise DimensionMismatch("a ring needs at least one block")
        for name, count in blocks:
            if count < 1:
                raise DimensionMismatch(f"block {name!r} has {count} variables")
        object.__setattr__(self, "blocks", blocks)
        n = sum(c for _, c in blocks)
        if self.weights is None:
            s = len(blocks)
            weights = []
            for i, (_, count) in enumerate(blocks):
                unit = tuple(1 if j == i else 0 for j in range(s))
                weights.extend([unit] * count)
            object.__setattr__(self, "weights", tuple(weights))
        else:
            weights = tuple(tuple(int(x) for x in w) for w in self.weights)
            if len(weights) != n:
                raise DimensionMismatch(f"{len(weights)} weights for {n} variables")
            s = len(weights[0])
            for w in weights:
                if len(w) != s or min(w) < 0 or not any(w):
                    raise DimensionMismatch(f"invalid variable weight {w}")
            object.__setattr__(self, "weights", weights)

    @classmethod
    def standard(cls, p: int, n: int, name: str = "x") -> RingSpec:
        return cls(FieldSpec(p), ((name, n),))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def s(self) -> int:
        return len(self.weights[0])

    @property
    def has_unit_weights(self) -> bool:
        return self == RingSpec(self.field, self.blocks)

    @property
    def var_names(self) -> tuple[str, ...]:
        names = []
        for name, count in self.blocks:
            names.extend(f"{name}{i + 1}" for i in range(count))
        return tuple(names)

    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for _, count in self.blocks:
            out.append(slice(start, start + count))
            start += count
        return out

    def mdeg(self, exps: Monomial) -> MultiDegree:
        return _mdeg(self.weights, exps)

    def check_degree(self, d: Sequence[int]) -> MultiDegree:
        d = tuple(int(x) for x in d)
        if len(d) != self.s:
            raise DimensionMismatch(f"degree {d} has length {len(d)}, ring has s={self.s}")
        return d

    def collapsed(self) -> RingSpec:
        """Same variables graded by total weight |w| (s = 1)."""
        return RingSpec(self.field, self.blocks, tuple((sum(w),) for w in self.weights))

    def with_field(self, p: int) -> RingSpec:
        return RingSpec(FieldSpec(p), self.blocks, self.weights)


def _mdeg(weights: tuple[MultiDegree, ...], exps: Monomial) -> MultiDegree:
    s = len(weights[0])
    d = [0] * s
    for e, w in zip(exps, weights):
        if e:
            for j in range(s):
                d[j] += e * w[j]
    return tuple(d)


def total(d: Sequence[int]) -> int:
    return sum(d)


def deglex_key(d: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return (sum(d), tuple(d))


def deglex_cmp(a: Sequence[int], b: Sequence[int]) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot compare {tuple(a)} with {tuple(b)}")
    ka, kb = deglex_key(a), deglex_key(b)
    return (ka > kb) - (ka < kb)


@lru_cache(maxsize=None)
def degrees_up_to(s: int, bound: int) -> tuple[MultiDegree, ...]:
    """All d in Z_{>=0}^s with |d| <= bound, in ascending deglex order."""
    out: list[MultiDegree] = []
    for t in range(bound + 1):
        out.extend(sorted(compositions(t, s)))
    return tuple(out)


def compositions(t: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (t,)
        return
    for first in range(t, -1, -1):
        for rest in compositions(t - first, parts - 1):
            yield (first,) + rest


def deglex_prefix(d: MultiDegree) -> list[MultiDegree]:
    """All d0 with d0 ⪯ d under deglex, ascending."""
    key = deglex_key(d)
    return [e for e in degrees_up_to(len(d), sum(d)) if deglex_key(e) <= key]


def sub_degree(a: MultiDegree, b: MultiDegree) -> MultiDegree | None:
    diff = tuple(x - y for x, y in zip(a, b))
    return diff if min(diff, default=0) >= 0 else None


@lru_cache(maxsize=4096)
def monomial_basis(r: RingSpec, d: MultiDegree, exp_cap: int | None = None) -> tuple[Monomial, ...]:
    """Monomials of multidegree exactly ``d``, descending lex order.

    With ``exp_cap`` every exponent is restricted to ``< exp_cap``, i.e. the
    basis of the truncated ring F[x]/(x_1^cap, ..., x_n^cap) in degree d.
    """
    d = r.check_degree(d)
    if min(d) < 0:
        return ()
    if exp_cap is not None and exp_cap < 1:
        raise DimensionMismatch("exp_cap must be >= 1")
    weights = r.weights
    n, s = r.n, r.s
    # covers[k][j]: some variable k.. has positive weight in component j
    covers = [[False] * s for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        covers[k] = [covers[k + 1][j] or weights[k][j] > 0 for j in range(s)]

    out: list[Monomial] = []
    exps = [0] * n

    def rec(k: int, rem: list[int]) -> None:
        if k == n:
            if not any(rem):
                out.append(tuple(exps))
            return
        if any(rem[j] > 0 and not covers[k][j] for j in range(s)):
            return
        w = weights[k]
        emax = min(rem[j] // w[j] for j in range(s) if w[j] > 0)
        if exp_cap is not None:
            emax = min(emax, exp_cap - 1)
        for e in range(emax, -1, -1):
            exps[k] = e
            rec(k + 1, [rem[j] - e * w[j] for j in range(s)])
        exps[k] = 0

    rec(0, list(d))
    return tuple(out)


@lru_cache(maxsize=4096)
def basis_index(r: RingSpec, d: MultiDegree, exp_cap: int | None = None) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(r, d, exp_cap))}


def piece_dim(r: RingSpec, d: MultiDegree | None, exp_cap: int | None = None) -> int:
    if d is None or min(d) < 0:
        return 0
    return len(monomial_basis(r, d, exp_cap))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


class Homogeneity(enum.Enum):
    NOT_HOMOGENEOUS = "not-homogeneous"
    ZERO = "zero"


class Poly:
    """Sparse polynomial: dict exponent-tuple -> coefficient in [1, p)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms: dict[Monomial, int] | Iterable | None = None):
        self.ring = ring
        p, n = ring.p, ring.n
        clean: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, c in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != n or min(mono, default=0) < 0:
                raise DimensionMismatch(f"bad exponent vector {mono} for n={n}")
            c = (clean.get(mono, 0) + int(c)) % p
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self.terms = clean

    @classmethod
    def var(cls, ring: RingSpec, k: int) -> Poly:
        exps = [0] * ring.n
        exps[k] = 1
        return cls(ring, {tuple(exps): 1})

    @classmethod
    def const(cls, ring: RingSpec, c: int) -> Poly:
        return cls(ring, {(0,) * ring.n: c})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: Poly) -> None:
        if other.ring != self.ring:
            raise DimensionMismatch("polynomials live in different rings")

    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(self.ring, int(other))
        self._check(other)
        out = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return _raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        p = self.ring.p
        return _raw(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(self.ring, int(other))
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        p = self.ring.p
        if not isinstance(other, Poly):
            c = int(other) % p
            if c == 0:
                return _raw(self.ring, {})
            return _raw(self.ring, {m: v * c % p for m, v in self.terms.items()})
        self._check(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return _raw(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        result = Poly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, mono: Monomial, c: int = 1) -> Poly:
        p = self.ring.p
        return _raw(self.ring, {mono_mul(m, mono): v * c % p for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __call__(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total_ = 0
        for mono, c in self.terms.items():
            v = c
            for x, e in zip(point, mono):
                if e:
                    v = v * pow(int(x), e, p) % p
            total_ += v
        return total_ % p

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("degree of the zero polynomial")
        return max(sum(self.ring.mdeg(m)) for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), reverse=True)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.var_names
        parts = []
        for mono, c in self.sorted_terms():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


def _raw(ring: RingSpec, terms: dict[Monomial, int]) -> Poly:
    p = Poly.__new__(Poly)
    p.ring = ring
    p.terms = terms
    return p


def is_multihomogeneous(p: Poly, r: RingSpec | None = None) -> MultiDegree | Homogeneity:
    r = r or p.ring
    if not p.terms:
        return Homogeneity.ZERO
    degs = {r.mdeg(m) for m in p.terms}
    if len(degs) == 1:
        return degs.pop()
    return Homogeneity.NOT_HOMOGENEOUS


def top_component(p: Poly) -> Poly:
    """Terms of maximal total degree |mdeg|."""
    if not p.terms:
        raise ZeroPolynomial("top component of the zero polynomial")
    top = p.total_degree()
    return _raw(p.ring, {m: c for m, c in p.terms.items() if sum(p.ring.mdeg(m)) == top})


@dataclass(eq=False)
class SystemInstance:
    ring: RingSpec
    polys: list[Poly]
    provenance: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.polys = list(self.polys)
        for f in self.polys:
            if f.ring != self.ring:
                raise DimensionMismatch("polynomial ring differs from system ring")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SystemInstance)
            and self.ring == other.ring
            and self.polys == other.polys
            and self.provenance == other.provenance
        )

    def __len__(self) -> int:
        return len(self.polys)

    @property
    def m(self) -> int:
        return len(self.polys)

    @property
    def is_homogeneous(self) -> bool:
        return all(isinstance(is_multihomogeneous(f), tuple) for f in self.polys)

    @property
    def mdegs(self) -> list[MultiDegree]:
        """Multidegree of each generator; raises unless the system is homogeneous."""
        if "mdegs" not in self._cache:
            out = []
            for i, f in enumerate(self.polys):
                d = is_multihomogeneous(f)
                if not isinstance(d, tuple):
                    raise NonHomogeneousSystem(f"generator {i} is {d.value}")
                if not any(d):
                    raise NonHomogeneousSystem(f"generator {i} is a constant")
                out.append(d)
            self._cache["mdegs"] = out
        return self._cache["mdegs"]

    def top(self) -> SystemInstance:
        """System of top homogeneous components."""
        return SystemInstance(self.ring, [top_component(f) for f in self.polys], dict(self.provenance))

    def prefix(self, i: int) -> SystemInstance:
        """The subsystem h_1..h_i, cached so rank caches are shared."""
        key = ("prefix", i)
        if key not in self._cache:
            if i == len(self.polys):
                self._cache[key] = self
            else:
                self._cache[key] = SystemInstance(self.ring, self.polys[:i], dict(self.provenance))
        return self._cache[key]

    def collapsed(self) -> SystemInstance:
        """Same polynomials in the total-degree (s = 1) grading."""
        if self.ring.s == 1:
            return self
        if "collapsed" not in self._cache:
            r1 = self.ring.collapsed()
            self._cache["collapsed"] = SystemInstance(
                r1, [_raw(r1, dict(f.terms)) for f in self.polys], dict(self.provenance)
            )
        return self._cache["collapsed"]

    def over_field(self, p: int) -> SystemInstance:
        r = self.ring.with_field(p)
        return SystemInstance(r, [Poly(r, f.terms) for f in self.polys], dict(self.provenance))

    def require_homogeneous(self) -> list[MultiDegree]:
        return self.mdegs


# ---------------------------------------------------------------- file format


def system_to_dict(sys: SystemInstance) -> dict:
    r = sys.ring
    out: dict = {
        "field": {"p": r.p},
        "blocks": [{"name": name, "vars": count} for name, count in r.blocks],
    }
    if not r.has_unit_weights:
        out["weights"] = [list(w) for w in r.weights]
    out["polys"] = [[[c, list(m)] for m, c in f.sorted_terms()] for f in sys.polys]
    out["provenance"] = sys.provenance
    return out


def system_from_dict(obj: dict) -> SystemInstance:
    try:
        p = obj["field"]["p"]
        blocks = tuple((b["name"], b["vars"]) for b in obj["blocks"])
        weights = obj.get("weights")
        ring = RingSpec(FieldSpec(p), blocks, tuple(tuple(w) for w in weights) if weights else None)
        polys = []
        for terms in obj["polys"]:
            for c, _ in terms:
                if not (isinstance(c, int) and 0 <= c < p):
                    raise FormatError(f"coefficient {c!r} not an integer in [0, {p})")
            polys.append(Poly(ring, [(tuple(e), c) for c, e in terms]))
        return SystemInstance(ring, polys, dict(obj.get("provenance", {})))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed system file: {exc}") from exc


def dumps_system(sys: SystemInstance) -> str:
    obj = system_to_dict(sys)
    head = {k: v for k, v in obj.items() if k != "polys"}
    lines = ["{"]
    for k in ("field", "blocks", "weights"):
        if k in head:
            lines.append(f'  "{k}": {json.dumps(head[k], sort_keys=True)},')
    lines.append('  "polys": [')
    polys = [json.dumps(p, separators=(",", ":")) for p in obj["polys"]]
    lines.extend(f"    {p}" + ("," if i < len(polys) - 1 else "") for i, p in enumerate(polys))
    lines.append("  ],")
    lines.append(f'  "provenance": {json.dumps(obj["provenance"], sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_system(text: str) -> SystemInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return system_from_dict(obj)
