"""Instance generators: seeded random (multi)homogeneous systems, toy Rainbow
keys with sign/verify, the RBS dominant system, planted MinRank instances and
the Kipnis-Shamir (KS) system, plus the closed-form series of the last two.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    EvenCharacteristic,
    ShapeMismatch,
    SigningFailure,
    SingularSample,
    ZeroInverse,
)
from .field import DEFAULT_PRIME, FieldSpec
from .ring import MultiDegree, Poly, RingSpec, SystemInstance, monomial_basis
from .series import DegreeAnswer, Found, SeriesTrunc, expand_rational, find_dmulti

RETRY_CAP = 64


def random_system(r: RingSpec, mdegs: Sequence[Sequence[int]], seed: int) -> SystemInstance:
    """Dense (multi)homogeneous polynomials with uniform F_p coefficients."""
    rng = random.Random(seed)
    p = r.p
    polys = []
    for d in mdegs:
        d = r.check_degree(d)
        if not any(d):
            raise DimensionMismatch("generator degrees must be nonzero")
        basis = monomial_basis(r, d)
        if not basis:
            raise DimensionMismatch(f"no monomials of degree {d}")
        while True:
            f = Poly(r, {m: rng.randrange(p) for m in basis})
            if not f.is_zero():
                break
        polys.append(f)
    prov = {"generator": "random", "seed": seed, "mdegs": [list(d) for d in mdegs]}
    return SystemInstance(r, polys, prov)


# ------------------------------------------------------------------ Rainbow


def quad_form(M: np.ndarray, a: Sequence[int], q: int) -> int:
    """a M a^T mod q with exact integer arithmetic."""
    a = [int(x) % q for x in a]
    total = 0
    for i, ai in enumerate(a):
        if ai:
            row = M[i]
            total += ai * sum(int(row[j]) * aj for j, aj in enumerate(a) if aj)
    return total % q


def _random_matrix(rng: random.Random, rows: int, cols: int, q: int) -> np.ndarray:
    return np.array([[rng.randrange(q) for _ in range(cols)] for _ in range(rows)], dtype=np.int64).reshape(rows, cols)


def _random_invertible(rng: random.Random, n: int, q: int) -> np.ndarray:
    for _ in range(RETRY_CAP):
        M = _random_matrix(rng, n, n, q)
        if linalg.rank(M, q) == n:
            return M
    raise SingularSample(f"no invertible {n}x{n} sample after {RETRY_CAP} tries")


def _symmetric_from_upper(U: np.ndarray, q: int) -> np.ndarray:
    """Symmetric M with x M x^T = sum_{i<=j} U_ij x_i x_j (odd q)."""
    half = pow(2, -1, q)
    S = np.diag(np.diag(U)) % q
    off = np.triu(U, 1)
    S = (S + (off + off.T) * half) % q
    return S


@dataclass
class RainbowKey:
    q: int
    v: int
    o1: int
    o2: int
    MU: np.ndarray
    MT: np.ndarray
    central: list[np.ndarray]
    public: list[np.ndarray]
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.v + self.o1 + self.o2

    @property
    def m(self) -> int:
        return self.o1 + self.o2

    def central_map(self, a: Sequence[int]) -> list[int]:
        return [quad_form(M, a, self.q) for M in self.central]

    def public_map(self, a: Sequence[int]) -> list[int]:
        return [quad_form(M, a, self.q) for M in self.public]

    def U(self, a: Sequence[int]) -> list[int]:
        return [int(x) for x in linalg.matmul(np.array([a]), self.MU, self.q)[0]]

    def T(self, b: Sequence[int]) -> list[int]:
        return [int(x) for x in linalg.matmul(np.array([b]), self.MT, self.q)[0]]

    def relation_holds(self) -> bool:
        """M_{p_j} = sum_i (M_U M_{f_i} M_U^T) (M_T)_{ij} for every j."""
        q = self.q
        conj = [linalg.matmul(linalg.matmul(self.MU, F, q), self.MU.T, q) for F in self.central]
        for j, P in enumerate(self.public):
            acc = np.zeros_like(P)
            for i, C in enumerate(conj):
                acc = (acc + C * int(self.MT[i, j])) % q
            if not np.array_equal(acc % q, P % q):
                return False
        return all(np.array_equal(P, P.T) for P in self.public)

    def composition_holds(self, a: Sequence[int]) -> bool:
        return self.public_map(a) == self.T(self.central_map(self.U(a)))

    def layer_pattern_ok(self) -> bool:
        """Layer-1 forms avoid O1xO1 and every O2 term; layer-2 forms avoid O2xO2."""
        v, o1 = self.v, self.o1
        for k, F in enumerate(self.central):
            if k < o1:
                forbidden = F[v:, v:].copy()
                forbidden_o2_rows = F[v + o1:, :]
                if forbidden.any() or forbidden_o2_rows.any() or F[:, v + o1:].any():
                    return False
            elif F[v + o1:, v + o1:].any():
                return False
        return True


def rainbow_keygen(q: int, v: int, o1: int, o2: int, seed: int) -> RainbowKey:
    FieldSpec(q)
    if q == 2:
        raise EvenCharacteristic("toy Rainbow needs odd characteristic (symmetric matrices)")
    if min(v, o1, o2) < 1:
        raise DimensionMismatch("v, o1, o2 must be >= 1")
    rng = random.Random(seed)
    n, m = v + o1 + o2, o1 + o2
    central = []
    for k in range(m):
        vin = v if k < o1 else v + o1
        oil = o1 if k < o1 else o2
        U = np.zeros((n, n), dtype=np.int64)
        # vinegar x vinegar and vinegar x oil of this layer only
        for i in range(vin):
            for j in range(i, vin + oil):
                U[i, j] = rng.randrange(q)
        central.append(_symmetric_from_upper(U, q))
    MU = _random_invertible(rng, n, q)
    MT = _random_invertible(rng, m, q)
    conj = [linalg.matmul(linalg.matmul(MU, F, q), MU.T, q) for F in central]
    public = []
    for j in range(m):
        P = np.zeros((n, n), dtype=np.int64)
        for i in range(m):
            P = (P + conj[i] * int(MT[i, j])) % q
        public.append(P)
    key = RainbowKey(q, v, o1, o2, MU, MT, central, public, seed)
    if not key.relation_holds():  # pragma: no cover - construction identity
        raise SingularSample("public key does not satisfy the matrix relation")
    return key


def _invert_central(key: RainbowKey, target: Sequence[int], rng: random.Random) -> list[int] | None:
    """One preimage under F via vinegar guessing and two linear layer solves."""
    q, v, o1, o2, n = key.q, key.v, key.o1, key.o2, key.n
    a = [rng.randrange(q) for _ in range(v)] + [0] * (o1 + o2)
    for layer, (start, size, rows) in enumerate(((v, o1, range(o1)), (v + o1, o2, range(o1, o1 + o2)))):
        A = np.zeros((size, size), dtype=np.int64)
        b = np.zeros(size, dtype=np.int64)
        known = a[:start]
        for r_i, k in enumerate(rows):
            F = key.central[k]
            # f(a) = known F known^T + 2 * known F[:start, oil] * oil  (no oil x oil)
            const = quad_form(F[:start, :start], known, q)
            for c in range(size):
                col = start + c
                A[r_i, c] = 2 * sum(int(F[i, col]) * known[i] for i in range(start)) % q
            b[r_i] = (int(target[k]) - const) % q
        x = linalg.solve(A, b, q)
        if x is None or linalg.rank(A, q) < size:
            return None
        for c in range(size):
            a[start + c] = int(x[c])
    return a


def rainbow_sign(key: RainbowKey, message: Sequence[int], seed: int) -> list[int]:
    q = key.q
    if len(message) != key.m:
        raise DimensionMismatch(f"message must have length {key.m}")
    rng = random.Random(seed)
    b_prime = [int(x) for x in linalg.matmul(np.array([message]), linalg.inverse(key.MT, q), q)[0]]
    MU_inv = linalg.inverse(key.MU, q)
    for _ in range(RETRY_CAP):
        a_prime = _invert_central(key, b_prime, rng)
        if a_prime is not None:
            return [int(x) for x in linalg.matmul(np.array([a_prime]), MU_inv, q)[0]]
    raise SigningFailure(f"no signature after {RETRY_CAP} vinegar samples")


def rainbow_verify(key: RainbowKey, message: Sequence[int], signature: Sequence[int]) -> bool:
    return key.public_map(signature) == [int(x) % key.q for x in message]


def rainbow_sign_verify(key: RainbowKey, message: Sequence[int], seed: int) -> tuple[list[int], bool]:
    sig = rainbow_sign(key, message, seed)
    return sig, rainbow_verify(key, message, sig)


# --------------------------------------------------------------------- RBS


def rbs_ring(q: int, v: int, o1: int, o2: int) -> RingSpec:
    return RingSpec(FieldSpec(q), (("x", v + o1), ("y", o2)))


def rbs_system(pub: Sequence[np.ndarray], v: int, o1: int, o2: int, q: int) -> SystemInstance:
    """The RBS dominant system in F_q[x_1..x_{v+o1}, y_1..y_{o2}] (affine).

    With u = (x_1, .., x_{v+o1}, 0, .., 0, 1): the m forms u M_{p_i} u^T and
    the first n-1 entries of u M_{p_1} + sum_j y_j u M_{p_{o1+j}}.
    """
    n, m = v + o1 + o2, o1 + o2
    if len(pub) != m or any(np.asarray(P).shape != (n, n) for P in pub):
        raise ShapeMismatch(f"expected {m} matrices of shape {n}x{n}")
    r = rbs_ring(q, v, o1, o2)
    nx = v + o1
    xs = [Poly.var(r, i) for i in range(nx)]
    ys = [Poly.var(r, nx + j) for j in range(o2)]
    one = Poly.const(r, 1)
    u: list[Poly | None] = xs + [None] * (o2 - 1) + [one]

    def row_times(M: np.ndarray, col: int) -> Poly:
        acc = Poly(r)
        for l, ul in enumerate(u):
            c = int(M[l, col]) % q
            if ul is not None and c:
                acc = acc + ul * c
        return acc

    polys = []
    for P in pub:
        P = np.asarray(P)
        vec = [row_times(P, col) for col in range(n)]
        acc = Poly(r)
        for l, ul in enumerate(u):
            if ul is not None:
                acc = acc + ul * vec[l]
        polys.append(acc)
    for col in range(n - 1):
        acc = row_times(np.asarray(pub[0]), col)
        for j in range(o2):
            acc = acc + ys[j] * row_times(np.asarray(pub[o1 + j]), col)
        polys.append(acc)
    prov = {"generator": "rbs", "q": q, "v": v, "o1": o1, "o2": o2}
    return SystemInstance(r, polys, prov)


def rbs_expected_mdegs(v: int, o1: int, o2: int) -> list[MultiDegree]:
    n, m = v + o1 + o2, o1 + o2
    return [(2, 0)] * m + [(1, 1)] * (n - 1)


def rbs_closed_form(v: int, o1: int, o2: int, bound: int, guessed: int = 0) -> SeriesTrunc:
    """(1-t1 t2)^{v+o1+o2-1} (1-t1^2)^{o1+o2} / ((1-t1)^{v+o1-guessed} (1-t2)^{o2})."""
    return expand_rational(
        2,
        [((1, 1), v + o1 + o2 - 1), ((2, 0), o1 + o2)],
        [((1, 0), v + o1 - guessed), ((0, 1), o2)],
        bound,
    )


@dataclass(frozen=True)
class HybridChoice:
    guessed: int
    degree: int
    log2_cost: float


def log2_binomial(n: int, k: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def rbs_best_hybrid(q: int, v: int, o1: int, o2: int, omega: float = 2.81, bound: int = 60) -> HybridChoice:
    """Minimise q^k * C(n_k + D_k, D_k)^omega over k guessed x-variables,
    where D_k is D_{Z^2} of the RBS series with k fewer x-variables and
    n_k = v + o1 - k + o2 the remaining variable count."""
    best: HybridChoice | None = None
    for k in range(0, v + o1):
        if best is not None and k * math.log2(q) >= best.log2_cost:
            break
        D = find_dmulti(rbs_closed_form(v, o1, o2, bound, guessed=k))
        if not isinstance(D, Found):
            continue
        nk = v + o1 - k + o2
        cost = k * math.log2(q) + omega * log2_binomial(nk + D.value, D.value)
        if best is None or cost < best.log2_cost:
            best = HybridChoice(k, D.value, cost)
    if best is None:
        raise ValueError("no finite D within the bound")
    return best


# ------------------------------------------------------------ MinRank / KS


@dataclass
class MinRankInstance:
    p: int
    N: int
    r: int
    matrices: list[np.ndarray]
    secret: list[int]
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)
    seed: int | None = None

    @property
    def k(self) -> int:
        return len(self.matrices)

    def combination(self, coeffs: Sequence[int]) -> np.ndarray:
        acc = np.zeros((self.N, self.N), dtype=np.int64)
        for c, M in zip(coeffs, self.matrices):
            acc = (acc + M * (int(c) % self.p)) % self.p
        return acc

    def secret_rank(self) -> int:
        return linalg.rank(self.combination(self.secret), self.p)


def minrank_instance(N: int, k: int, r: int, seed: int, p: int = DEFAULT_PRIME) -> MinRankInstance:
    """k random N x N matrices with a planted combination of rank <= r."""
    if not (1 <= r < N) or k < 2:
        raise DimensionMismatch("need 1 <= r < N and k >= 2")
    FieldSpec(p)
    rng = random.Random(seed)
    for _ in range(RETRY_CAP):
        secret = [rng.randrange(1, p) for _ in range(k)]
        A = _random_matrix(rng, N, r, p)
        B = _random_matrix(rng, r, N, p)
        target = linalg.matmul(A, B, p)
        mats = [_random_matrix(rng, N, N, p) for _ in range(k - 1)]
        acc = np.zeros((N, N), dtype=np.int64)
        for c, M in zip(secret, mats):
            acc = (acc + M * c) % p
        last = (target - acc) % p * pow(secret[-1], -1, p) % p
        mats.append(last)
        inst = MinRankInstance(p, N, r, mats, secret, A, B, seed)
        probe = [rng.randrange(p) for _ in range(k)]
        # a random combination must not also be low rank
        if inst.secret_rank() <= r and linalg.rank(inst.combination(probe), p) > r:
            return inst
    raise SingularSample("could not sample a separating MinRank instance")


def ks_ring(p: int, k: int, r: int, c: int) -> RingSpec:
    blocks = (("x", k),) + tuple((f"k{j + 1}_", r) for j in range(c))
    return RingSpec(FieldSpec(p), blocks)


def ks_system(
    inst: MinRankInstance, r: int, c: int, unit_positions: Sequence[int] | None = None
) -> SystemInstance:
    """Kipnis-Shamir system: entries of w_j (sum_i x_i M_i) for j = 1..c.

    ``w_j`` carries a 1 at ``unit_positions[j]`` and the r unknowns k_j at
    the last r coordinates (after reordering, see :func:`ks_solution`). As in
    the usual modelling with as many equations per kernel vector as there are
    x-variables, the first k columns of the product are kept.
    """
    N, k = inst.N, inst.k
    if not (1 <= c <= N - r):
        raise ShapeMismatch(f"c must satisfy 1 <= c <= N - r = {N - r}")
    if k > N:
        raise ShapeMismatch(f"{k} x-variables but only {N} columns")
    free = list(unit_positions) if unit_positions is not None else list(range(N - r))
    if len(free) != N - r or sorted(set(free)) != sorted(free) or not set(free) <= set(range(N)):
        raise ShapeMismatch("unit_positions must be N - r distinct coordinates")
    kpos = [i for i in range(N) if i not in set(free)]
    ring = ks_ring(inst.p, k, r, c)
    xs = [Poly.var(ring, i) for i in range(k)]
    p = inst.p
    polys = []
    for j in range(c):
        kvars = [Poly.var(ring, k + j * r + l) for l in range(r)]
        for col in range(k):
            acc = Poly(ring)
            for i, M in enumerate(inst.matrices):
                coeff = int(M[free[j], col]) % p
                lin = Poly.const(ring, coeff)
                for l, row in enumerate(kpos):
                    e = int(M[row, col]) % p
                    if e:
                        lin = lin + kvars[l] * e
                if not lin.is_zero():
                    acc = acc + xs[i] * lin
            polys.append(acc)
    prov = {
        "generator": "ks",
        "N": N,
        "k": k,
        "r": r,
        "c": c,
        "unit_positions": free,
        "minrank_seed": inst.seed,
    }
    return SystemInstance(ring, polys, prov)


def ks_expected_mdegs(k: int, c: int) -> list[MultiDegree]:
    out = []
    for j in range(c):
        e = tuple(1 if (i == 0 or i == j + 1) else 0 for i in range(c + 1))
        out.extend([e] * k)
    return out


def ks_solution(inst: MinRankInstance, r: int, c: int) -> tuple[list[int], list[int]]:
    """Vanishing assignment (x = secret, k_j by linear solve) and the unit
    positions used. Rows of the secret matrix whose kernel vector cannot be
    normalised at the default coordinate are replaced by the next usable
    coordinate, so the returned positions may differ from range(N - r)."""
    p, N = inst.p, inst.N
    K0 = inst.combination(inst.secret)
    default = list(range(N - r))
    positions = default
    if not _kernel_shape_ok(K0, default, p):
        positions = _pivot_positions(K0, r, p)
    kpos = [i for i in range(N) if i not in set(positions)]
    assignment = [int(s) for s in inst.secret]
    for j in range(c):
        # (e_{u_j} | k) K0 = 0  <=>  K0[kpos]^T k = -K0[u_j]^T
        sol = linalg.solve(K0[kpos].T, (-K0[positions[j]]) % p, p)
        if sol is None:
            raise SingularSample("kernel vector not normalisable")
        assignment.extend(int(x) for x in sol)
    return assignment, positions


def _kernel_shape_ok(K0: np.ndarray, positions: list[int], p: int) -> bool:
    N = K0.shape[0]
    kpos = [i for i in range(N) if i not in set(positions)]
    for u in positions:
        if linalg.solve(K0[kpos].T, (-K0[u]) % p, p) is None:
            return False
    return True


def _pivot_positions(K0: np.ndarray, r: int, p: int) -> list[int]:
    """Coordinates where a reduced left-kernel basis has its unit pivots."""
    N = K0.shape[0]
    ker = linalg.left_nullspace(K0, p)
    # reverse column order so pivots prefer the leading coordinates
    R, pivots = linalg.row_echelon(ker, p, reduced=True)
    chosen = list(pivots)
    if len(chosen) < N - r:
        raise SingularSample("left kernel smaller than N - r")
    chosen = chosen[: N - r]
    if not _kernel_shape_ok(K0, chosen, p):
        raise SingularSample("no normalisable kernel shape found")
    return chosen


def ks_closed_form(x_count: int, eqs_per_block: int, r: int, c: int, bound: int) -> SeriesTrunc:
    """prod_j (1 - t0 tj)^{eqs} / ((1 - t0)^{x_count} prod_j (1 - tj)^r)."""
    s = c + 1

    def e(*idx: int) -> tuple[int, ...]:
        return tuple(1 if i in idx else 0 for i in range(s))

    return expand_rational(
        s,
        [(e(0, j), eqs_per_block) for j in range(1, c + 1)],
        [(e(0), x_count)] + [(e(j), r) for j in range(1, c + 1)],
        bound,
    )


def gemss_rank(D: int, a: int, v: int) -> int:
    """r = ceil(log2(D - 1)) + a + v."""
    return math.ceil(math.log2(D - 1)) + a + v


def ks_gemss_dmulti(n: int, D: int, a: int, v: int, c: int = 1, bound: int = 120) -> DegreeAnswer:
    """D_{Z^{c+1}} of the KS series for GeMSS parameters (x count = n - a)."""
    r = gemss_rank(D, a, v)
    return find_dmulti(ks_closed_form(n - a, n - a, r, c, bound))
