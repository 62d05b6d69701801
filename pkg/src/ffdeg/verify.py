"""Seeded verification suites for the first-fall-degree bounds, shared by the
``verify`` subcommand and the acceptance tests.

Each suite maps a trial seed to one row of indicator values plus an ``ok``
flag; rows are independent, so trials can run in a process pool. Aggregation
only counts, so the order in which trials finish does not matter.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .cryptosys import random_system
from .field import DEFAULT_PRIME, FieldSpec
from .macaulay import dreg_actual
from .ring import Poly, RingSpec, SystemInstance, degrees_up_to
from .series import Found, NotFoundUpTo, estimate_series, find_dmulti, find_dmulti_ordered
from .syzygy import (
    UnknownAboveBound,
    deglex_le,
    dff_prime,
    dff_truncated,
    dreg_series,
    h1_dim,
    h1_vanishes_up_to,
    hilbert_matches_series,
    is_semiregular,
    regular_up_to,
)

PROP3_PRIMES = (7, 11, 13)
BILINEAR_SHAPES = [(a, b, m) for a in range(1, 4) for b in range(a, 4) for m in range(2, 10)]


def fmt(ans) -> str:
    if isinstance(ans, Found):
        v = ans.value
        return ";".join(map(str, v)) if isinstance(v, tuple) else str(v)
    if isinstance(ans, NotFoundUpTo):
        return f"nf<={ans.bound}"
    return "" if ans is None else str(ans)


def trial_seed(base: int, i: int) -> int:
    return base * 10007 + i


def _standard(p: int, n: int) -> RingSpec:
    return RingSpec.standard(p, n)


def _bilinear(p: int, a: int, b: int) -> RingSpec:
    return RingSpec(FieldSpec(p), (("x", a), ("y", b)))


def _planted_fall(seed: int, n: int, m: int) -> SystemInstance:
    """m - 1 generic quadratics and x_1 * h_1, a forced early syzygy."""
    r = _standard(DEFAULT_PRIME, n)
    base = random_system(r, [(2,)] * (m - 1), seed)
    x1 = Poly.var(r, 0)
    polys = base.polys + [x1 * base.polys[0]]
    return SystemInstance(r, polys, {"generator": "planted-fall", "seed": seed, "n": n, "m": m})


# ---------------------------------------------------------------- thm5


def thm5_system(index: int, seed: int) -> tuple[str, SystemInstance]:
    """Trial ``index`` of the suite: the bilinear shapes first, then a mix."""
    rng = random.Random(seed)
    p = DEFAULT_PRIME
    if index < len(BILINEAR_SHAPES):
        a, b, m = BILINEAR_SHAPES[index]
        return f"bilinear{a}x{b}", random_system(_bilinear(p, a, b), [(1, 1)] * m, seed)
    kind = rng.choice(["dense", "dense", "planted"])
    n = rng.randint(2, 5)
    if kind == "planted":
        m = rng.randint(2, min(8, n + 2))
        return "planted", _planted_fall(seed, n, m)
    m = rng.randint(n, min(8, n + 3))
    degs = [(rng.choice((2, 2, 3)),) for _ in range(m)]
    return "dense", random_system(_standard(p, n), degs, seed)


def thm5_trial(index: int, seed: int, bound: int = 12) -> dict:
    kind, sys = thm5_system(index, seed)
    semi = is_semiregular(sys, bound)
    row = {"suite": "thm5", "seed": seed, "kind": kind, "n": sys.ring.n, "m": sys.m}
    D = dreg_series(sys, bound)
    dreg = dreg_actual(sys, bound) if isinstance(D, Found) else None
    row.update(semiregular="unknown" if isinstance(semi, UnknownAboveBound) else str(semi).lower())
    row.update(D_reg=fmt(D), d_reg=fmt(dreg))
    ok = True
    if semi is False:
        dff = dff_prime(sys, bound)
        row["dff_prime"] = fmt(dff)
        if not isinstance(dff, Found):
            ok = False  # a non-semi-regular system must fall below D_reg <= bound + 1
        else:
            if isinstance(D, Found) and dff.value + 1 > D.value:
                ok = False
            if isinstance(dreg, Found) and dff.value + 1 > dreg.value:
                ok = False
    if isinstance(D, Found) and isinstance(dreg, Found) and D.value > dreg.value:
        ok = False
    row["ok"] = ok
    return row


# ---------------------------------------------------------------- thm8


def thm8_system(seed: int) -> SystemInstance:
    rng = random.Random(seed)
    s = rng.choice((2, 3))
    sizes = [rng.randint(1, 3 if s == 2 else 2) for _ in range(s)]
    r = RingSpec(FieldSpec(DEFAULT_PRIME), tuple((f"x{i}_", k) for i, k in enumerate(sizes)))
    m = rng.randint(2, 6)
    pool = [d for d in degrees_up_to(s, 3) if any(d) and sum(d) >= 1]
    mdegs = [rng.choice(pool) for _ in range(m)]
    return random_system(r, mdegs, seed)


def thm8_trial(index: int, seed: int, bound: int = 8) -> dict:
    sys = thm8_system(seed)
    series = estimate_series(sys.ring, sys.mdegs, bound)
    D, Dord = find_dmulti(series), find_dmulti_ordered(series)
    row = {
        "suite": "thm8",
        "seed": seed,
        "s": sys.ring.s,
        "n": sys.ring.n,
        "m": sys.m,
        "D_multi": fmt(D),
        "D_multi_ordered": fmt(Dord),
    }
    ok = True
    if isinstance(D, Found):
        first = dff_prime(sys, D.value, ordered=True)
        row["dff_prime_ordered"] = fmt(first)
        if not isinstance(first, Found):
            ok = False
        else:
            row["dff_prime"] = sum(first.value)
            ok = sum(first.value) <= D.value and deglex_le(first.value, Dord.value)
    row["ok"] = ok
    return row


# --------------------------------------------------------------- prop3


def prop3_system(index: int, seed: int) -> SystemInstance:
    rng = random.Random(seed)
    q = PROP3_PRIMES[index % len(PROP3_PRIMES)]
    n = rng.randint(2, 4)
    m = rng.randint(n, n + 3)
    return random_system(_standard(q, n), [(2,)] * m, seed)


def prop3_trial(index: int, seed: int) -> dict:
    sys = prop3_system(index, seed)
    q = sys.ring.p
    bound = q - 1
    a, b = dff_truncated(sys, bound), dff_prime(sys, bound)
    qualifies = isinstance(a, Found) or isinstance(b, Found)
    row = {
        "suite": "prop3",
        "seed": seed,
        "q": q,
        "n": sys.ring.n,
        "m": sys.m,
        "dff": fmt(a),
        "dff_prime": fmt(b),
        "qualifies": qualifies,
        "ok": (a == b) if qualifies else True,
    }
    return row


# ---------------------------------------------------------------- diem


def diem_system(index: int, seed: int) -> SystemInstance:
    rng = random.Random(seed)
    p = DEFAULT_PRIME
    if index % 2 == 0:
        n = rng.randint(2, 4)
        m = rng.randint(2, 5)
        return random_system(_standard(p, n), [(rng.randint(1, 3),) for _ in range(m)], seed)
    a, b = rng.randint(1, 2), rng.randint(1, 3)
    pool = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (1, 2), (2, 1)]
    m = rng.randint(2, 4)
    return random_system(_bilinear(p, a, b), [rng.choice(pool) for _ in range(m)], seed)


def diem_trial(index: int, seed: int, bound: int = 10) -> dict:
    sys = diem_system(index, seed)
    mismatches = 0
    checked = 0
    first_irregular = None
    for d in degrees_up_to(sys.ring.s, bound):
        if not any(d):
            continue
        a = regular_up_to(sys, d)
        b = hilbert_matches_series(sys, d)
        c = h1_vanishes_up_to(sys, d)
        checked += 1
        if not (a == b == c):
            mismatches += 1
        if not a and first_irregular is None:
            first_irregular = d
    return {
        "suite": "diem",
        "seed": seed,
        "s": sys.ring.s,
        "n": sys.ring.n,
        "m": sys.m,
        "prefixes": checked,
        "first_irregular": fmt(Found(first_irregular)) if first_irregular else f"nf<={bound}",
        "mismatches": mismatches,
        "ok": mismatches == 0,
    }


# ------------------------------------------------------------- regular


def regular_system(seed: int) -> SystemInstance:
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    m = rng.randint(1, n)
    return random_system(_standard(DEFAULT_PRIME, n), [(rng.randint(2, 3),) for _ in range(m)], seed)


def regular_trial(index: int, seed: int, bound: int = 12) -> dict:
    sys = regular_system(seed)
    bad = [t for t in range(1, bound + 1) if h1_dim(sys, t) != 0]
    D = dreg_series(sys, bound)
    dreg = dreg_actual(sys, bound) if isinstance(D, Found) else None
    ok = not bad
    if isinstance(D, Found) and isinstance(dreg, Found) and D.value > dreg.value:
        ok = False
    return {
        "suite": "regular",
        "seed": seed,
        "n": sys.ring.n,
        "m": sys.m,
        "h1_nonzero_at": ";".join(map(str, bad)),
        "D_reg": fmt(D),
        "d_reg": fmt(dreg),
        "ok": ok,
    }


# ------------------------------------------------------------- runner


SUITES: dict[str, Callable[[int, int], dict]] = {
    "thm5": thm5_trial,
    "thm8": thm8_trial,
    "prop3": prop3_trial,
    "diem": diem_trial,
    "regular": regular_trial,
}

DEFAULT_TRIALS = {"thm5": 100, "thm8": 100, "prop3": 80, "diem": 50, "regular": 40}


@dataclass
class SuiteResult:
    suite: str
    rows: list[dict] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.rows if not r["ok"])

    @property
    def qualifying(self) -> int:
        return sum(1 for r in self.rows if r.get("qualifies", True))

    def summary(self) -> dict:
        return {"suite": self.suite, "trials": len(self.rows), "qualifying": self.qualifying, "violations": self.violations}


def _run_one(args: tuple[str, int, int]) -> dict:
    suite, index, seed = args
    return SUITES[suite](index, seed)


def run_suite(suite: str, trials: int | None = None, seed: int = 0, jobs: int = 1) -> SuiteResult:
    if suite not in SUITES:
        raise KeyError(suite)
    count = DEFAULT_TRIALS[suite] if trials is None else trials
    work = [(suite, i, trial_seed(seed, i)) for i in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, work))
    else:
        rows = [_run_one(w) for w in work]
    rows.sort(key=lambda r: r["seed"])
    return SuiteResult(suite, rows)


def rows_csv(results: list[SuiteResult]) -> str:
    """One CSV of per-trial rows; columns are the union over suites."""
    columns: list[str] = []
    for res in results:
        for row in res.rows:
            for k in row:
                if k not in columns:
                    columns.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, restval="", lineterminator="\n")
    w.writeheader()
    for res in results:
        w.writerows(res.rows)
    return buf.getvalue()
