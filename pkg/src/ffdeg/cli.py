"""Command-line front end.

Every subcommand reads or writes the JSON system format of
:func:`ffdeg.ring.dumps_system`. Exit status is 0 on success, 1 on a domain
error (bad input mathematics, malformed files) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import mpmath
import numpy as np

from . import __version__
from .cryptosys import (
    minrank_instance,
    ks_solution,
    ks_system,
    rainbow_keygen,
    random_system,
    rbs_system,
)
from .errors import DomainError, FormatError, MixedDegrees, OmegaOutOfRange
from .field import DEFAULT_PRIME, FieldSpec
from .groebner import reduced_gb_bounded
from .macaulay import dreg_actual, macaulay_rank
from .ring import RingSpec, SystemInstance, dumps_system, loads_system
from .series import (
    DegreeAnswer,
    Found,
    answer_from_json,
    estimate_series,
    find_dmulti,
    find_dmulti_ordered,
    find_dreg,
)
from .syzygy import dff_prime, dff_truncated, profile_csv, profile_table
from .verify import DEFAULT_TRIALS, SUITES, rows_csv, run_suite

DEFAULT_BOUND = 20
DEFAULT_OMEGA = 2.81
COMPARISON_OMEGA = 2.0

DSLV_CAVEAT = (
    "d_slv is measured as the largest degree contributing a new minimal grevlex "
    "leading monomial, with a two-degree stabilisation window; solver-reported "
    "solving degrees may differ by small constants on non-semi-regular inputs"
)
SIGN_NOTE = (
    "D_reg uses the first non-positive coefficient of the collapsed series, "
    "D_multi the first strictly negative one of the multigraded series"
)


# ------------------------------------------------------------- complexity


@dataclass(frozen=True)
class ComplexityParams:
    n: int
    d: int
    omega: float
    allow_omega_two: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise OmegaOutOfRange(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        lo_ok = self.omega > 2 or (self.allow_omega_two and self.omega == 2)
        if not (lo_ok and self.omega <= 3):
            raise OmegaOutOfRange(f"omega={self.omega} outside (2, 3]")

    @property
    def in_range(self) -> bool:
        return 2 < self.omega <= 3


def complexity_estimate(params: ComplexityParams) -> tuple[int, float]:
    """C(n + d, d)^omega, rounded, and its log2 to two decimals."""
    b = math.comb(params.n + params.d, params.d)
    with mpmath.workdps(max(30, int(params.omega * math.log10(b)) + 20)):
        value = int(mpmath.nint(mpmath.power(b, mpmath.mpf(params.omega))))
        log2 = float(mpmath.mpf(params.omega) * mpmath.log(b, 2))
    return value, round(log2, 2)


def _complexity_rows(n: int, indicators: dict[str, DegreeAnswer], omega: float) -> list[dict]:
    rows = []
    for name, ans in indicators.items():
        if not isinstance(ans, Found) or isinstance(ans.value, tuple) or ans.value < 1:
            continue
        for w in (omega, COMPARISON_OMEGA):
            params = ComplexityParams(n, ans.value, w, allow_omega_two=True)
            value, log2 = complexity_estimate(params)
            rows.append(
                {
                    "indicator": name,
                    "n": n,
                    "d": ans.value,
                    "omega": w,
                    "omega_in_range": params.in_range,
                    "log2": log2,
                    "value": str(value),
                }
            )
    return rows


# ---------------------------------------------------------------- report


def _answer_json(ans) -> dict:
    if isinstance(ans, dict):
        return ans
    return ans.to_json()


def build_report(
    system: SystemInstance,
    bound: int,
    omega: float = DEFAULT_OMEGA,
    seed: int | None = None,
    timings: bool = True,
    with_gb: bool = True,
) -> dict:
    """Every indicator for ``system`` (its top components) up to ``bound``."""
    ComplexityParams(1, 1, omega)
    top = system.top()
    mdegs = top.require_homogeneous()
    r = top.ring
    clock: dict[str, float] = {}

    def timed(name: str, fn: Callable):
        t0 = time.perf_counter()
        out = fn()
        clock[name] = round(time.perf_counter() - t0, 4)
        return out

    multi = timed("series", lambda: estimate_series(r, mdegs, bound))
    std = multi.collapse()
    ind: dict[str, object] = {}
    ind["D_reg"] = find_dreg(std)
    ind["D_multi"] = find_dmulti(multi)
    ind["D_multi_ordered"] = find_dmulti_ordered(multi)
    first = timed("dff_prime", lambda: dff_prime(top, bound, ordered=True))
    ind["dff_prime"] = Found(sum(first.value)) if isinstance(first, Found) else first
    ind["dff_prime_ordered"] = first
    try:
        ind["dff"] = timed("dff", lambda: dff_truncated(top, bound))
    except MixedDegrees as exc:
        ind["dff"] = {"not_applicable": str(exc)}
    ind["d_reg"] = timed("d_reg", lambda: dreg_actual(top, bound))
    if with_gb:
        try:
            ind["d_slv"] = timed("d_slv", lambda: reduced_gb_bounded(top, bound).d_slv)
        except DomainError as exc:
            ind["d_slv"] = {"not_applicable": str(exc)}
    table = timed("profile", lambda: profile_table(top, bound))
    notes = [DSLV_CAVEAT, SIGN_NOTE]
    falls = [a.value for a in (ind["dff"], ind["dff_prime"]) if isinstance(a, Found)]
    if falls and r.p > min(falls):
        notes.append(f"large-field regime: q = {r.p} > min(d_ff, d_ff') = {min(falls)}, so d_ff = d_ff' applies")
    scalar = {k: v for k, v in ind.items() if not isinstance(v, dict)}
    report = {
        "tool": "ffdeg",
        "version": __version__,
        "seed": seed,
        "bound": bound,
        "input": {
            "p": r.p,
            "blocks": [{"name": name, "vars": count} for name, count in r.blocks],
            "n": r.n,
            "s": r.s,
            "m": top.m,
            "mdegs": [list(d) for d in mdegs],
            "affine": not system.is_homogeneous,
            "provenance": system.provenance,
        },
        "indicators": {k: _answer_json(v) for k, v in ind.items()},
        "series": {"multigraded": multi.to_json(), "standard": std.to_json()},
        "syzygy_profile": profile_csv(table, r.s),
        "complexity": _complexity_rows(r.n, scalar, omega),
        "notes": notes,
    }
    if timings:
        report["timings"] = clock
    return report


# ------------------------------------------------------------------ io


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(path: str) -> SystemInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return loads_system(text)


def _answers_csv(pairs: list[tuple[str, object]]) -> str:
    lines = ["indicator,status,value"]
    for name, ans in pairs:
        if isinstance(ans, Found):
            v = ans.value
            lines.append(f"{name},found,{';'.join(map(str, v)) if isinstance(v, tuple) else v}")
        elif isinstance(ans, dict):
            lines.append(f"{name},not_applicable,")
        else:
            lines.append(f"{name},not_found_up_to,{ans.bound}")
    return "\n".join(lines) + "\n"


def _answers(args, pairs: list[tuple[str, object]]) -> None:
    if args.format == "csv":
        _emit(_answers_csv(pairs), args.out)
    else:
        obj = {name: _answer_json(a) for name, a in pairs}
        obj["bound"] = args.bound
        _emit(_dump_json(obj), args.out)


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _parse_blocks(text: str) -> tuple[tuple[str, int], ...]:
    out = []
    for part in text.split(","):
        name, _, count = part.partition(":")
        out.append((name.strip(), int(count)))
    return tuple(out)


# ------------------------------------------------------------- commands


def cmd_series(args) -> None:
    top = _load(args.system).top()
    multi = estimate_series(top.ring, top.require_homogeneous(), args.bound)
    if args.format == "csv":
        s = top.ring.s
        lines = [",".join([f"d{i + 1}" for i in range(s)] + ["coeff"])]
        lines += [",".join(map(str, list(d) + [c])) for d, c in multi.items()]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json({"bound": args.bound, "multigraded": multi.to_json(), "standard": multi.collapse().to_json()}), args.out)


def cmd_dreg(args) -> None:
    top = _load(args.system).top()
    series = estimate_series(top.ring, top.require_homogeneous(), args.bound).collapse()
    _answers(args, [("D_reg", find_dreg(series))])


def cmd_dmulti(args) -> None:
    top = _load(args.system).top()
    series = estimate_series(top.ring, top.require_homogeneous(), args.bound)
    _answers(args, [("D_multi", find_dmulti(series)), ("D_multi_ordered", find_dmulti_ordered(series))])


def cmd_dff(args) -> None:
    top = _load(args.system).top()
    if args.format == "csv":
        _emit(profile_csv(profile_table(top, args.bound), top.ring.s), args.out)
        return
    first = dff_prime(top, args.bound, ordered=True)
    total = Found(sum(first.value)) if isinstance(first, Found) else first
    _answers(args, [("dff_prime", total), ("dff_prime_ordered", first)])


def cmd_dff_trunc(args) -> None:
    top = _load(args.system).top()
    _answers(args, [("dff", dff_truncated(top, args.bound))])


def cmd_dreg_actual(args) -> None:
    top = _load(args.system).top()
    if args.dump_degree is not None:
        view = macaulay_rank(top, args.dump_degree)
        with open(args.dump_file or "macaulay.txt", "w", encoding="utf-8") as fh:
            view.dump(fh, top.ring.p)
    _answers(args, [("d_reg", dreg_actual(top, args.bound))])


def cmd_gb(args) -> None:
    top = _load(args.system).top()
    trace = reduced_gb_bounded(top, args.bound)
    obj = trace.to_json()
    obj["notes"] = [DSLV_CAVEAT]
    _emit(_dump_json(obj), args.out)


def cmd_estimate(args) -> None:
    system = _load(args.system)
    report = build_report(system, args.bound, args.omega, args.seed, not args.no_timings, not args.no_gb)
    if args.format == "csv":
        pairs = [
            (k, v if "not_applicable" in v else answer_from_json(v)) for k, v in report["indicators"].items()
        ]
        _emit(_answers_csv(pairs), args.out)
    else:
        _emit(_dump_json(report), args.out)


def cmd_complexity(args) -> None:
    params = ComplexityParams(args.n, args.d, args.omega, allow_omega_two=args.allow_omega_two)
    value, log2 = complexity_estimate(params)
    obj = {"n": args.n, "d": args.d, "omega": args.omega, "omega_in_range": params.in_range, "value": str(value), "log2": log2}
    if args.format == "csv":
        _emit("n,d,omega,log2,value\n" + f"{args.n},{args.d},{args.omega},{log2},{value}\n", args.out)
    else:
        _emit(_dump_json(obj), args.out)


def _matrix_json(M) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(M)]


def cmd_gen(args) -> None:
    seed = args.seed if args.seed is not None else 0
    kind = args.kind
    if kind == "random":
        field = FieldSpec(args.p)
        if args.blocks:
            ring = RingSpec(field, _parse_blocks(args.blocks))
        else:
            ring = RingSpec.standard(args.p, args.n)
        if args.mdegs:
            mdegs = [_parse_ints(part) for part in args.mdegs.split(";")]
        else:
            mdegs = [(args.degree,) if ring.s == 1 else (1,) * ring.s] * args.m
        _emit(dumps_system(random_system(ring, mdegs, seed)), args.out)
    elif kind == "rainbow":
        key = rainbow_keygen(args.q, args.v, args.o1, args.o2, seed)
        obj = {
            "q": key.q,
            "v": key.v,
            "o1": key.o1,
            "o2": key.o2,
            "seed": seed,
            "MU": _matrix_json(key.MU),
            "MT": _matrix_json(key.MT),
            "central": [_matrix_json(F) for F in key.central],
            "public": [_matrix_json(P) for P in key.public],
        }
        _emit(_dump_json(obj), args.out)
    elif kind == "rbs":
        key = rainbow_keygen(args.q, args.v, args.o1, args.o2, seed)
        sys_ = rbs_system(key.public, args.v, args.o1, args.o2, args.q)
        sys_.provenance["seed"] = seed
        _emit(dumps_system(sys_), args.out)
    elif kind == "minrank":
        inst = minrank_instance(args.N, args.k, args.r, seed, args.p)
        obj = {
            "p": inst.p,
            "N": inst.N,
            "r": inst.r,
            "seed": seed,
            "matrices": [_matrix_json(M) for M in inst.matrices],
            "secret": inst.secret,
        }
        _emit(_dump_json(obj), args.out)
    elif kind == "ks":
        inst = minrank_instance(args.N, args.k, args.r, seed, args.p)
        _, positions = ks_solution(inst, args.r, args.c)
        _emit(dumps_system(ks_system(inst, args.r, args.c, positions)), args.out)


def cmd_verify(args) -> None:
    suite = args.suite_opt or args.suite or "all"
    names = list(SUITES) if suite == "all" else [suite]
    results = [run_suite(name, args.trials, args.seed or 0, args.jobs) for name in names]
    summary = {"suites": [r.summary() for r in results], "seed": args.seed or 0}
    summary["violations"] = sum(r.violations for r in results)
    if args.csv:
        Path(args.csv).write_text(rows_csv(results), encoding="utf-8")
    if args.format == "csv":
        _emit(rows_csv(results), args.out)
    else:
        _emit(_dump_json(summary), args.out)
    if summary["violations"]:
        raise SystemExit(1)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--omega", type=float, default=DEFAULT_OMEGA)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timings", action="store_true")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="ffdeg", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_system(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--system", required=True, help="system JSON file")
        p.set_defaults(func=fn)
        return p

    with_system("series", cmd_series, "truncated multigraded and collapsed series")
    with_system("dreg", cmd_dreg, "D_reg from the collapsed series")
    with_system("dmulti", cmd_dmulti, "D_multi and its deglex-ordered variant")
    with_system("dff", cmd_dff, "d_ff' (csv: syzygy profile table)")
    with_system("dff-trunc", cmd_dff_trunc, "d_ff over F_p[x]/(x_i^p)")
    p = with_system("dreg-actual", cmd_dreg_actual, "d_reg from Macaulay ranks")
    p.add_argument("--dump-degree", type=int, default=None, help="also dump the Macaulay matrix of this degree")
    p.add_argument("--dump-file", default=None)
    with_system("gb", cmd_gb, "bounded grevlex basis trace and d_slv")
    p = with_system("estimate", cmd_estimate, "every indicator in one report")
    p.add_argument("--no-gb", action="store_true", help="skip the Groebner run")

    p = sub.add_parser("complexity", parents=[common], help="C(n+d, d)^omega")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--allow-omega-two", action="store_true")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("gen", parents=[common], help="generate instances")
    p.add_argument("kind", choices=("random", "rainbow", "rbs", "minrank", "ks"))
    p.add_argument("--p", type=int, default=DEFAULT_PRIME)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--blocks", default=None, help="e.g. x:2,y:2")
    p.add_argument("--mdegs", default=None, help="e.g. 1,1;1,1;2,0")
    p.add_argument("--q", type=int, default=31)
    p.add_argument("--v", type=int, default=2)
    p.add_argument("--o1", type=int, default=1)
    p.add_argument("--o2", type=int, default=1)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--c", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="theorem verification suites")
    p.add_argument("suite", nargs="?", choices=tuple(SUITES) + ("all",), default=None)
    p.add_argument("--suite", dest="suite_opt", choices=tuple(SUITES) + ("all",), default=None)
    p.add_argument("--trials", type=int, default=None, help=f"trials per suite (defaults {DEFAULT_TRIALS})")
    p.add_argument("--csv", default=None, help="write per-trial rows here")
    p.set_defaults(func=cmd_verify)
    return parser


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def main() -> None:
    raise SystemExit(run_command())


if __name__ == "__main__":
    main()
