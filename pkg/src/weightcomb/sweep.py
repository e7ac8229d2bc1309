"""Grid verification of the structural identities, with JSON reports.

Each grid point (p, f, r) runs the full battery of named checks; tuple
level checks depend only on (p, f) and are memoized.  A check returns
None on success or a human-readable counterexample message, so a failing
sweep carries its own witness.  Reports merge in grid order regardless of
worker completion order and contain no wall-clock data unless requested,
keeping byte-for-byte output stability.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from .errors import WeightCombError
from .modules import (
    build_cyclic,
    build_spliced,
    d1_basis,
    jh_multiset,
    summand_of_socle,
)
from .diagram import verify_pi_pairing
from .mu import (
    det_exponent_trail,
    expected_zero_count,
    g_act,
    identity_tuple,
    mu_power,
    mu_recurrence_step,
    sign_vector,
)
from .params import Params, make_weight

CHECK_NAMES = [
    "mu_recurrence",
    "sign_shift_symmetry",
    "sign_aperiodicity",
    "sign_zero_count",
    "tuple_distinctness",
    "det_trail_closes",
    "cyclic_closure",
    "spliced_invariants",
    "d1_pairing",
    "splice_overlap",
]


# -- tuple-level checks (depend on p, f only) ---------------------------


@lru_cache(maxsize=None)
def check_mu_recurrence(p: int, f: int) -> str | None:
    ctx = Params(p, f)
    for k in range(1, ctx.l + 1):
        if mu_recurrence_step(mu_power(ctx, k - 1), k, ctx) != mu_power(ctx, k):
            return f"recurrence mismatch at k={k}"
    if mu_power(ctx, ctx.l) != identity_tuple(f):
        return "power l is not the identity tuple"
    return None


@lru_cache(maxsize=None)
def check_sign_shift_symmetry(p: int, f: int) -> str | None:
    ctx = Params(p, f)
    for k in range(1, ctx.l + 1):
        lhs = sign_vector(mu_power(ctx, k))
        rhs = g_act(sign_vector(mu_power(ctx, ctx.l - k)), k)
        if lhs != rhs:
            return f"shift symmetry fails at k={k}: {lhs} vs {rhs}"
    return None


@lru_cache(maxsize=None)
def check_sign_aperiodicity(p: int, f: int) -> str | None:
    ctx = Params(p, f)
    for k in range(1, ctx.l):
        if f % 2 == 0 and k == ctx.l // 2:
            continue
        v = sign_vector(mu_power(ctx, k))
        for s in range(1, f):
            if g_act(v, s) == v:
                return f"sign vector at k={k} fixed by shift {s}"
    return None


@lru_cache(maxsize=None)
def check_sign_zero_count(p: int, f: int) -> str | None:
    ctx = Params(p, f)
    for k in range(1, ctx.l + 1):
        got = sign_vector(mu_power(ctx, k)).count(0)
        want = expected_zero_count(f, k)
        if got != want:
            return f"zero count at k={k}: got {got}, expected {want}"
    return None


@lru_cache(maxsize=None)
def check_tuple_distinctness(p: int, f: int) -> str | None:
    ctx = Params(p, f)
    l = ctx.l
    family = [mu_power(ctx, k) for k in range(1, l + 1)]
    family += [g_act(mu_power(ctx, k), 1) for k in range(1, l)]
    if len(set(family)) != 2 * l - 1:
        return "tuple family is not pairwise distinct"
    first = mu_power(ctx, 1)[0]
    if (first.sign, first.c) != (1, -1):
        return "first power entry 0 is not x-1"
    lm1 = mu_power(ctx, l - 1)[1]
    if (lm1.sign, lm1.c) != (1, 1):
        return "entry 1 of power l-1 is not x+1"
    if f % 2 == 0:
        half = mu_power(ctx, l // 2)
        if (half[0].sign, half[0].c) != (-1, p - 1):
            return "entry 0 of the half power is not p-1-x"
        if (half[1].sign, half[1].c) != (-1, p - 3):
            return "entry 1 of the half power is not p-3-x"
    return None


# -- point-level checks (depend on p, f, r) -----------------------------


def check_det_trail_closes(ctx: Params, r) -> str | None:
    for primed in (False, True):
        trail = det_exponent_trail(ctx, r, primed=primed)
        if trail[ctx.l] % ctx.det_mod != 0:
            return f"trail (primed={primed}) ends at {trail[ctx.l]} != 0 mod q-1"
    return None


def check_cyclic_closure(ctx: Params, r) -> str | None:
    try:
        plain = build_cyclic(ctx, r, primed=False)
        prime = build_cyclic(ctx, r, primed=True)
    except WeightCombError as exc:
        return str(exc)
    if len(plain) != ctx.l or len(prime) != ctx.l:
        return "wrong edge count"
    return None


def check_spliced_invariants(ctx: Params, r) -> str | None:
    try:
        module = build_spliced(ctx, r)
    except WeightCombError as exc:
        return str(exc)
    l = ctx.l
    if len(module.summands) != 2 * (l - 2) + 2:
        return "wrong summand count"
    if sum(s.length for s in module.summands) != 4 * l - 2:
        return "total length is not 4l-2"
    soc = module.socle_weights()
    if len(set(soc)) != 2 * l - 1:
        return "socle not multiplicity-free of size 2l-1"
    cos = module.cosocle_weights()
    if len(set(cos)) != 2 * l - 1:
        return "cosocle not multiplicity-free of size 2l-1"
    for w in soc:
        summand, length = summand_of_socle(module, w)
        if length not in (2, 3):
            return "summand of unexpected length"
    return None


def check_d1_pairing(ctx: Params, r) -> str | None:
    try:
        basis = d1_basis(build_spliced(ctx, r))
    except WeightCombError as exc:
        return str(exc)
    if len(basis.s_chars) != 2 * ctx.l - 1 or len(basis.q_chars) != 2 * ctx.l - 1:
        return "basis halves have wrong size"
    if not verify_pi_pairing(basis):
        return "pairing is not a bijection of order 2"
    return None


def check_splice_overlap(ctx: Params, r) -> str | None:
    """f=2 only: the doubled interior weight lies in the socle of the
    plain loop and in the cosocle of the shifted loop, and occurs twice
    in the spliced module's factor multiset."""
    if ctx.f != 2:
        return None
    r = tuple(r)
    overlap = make_weight(
        ctx, (ctx.p - 2 - r[0], r[1] + 1), r[0] + ctx.p * (ctx.p - 1)
    )
    plain = build_cyclic(ctx, r, primed=False)
    prime = build_cyclic(ctx, r, primed=True)
    if overlap not in [e.socle for e in plain]:
        return f"{overlap} missing from plain-loop socle"
    if overlap not in [e.cosocle for e in prime]:
        return f"{overlap} missing from shifted-loop cosocle"
    if jh_multiset(build_spliced(ctx, r))[overlap] != 2:
        return f"{overlap} does not occur twice in the factor multiset"
    return None


def run_point(p: int, f: int, r: tuple[int, ...]) -> dict:
    ctx = Params(p, f)
    checks: dict[str, bool] = {}
    failures: dict[str, str] = {}

    def record(name: str, msg: str | None) -> None:
        checks[name] = msg is None
        if msg is not None:
            failures[name] = msg

    record("mu_recurrence", check_mu_recurrence(p, f))
    record("sign_shift_symmetry", check_sign_shift_symmetry(p, f))
    record("sign_aperiodicity", check_sign_aperiodicity(p, f))
    record("sign_zero_count", check_sign_zero_count(p, f))
    record("tuple_distinctness", check_tuple_distinctness(p, f))
    record("det_trail_closes", check_det_trail_closes(ctx, r))
    record("cyclic_closure", check_cyclic_closure(ctx, r))
    record("spliced_invariants", check_spliced_invariants(ctx, r))
    record("d1_pairing", check_d1_pairing(ctx, r))
    record("splice_overlap", check_splice_overlap(ctx, r))

    trail = det_exponent_trail(ctx, r)
    out = {
        "p": p,
        "f": f,
        "r": list(r),
        "ok": all(checks.values()),
        "checks": checks,
        "detail": {"sigma_1_det": trail[1] % ctx.det_mod},
    }
    if failures:
        out["failures"] = failures
    return out


def _run_point_tuple(args: tuple[int, int, tuple[int, ...]]) -> dict:
    return run_point(*args)


def grid_points(
    p_list, f_list, max_exhaustive: int = 10_000, samples: int = 1_000, seed: int = 0
) -> tuple[list[tuple[int, int, tuple[int, ...]]], dict]:
    """Deterministic point list: exhaustive r-grid when small enough,
    otherwise seeded distinct samples, sorted lexicographically."""
    points = []
    modes = {}
    for p in sorted(p_list):
        for f in sorted(f_list):
            Params(p, f)  # validates early
            size = (p - 3) ** f
            if size <= max_exhaustive:
                rs = list(itertools.product(range(1, p - 2), repeat=f))
                modes[f"{p},{f}"] = "exhaustive"
            else:
                rng = random.Random(f"{seed}:{p}:{f}")
                chosen: set[tuple[int, ...]] = set()
                while len(chosen) < min(samples, size):
                    chosen.add(tuple(rng.randrange(1, p - 2) for _ in range(f)))
                rs = sorted(chosen)
                modes[f"{p},{f}"] = "sampled"
            points.extend((p, f, r) for r in rs)
    return points, modes


def run_verify_lemmas(
    p_list,
    f_list,
    max_exhaustive: int = 10_000,
    samples: int = 1_000,
    seed: int = 0,
    jobs: int = 1,
    timing: bool = False,
) -> dict:
    started = time.monotonic()
    points, modes = grid_points(p_list, f_list, max_exhaustive, samples, seed)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point_tuple, points, chunksize=64))
    else:
        results = [run_point(*pt) for pt in points]
    report = {
        "grid": {
            "p": sorted(p_list),
            "f": sorted(f_list),
            "modes": modes,
            "max_exhaustive": max_exhaustive,
            "samples": samples,
            "seed": seed,
        },
        "check_names": CHECK_NAMES,
        "points": results,
        "ok": all(pt["ok"] for pt in results),
        "point_count": len(results),
    }
    if timing:
        report["timing_seconds"] = round(time.monotonic() - started, 3)
    return report
