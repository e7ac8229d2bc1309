"""The f-tuple calculus of signed linear polynomials.

The base tuple mu has entries x-1, p-2-x, p-1-x, ..., p-1-x.  Cyclically
shifted copies of it compose into the powers mu^(k), which close up after
l steps (l = f for odd f, 2f for even f).  Each power carries a sign
vector in (Z/2)^f and, through the two-case exponent polynomial e, a
determinant-exponent trail.  Evaluating the powers on an admissible base
tuple r (all entries in [1, p-3]) produces the two weight chains used to
build the cyclic modules: the plain chain sigma_k and the shifted chain
obtained by applying one extra cyclic shift before evaluating.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import GenericityError, LengthMismatch, ParityError, RangeError
from .params import Params, Weight, make_weight


@dataclass(frozen=True)
class LinPoly:
    """A linear polynomial sign*x + c with sign in {+1, -1}."""

    sign: int
    c: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise RangeError(f"sign must be +-1, got {self.sign}")

    def __call__(self, x: int) -> int:
        return self.sign * x + self.c

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}x{self.c:+d}"


MuTuple = tuple[LinPoly, ...]
SignVector = tuple[int, ...]

X = LinPoly(1, 0)


def identity_tuple(f: int) -> MuTuple:
    return (X,) * f


def mu_base(ctx: Params) -> MuTuple:
    """Entries: x-1, p-2-x, then p-1-x in every remaining slot."""
    p = ctx.p
    return (LinPoly(1, -1), LinPoly(-1, p - 2)) + (LinPoly(-1, p - 1),) * (ctx.f - 2)


def g_act(t: tuple, k: int) -> tuple:
    """Cyclic shift: entry j of the result is entry (j+k) mod f of t.

    The direction is pinned by the recurrence consistency check below:
    with this convention entry j of mu^(k) is mu_{(j+k-1) mod f} applied
    to entry j of mu^(k-1).
    """
    f = len(t)
    k %= f
    return t[k:] + t[:k]


def compose(a: MuTuple, b: MuTuple) -> MuTuple:
    """Entry-wise substitution a_j(b_j(x))."""
    if len(a) != len(b):
        raise LengthMismatch(f"cannot compose tuples of lengths {len(a)} and {len(b)}")
    return tuple(
        LinPoly(x.sign * y.sign, x.sign * y.c + x.c) for x, y in zip(a, b)
    )


@lru_cache(maxsize=None)
def _mu_powers(p: int, f: int) -> tuple[MuTuple, ...]:
    ctx = Params(p, f)
    base = mu_base(ctx)
    powers = [identity_tuple(f)]
    for k in range(ctx.l):
        powers.append(compose(g_act(base, k), powers[-1]))
    return tuple(powers)


def mu_power(ctx: Params, k: int) -> MuTuple:
    """The k-fold composite g^(k-1)mu o ... o g mu o mu; identity at k=0."""
    if not 0 <= k <= ctx.l:
        raise RangeError(f"k must be in [0, {ctx.l}], got {k}")
    return _mu_powers(ctx.p, ctx.f)[k]


def mu_recurrence_step(prev: MuTuple, k: int, ctx: Params) -> MuTuple:
    """One inductive step: entry j maps to prev_j - 1 when j = 1-k mod f,
    to p-2-prev_j when j = 2-k mod f, and to p-1-prev_j otherwise."""
    if not 1 <= k <= ctx.l:
        raise RangeError(f"k must be in [1, {ctx.l}], got {k}")
    p, f = ctx.p, ctx.f
    out = []
    for j, e in enumerate(prev):
        if (j - (1 - k)) % f == 0:
            out.append(LinPoly(e.sign, e.c - 1))
        elif (j - (2 - k)) % f == 0:
            out.append(LinPoly(-e.sign, p - 2 - e.c))
        else:
            out.append(LinPoly(-e.sign, p - 1 - e.c))
    return tuple(out)


def sign_vector(t: MuTuple) -> SignVector:
    """Bit j is 0 exactly when entry j has leading sign +."""
    return tuple(0 if e.sign > 0 else 1 for e in t)


def expected_zero_count(f: int, k: int) -> int:
    """Closed-form count of 0-bits in the sign vector of the k-th power.

    Case table: for odd f the count is k for odd k and l-k for even k;
    for even f it is k or l-k for odd k (below/above l/2) and |l/2 - k|
    for even k.
    """
    l = f if f % 2 else 2 * f
    if f % 2:
        return k if k % 2 else l - k
    if k % 2:
        return k if k <= l // 2 else l - k
    return abs(l // 2 - k)


def eval_tuple(t: MuTuple, xs) -> tuple[int, ...]:
    if len(t) != len(xs):
        raise LengthMismatch(f"tuple length {len(t)} vs point length {len(xs)}")
    return tuple(e(x) for e, x in zip(t, xs))


def eval_e(t: MuTuple, xs, ctx: Params) -> int:
    """The exponent polynomial attached to t, evaluated at xs.

    Two cases on the last entry: when it is x or x-1 the raw weighted sum
    sum_j p^j (x_j - t_j(x_j)) is halved directly, otherwise q-1 is added
    first.  The halved quantity must be even; an odd value signals an
    input outside the supported theory.
    """
    if len(t) != ctx.f:
        raise LengthMismatch(f"tuple length {len(t)} vs f={ctx.f}")
    last = t[-1]
    direct = last.sign == 1 and last.c in (0, -1)
    s = sum(ctx.p**j * (x - e(x)) for j, (e, x) in enumerate(zip(t, xs)))
    num = s if direct else ctx.q - 1 + s
    if num % 2:
        raise ParityError(f"odd pre-halving sum {num} for {tuple(map(str, t))} at {xs}")
    return num // 2


def _check_base(ctx: Params, r) -> tuple[int, ...]:
    r = tuple(int(x) for x in r)
    if len(r) != ctx.f:
        raise GenericityError(f"base tuple has length {len(r)}, expected {ctx.f}")
    for x in r:
        if not 1 <= x <= ctx.p - 3:
            raise GenericityError(f"base entry {x} outside [1, {ctx.p - 3}]")
    return r


def det_exponent_trail(ctx: Params, r, primed: bool = False) -> list[int]:
    """Raw (unreduced) running det exponents e_0..e_l along a chain.

    The shifted chain accumulates the exponent of the (j+1)-shifted base
    tuple evaluated on the shifted power, mirroring the extra cyclic
    shift applied to the weights themselves.
    """
    r = _check_base(ctx, r)
    base = mu_base(ctx)
    trail = [0]
    for j in range(ctx.l):
        power = mu_power(ctx, j)
        if primed:
            step = eval_e(g_act(base, j + 1), eval_tuple(g_act(power, 1), r), ctx)
        else:
            step = eval_e(g_act(base, j), eval_tuple(power, r), ctx)
        trail.append(trail[-1] + step)
    return trail


def sigma_sequence(ctx: Params, r) -> list[Weight]:
    """Weights sigma_0..sigma_l of the plain chain; closes at sigma_l = sigma_0."""
    r = _check_base(ctx, r)
    trail = det_exponent_trail(ctx, r, primed=False)
    return [
        make_weight(ctx, eval_tuple(mu_power(ctx, k), r), trail[k])
        for k in range(ctx.l + 1)
    ]


def sigma_prime_sequence(ctx: Params, r) -> list[Weight]:
    """Weights of the shifted chain; also closes at index l."""
    r = _check_base(ctx, r)
    trail = det_exponent_trail(ctx, r, primed=True)
    return [
        make_weight(ctx, eval_tuple(g_act(mu_power(ctx, k), 1), r), trail[k])
        for k in range(ctx.l + 1)
    ]
