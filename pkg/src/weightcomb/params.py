"""Arithmetic context and the weight/character algebra of GL2 over F_{p^f}.

A weight is parametrized by an f-tuple r = (r_0, ..., r_{f-1}) with
0 <= r_j <= p-1 together with a determinant exponent m modulo q-1, where
q = p^f.  Its upper-triangular character sends (a b; 0 d) to a^r (ad)^m
with r = sum_j r_j p^j, so characters are exponent pairs (u, v) mod q-1.
Generic weights (neither all-0 nor all-(p-1)) biject with the characters
chi != chi^s, and the bar involution sigma -> sigma^[s] realizes
s-conjugation on that range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import NonGenericWeight, RangeError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 + (d & 1)
    return True


@dataclass(frozen=True)
class Params:
    """Ambient arithmetic: prime p > 3 and residue degree f >= 2.

    l is the period of the tuple calculus: f when f is odd, 2f when f is
    even.  Determinant exponents are reduced modulo det_mod = q - 1.
    """

    p: int
    f: int

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p <= 3:
            raise RangeError(f"p must be a prime > 3, got {self.p}")
        if self.f < 2:
            raise RangeError(f"f must be >= 2, got {self.f}")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def l(self) -> int:
        return self.f if self.f % 2 else 2 * self.f

    @property
    def det_mod(self) -> int:
        return self.q - 1


@dataclass(frozen=True)
class Weight:
    """An f-tuple of Frobenius-twist exponents and a reduced det exponent."""

    r: tuple[int, ...]
    m: int

    def to_json(self) -> dict:
        return {"r": list(self.r), "m": self.m}

    @staticmethod
    def from_json(obj: dict) -> "Weight":
        return Weight(tuple(obj["r"]), obj["m"])

    def __str__(self) -> str:
        return f"({','.join(map(str, self.r))})d{self.m}"


@dataclass(frozen=True)
class BChar:
    """Character of the upper-triangular subgroup: (a b; 0 d) -> a^u d^v."""

    u: int
    v: int

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v}

    @staticmethod
    def from_json(obj: dict) -> "BChar":
        return BChar(obj["u"], obj["v"])


def make_weight(ctx: Params, r, m: int) -> Weight:
    """Canonical weight: validated tuple, det exponent reduced mod q-1."""
    r = tuple(int(x) for x in r)
    if len(r) != ctx.f:
        raise RangeError(f"weight tuple has length {len(r)}, expected {ctx.f}")
    for x in r:
        if not 0 <= x <= ctx.p - 1:
            raise RangeError(f"tuple entry {x} outside [0, {ctx.p - 1}]")
    return Weight(r, m % ctx.det_mod)


def r_value(w: Weight, ctx: Params) -> int:
    """The integer r = sum_j r_j p^j attached to the tuple."""
    return sum(x * ctx.p**j for j, x in enumerate(w.r))


def chi(w: Weight, ctx: Params) -> BChar:
    """Character of the one-dimensional space of unipotent-fixed vectors."""
    r = r_value(w, ctx)
    return BChar((r + w.m) % ctx.det_mod, w.m % ctx.det_mod)


def s_conj(c: BChar) -> BChar:
    """Conjugation by the Weyl reflection: swap the diagonal exponents."""
    return BChar(c.v, c.u)


def is_generic(w: Weight, ctx: Params) -> bool:
    """True unless the tuple is constant 0 or constant p-1."""
    return not (all(x == 0 for x in w.r) or all(x == ctx.p - 1 for x in w.r))


def s_involution(w: Weight, ctx: Params) -> Weight:
    """The generic weight whose character is s_conj(chi(w)).

    Defined only for generic weights; componentwise p-1-r_j with det
    twisted by r.
    """
    if not is_generic(w, ctx):
        raise NonGenericWeight(f"s-involution undefined for {w}")
    r = r_value(w, ctx)
    return make_weight(ctx, tuple(ctx.p - 1 - x for x in w.r), w.m + r)


def weight_json_str(w: Weight) -> str:
    return json.dumps(w.to_json(), sort_keys=True)
