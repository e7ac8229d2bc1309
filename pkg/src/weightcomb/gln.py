"""Residue-level bookkeeping for weights of GL_n restricted along the
(2,1,...,1) Levi.

A GL_n weight is a weakly decreasing integer tuple with consecutive gaps
at most q-1; it is M-regular when its last n-1 entries are pairwise
distinct.  Choosing the two alternating character residues (a, b) with a
outside the determinant powers of the socle and a != b forces every
weight whose restriction matches the socle data to be M-regular: the
residue constraints make consecutive entries non-congruent mod q-1, and
weak decrease with bounded gaps then forces strict decrease.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible, RangeError
from .modules import SplicedModule
from .params import Params


@dataclass(frozen=True)
class GlnWeight:
    n: int
    a: tuple[int, ...]


@dataclass(frozen=True)
class ChiChoice:
    a_val: int
    b_val: int
    pattern: tuple[int, ...]


def make_gln_weight(ctx: Params, a) -> GlnWeight:
    a = tuple(int(x) for x in a)
    n = len(a)
    if n < 3:
        raise RangeError(f"n must be >= 3, got {n}")
    for x, y in zip(a, a[1:]):
        if not 0 <= x - y <= ctx.det_mod:
            raise RangeError(f"gap {x - y} outside [0, {ctx.det_mod}]")
    return GlnWeight(n, a)


def is_m_regular(w: GlnWeight) -> bool:
    """True when the entries after the first are pairwise distinct."""
    tail = w.a[1:]
    return len(set(tail)) == len(tail)


def socle_det_powers(module: SplicedModule, ctx: Params) -> set[int]:
    """Determinant residues of the socle weights; at most 2l-1 <= 4f-1."""
    return {w.m % ctx.det_mod for w in module.socle_weights()}


def counting_bound(p: int, f: int) -> bool:
    return p**f - 1 > 4 * f - 1


def choose_ab(socle_dets: set[int], ctx: Params) -> tuple[int, int]:
    """Least residue avoiding the socle determinant powers, then the
    least residue different from it.  Existence needs q-1 > |dets|."""
    if len(socle_dets) > 4 * ctx.f - 1:
        raise Infeasible(f"{len(socle_dets)} det powers exceed 4f-1 = {4 * ctx.f - 1}")
    if not counting_bound(ctx.p, ctx.f):
        raise Infeasible(f"q-1 = {ctx.det_mod} does not exceed 4f-1")
    a_val = next(x for x in range(ctx.det_mod) if x not in socle_dets)
    b_val = 0 if a_val != 0 else 1
    return a_val, b_val


def build_chi_choice(a_val: int, b_val: int, n: int) -> ChiChoice:
    """Alternating residue pattern of length n-2, starting with a_val."""
    if a_val == b_val:
        raise RangeError("a and b must differ")
    pattern = tuple(a_val if j % 2 == 0 else b_val for j in range(n - 2))
    return ChiChoice(a_val, b_val, pattern)


@dataclass(frozen=True)
class MRegularReport:
    ok: bool
    enumerated: int
    counterexample: GlnWeight | None


def _suffixes(residues: list[int], ctx: Params):
    """All integer tuples (a_2, ..., a_n) realizing the residue sequence,
    weakly decreasing with gaps in [0, q-1] and a_n normalized to [0, q-2].

    Built bottom-up from a_n = its residue: each residue gap determines
    the next value uniquely, except that a zero residue gap branches into
    gap 0 and gap q-1.
    """
    q1 = ctx.det_mod
    seqs = [[residues[-1] % q1]]
    for res in reversed(residues[:-1]):
        nxt = []
        for s in seqs:
            delta = (res - s[0]) % q1
            nxt.append([s[0] + delta] + s)
            if delta == 0:
                nxt.append([s[0] + q1] + s)
        seqs = nxt
    return seqs


def verify_all_induced_m_regular(
    choice: ChiChoice, socle_dets: set[int], n: int, ctx: Params
) -> MRegularReport:
    """Enumerate every weight compatible with the restriction data and
    test M-regularity.

    a_2 ranges over the socle determinant residues, a_i for i >= 3 follows
    the alternating pattern; the top entry a_1 never affects M-regularity
    (only a_2..a_n are constrained to be distinct), so suffixes are
    enumerated exhaustively and a counterexample is completed with
    a_1 = a_2.
    """
    if len(choice.pattern) != n - 2:
        raise RangeError(f"pattern length {len(choice.pattern)} != n-2 = {n - 2}")
    count = 0
    for a2_res in sorted(socle_dets):
        residues = [a2_res % ctx.det_mod] + [x % ctx.det_mod for x in choice.pattern]
        for suffix in _suffixes(residues, ctx):
            count += 1
            tail = tuple(suffix)
            if len(set(tail)) != len(tail):
                witness = make_gln_weight(ctx, (tail[0],) + tail)
                return MRegularReport(False, count, witness)
    return MRegularReport(True, count, None)


def distinctness_implication(seq, modulus: int) -> tuple[bool, bool]:
    """(hypotheses, conclusion) for one sequence: weakly decreasing with
    gaps in [0, modulus] and consecutive entries non-congruent mod modulus
    must be strictly decreasing, hence pairwise distinct."""
    hyp = all(
        0 <= x - y <= modulus and (x - y) % modulus != 0
        for x, y in zip(seq, seq[1:])
    )
    concl = all(x > y for x, y in zip(seq, seq[1:])) and len(set(seq)) == len(seq)
    return hyp, concl
