"""Cyclic modules, the spliced module, and its invariant character basis.

Extension existence between weights is decided operationally through the
first graded piece of the cosocle filtration of the induced representation
of the s-conjugate character: an extension with socle tau over base sigma
exists exactly when tau occurs in that graded piece.  Chaining these
extensions along the two weight chains gives two loops C and C'; splicing
them along the doubled socle/cosocle weight produces a module whose socle
and cosocle are multiplicity-free of size 2l-1 and whose unipotent-fixed
space splits into 2l-1 mirror pairs of characters.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    CyclicityViolation,
    MultiplicityViolation,
    NotASocleWeight,
    PairingViolation,
    RangeError,
)
from .mu import eval_e, eval_tuple, g_act, mu_base, sigma_prime_sequence, sigma_sequence
from .params import BChar, Params, Weight, chi, is_generic, make_weight, s_conj, s_involution


@dataclass(frozen=True)
class ExtEdge:
    """A non-split two-layer extension: cosocle sitting over socle."""

    socle: Weight
    cosocle: Weight


@dataclass(frozen=True)
class IndecSummand:
    """An indecomposable summand of the spliced module.

    kind "Ext" is a two-layer extension; "MSoc" has one socle under two
    cosocle factors; "MCosoc" has two socle factors under one cosocle.
    """

    kind: str
    socles: tuple[Weight, ...]
    cosocles: tuple[Weight, ...]
    length: int

    def __post_init__(self) -> None:
        shapes = {"Ext": (1, 1, 2), "MSoc": (1, 2, 3), "MCosoc": (2, 1, 3)}
        if self.kind not in shapes:
            raise RangeError(f"unknown summand kind {self.kind!r}")
        ns, nc, ln = shapes[self.kind]
        if (len(self.socles), len(self.cosocles), self.length) != (ns, nc, ln):
            raise RangeError(f"malformed {self.kind} summand")


@dataclass(frozen=True, eq=False)
class SplicedModule:
    ctx: Params
    r: tuple[int, ...]
    summands: tuple[IndecSummand, ...]
    sigma: Weight
    sigma_s: Weight
    chain: tuple[Weight, ...] = field(repr=False)
    chain_prime: tuple[Weight, ...] = field(repr=False)

    def socle_labels(self) -> dict[str, Weight]:
        """Socle weights keyed by their chain label, in canonical order."""
        l = self.ctx.l
        out = {"sigma": self.sigma}
        for k in range(1, l):
            out[f"sigma_{k}"] = self.chain[k]
        for k in range(1, l):
            out[f"sigmaPrime_{k}"] = self.chain_prime[k]
        return out

    def socle_weights(self) -> list[Weight]:
        return list(self.socle_labels().values())

    def cosocle_weights(self) -> list[Weight]:
        return [s_involution(w, self.ctx) for w in self.socle_weights()]


@dataclass(frozen=True)
class D1Basis:
    """Character basis of the unipotent-fixed space, split into the socle
    side and its mirror, aligned label-by-label."""

    s_chars: tuple[tuple[str, BChar], ...]
    q_chars: tuple[tuple[str, BChar], ...]


def gr1_cosocle(w: Weight, ctx: Params, strict: bool = False) -> list[Weight]:
    """Weights in the first graded piece of the cosocle filtration of the
    principal series induced from the s-conjugate character of w.

    One candidate per cyclic shift of the base tuple, evaluated on the
    tuple of w and det-twisted by the corresponding exponent polynomial.
    Candidates whose entries leave [0, p-1] are vanishing terms and are
    skipped; with strict=True they raise instead (diagnostic for inputs
    drifting out of the admissible band).
    """
    if not is_generic(w, ctx):
        raise RangeError(f"graded piece computed only for generic weights, got {w}")
    base = mu_base(ctx)
    out = []
    for i in range(ctx.f):
        shifted = g_act(base, i)
        tup = eval_tuple(shifted, w.r)
        if all(0 <= x <= ctx.p - 1 for x in tup):
            out.append(make_weight(ctx, tup, eval_e(shifted, w.r, ctx) + w.m))
        elif strict:
            raise RangeError(f"image {tup} of {w} leaves [0, {ctx.p - 1}]")
    return out


def ext_exists(socle: Weight, base: Weight, ctx: Params) -> bool:
    """Does the non-split extension with the given socle over base^[s] exist?"""
    return socle in gr1_cosocle(base, ctx)


def build_cyclic(ctx: Params, r, primed: bool = False) -> list[ExtEdge]:
    """The l extension edges of one loop, verified to exist and to close."""
    seq = sigma_prime_sequence(ctx, r) if primed else sigma_sequence(ctx, r)
    if seq[ctx.l] != seq[0]:
        raise CyclicityViolation(f"chain fails to close at {(ctx.p, ctx.f, tuple(r))}")
    edges = []
    for k in range(1, ctx.l + 1):
        if not ext_exists(seq[k], seq[k - 1], ctx):
            raise CyclicityViolation(
                f"extension {k} missing at {(ctx.p, ctx.f, tuple(r))} (primed={primed})"
            )
        edges.append(ExtEdge(socle=seq[k], cosocle=s_involution(seq[k - 1], ctx)))
    return edges


def build_spliced(ctx: Params, r) -> SplicedModule:
    """Splice the two loops along the doubled weight.

    Summands: the interior extensions of both loops (indices 2..l-1), one
    length-3 summand with socle sigma under both index-(l-1) cosocles, and
    one length-3 summand with both index-1 socles under cosocle sigma^[s].
    """
    l = ctx.l
    build_cyclic(ctx, r, primed=False)
    build_cyclic(ctx, r, primed=True)
    seq = tuple(sigma_sequence(ctx, r))
    seq_p = tuple(sigma_prime_sequence(ctx, r))
    sigma = seq[0]
    sigma_s = s_involution(sigma, ctx)

    summands: list[IndecSummand] = []
    for k in range(2, l):
        summands.append(
            IndecSummand("Ext", (seq[k],), (s_involution(seq[k - 1], ctx),), 2)
        )
    for k in range(2, l):
        summands.append(
            IndecSummand("Ext", (seq_p[k],), (s_involution(seq_p[k - 1], ctx),), 2)
        )
    summands.append(
        IndecSummand(
            "MSoc",
            (sigma,),
            (s_involution(seq[l - 1], ctx), s_involution(seq_p[l - 1], ctx)),
            3,
        )
    )
    summands.append(
        IndecSummand("MCosoc", (seq[1], seq_p[1]), (sigma_s,), 3)
    )

    module = SplicedModule(
        ctx=ctx,
        r=tuple(int(x) for x in r),
        summands=tuple(summands),
        sigma=sigma,
        sigma_s=sigma_s,
        chain=seq,
        chain_prime=seq_p,
    )

    socle = [w for s in summands for w in s.socles]
    cosocle = [w for s in summands for w in s.cosocles]
    if len(set(socle)) != 2 * l - 1 or len(socle) != 2 * l - 1:
        raise MultiplicityViolation(
            f"socle weights collide at {(ctx.p, ctx.f, tuple(r))}"
        )
    if len(set(cosocle)) != 2 * l - 1 or len(cosocle) != 2 * l - 1:
        raise MultiplicityViolation(
            f"cosocle weights collide at {(ctx.p, ctx.f, tuple(r))}"
        )
    if sum(s.length for s in summands) != 4 * l - 2:
        raise MultiplicityViolation("total length is not 4l-2")
    return module


def jh_multiset(module: SplicedModule) -> Counter:
    """Jordan-Hoelder factors with multiplicity: all socle and cosocle
    layers of all summands (valid since every summand has length <= 3)."""
    c: Counter = Counter()
    for s in module.summands:
        c.update(s.socles)
        c.update(s.cosocles)
    return c


def d1_basis(module: SplicedModule) -> D1Basis:
    """Characters of the unipotent-fixed space: one per socle label plus
    its mirror, paired by the involution."""
    ctx = module.ctx
    s_chars = tuple((lab, chi(w, ctx)) for lab, w in module.socle_labels().items())
    if len({c for _, c in s_chars}) != len(s_chars):
        raise PairingViolation("socle characters are not pairwise distinct")
    q_chars = tuple((lab, s_conj(c)) for lab, c in s_chars)
    return D1Basis(s_chars=s_chars, q_chars=q_chars)


def summand_of_socle(module: SplicedModule, w: Weight) -> tuple[IndecSummand, int]:
    """The unique summand whose socle contains w, with its length."""
    for s in module.summands:
        if w in s.socles:
            return s, s.length
    raise NotASocleWeight(f"{w} is not a socle weight")


def summand_of_cosocle(module: SplicedModule, w: Weight) -> IndecSummand:
    for s in module.summands:
        if w in s.cosocles:
            return s
    raise NotASocleWeight(f"{w} is not a cosocle weight")


def module_to_json(module: SplicedModule) -> dict:
    return {
        "ctx": {"p": module.ctx.p, "f": module.ctx.f, "q": module.ctx.q, "l": module.ctx.l},
        "r": list(module.r),
        "sigma": module.sigma.to_json(),
        "sigmaS": module.sigma_s.to_json(),
        "summands": [
            {
                "kind": s.kind,
                "socles": [w.to_json() for w in s.socles],
                "cosocles": [w.to_json() for w in s.cosocles],
                "length": s.length,
            }
            for s in module.summands
        ],
    }


def module_to_dot(module: SplicedModule) -> str:
    """Undirected layer diagram: one cluster per summand, cosocle row
    ranked above the socle row."""
    lines = ["graph spliced_module {", "  node [shape=plaintext];"]
    soc_nodes, cos_nodes = [], []
    for idx, s in enumerate(module.summands):
        lines.append(f"  subgraph cluster_{idx} {{")
        lines.append(f'    label="{s.kind}";')
        for a, w in enumerate(s.cosocles):
            name = f"c{idx}_{a}"
            cos_nodes.append(name)
            lines.append(f'    {name} [label="{w}"];')
        for b, w in enumerate(s.socles):
            name = f"s{idx}_{b}"
            soc_nodes.append(name)
            lines.append(f'    {name} [label="{w}"];')
        for a in range(len(s.cosocles)):
            for b in range(len(s.socles)):
                lines.append(f"    c{idx}_{a} -- s{idx}_{b};")
        lines.append("  }")
    lines.append("  { rank=min; " + "; ".join(cos_nodes) + "; }")
    lines.append("  { rank=max; " + "; ".join(soc_nodes) + "; }")
    lines.append("}")
    return "\n".join(lines) + "\n"
