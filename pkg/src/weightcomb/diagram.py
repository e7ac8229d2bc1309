"""The basic 0-diagram over the integer-indexed tower of spliced modules.

Each copy of the spliced module sits at an integer index i; the order-2
operator pairs each socle character with its mirror cosocle character,
scaling by lambda_i on the distinguished character and shifting the index
by -1 / +1 on the two index-1 characters.  Pushing a coefficient vector
through a socle character and down the indecomposable summand containing
the mirrored cosocle weight yields one transfer rule per socle label
(two out of the distinguished label).  The saturation engine closes a
starting vector under these rules inside a finite index window and
reports whether the generated spans reach every unit vector in the inner
window (Full), are annihilated by an explicit certificate functional
(Proper), or neither can be decided within budget (Inconclusive).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import MissingLambda, RangeError, ZeroStartVector
from .gf import GF
from .modules import D1Basis, SplicedModule, summand_of_cosocle
from .params import s_conj, s_involution
from .sparse import Span, Vec, apply_functional, complement_functional, order_key

# -- lambda assignments ------------------------------------------------


@dataclass(frozen=True)
class LambdaSpec:
    """Nonzero scalars indexed by a window of integers."""

    field: GF
    values: dict[int, int]

    def __post_init__(self) -> None:
        for i, v in self.values.items():
            if not 0 < v < self.field.q:
                raise RangeError(f"lambda_{i} = {v} is not a nonzero field element")

    def at(self, i: int) -> int:
        try:
            return self.values[i]
        except KeyError:
            raise MissingLambda(f"lambda undefined at index {i}") from None

    def indices(self) -> list[int]:
        return sorted(self.values)

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "f": self.field.f,
            "modulus": list(self.field.modulus),
            "values": {str(i): self.field.coords(v) for i, v in sorted(self.values.items())},
        }


def lambda_const(fld: GF, radius: int, value: int | None = None) -> LambdaSpec:
    v = fld.one if value is None else value
    return LambdaSpec(fld, {i: v for i in range(-radius, radius + 1)})


def lambda_geometric(fld: GF, radius: int) -> LambdaSpec:
    """lambda_i = g^i for the least multiplicative generator g."""
    g = fld.generator()
    return LambdaSpec(fld, {i: fld.pow(g, i) for i in range(-radius, radius + 1)})


def lambda_random(fld: GF, radius: int, rng, distinct_radius: int | None = None) -> LambdaSpec:
    """Seeded random units passing the product-generic condition.

    Consecutive products d_i = lambda_{i-1} lambda_i avoid d_0 everywhere
    and are pairwise distinct for |i| <= distinct_radius + 1.  Built from
    the center outward so a valid choice always exists when the number of
    pairwise-distinct products stays below q-1.
    """
    units = list(fld.units())
    values: dict[int, int] = {0: rng.choice(units), -1: rng.choice(units)}
    products: dict[int, int] = {0: fld.mul(values[-1], values[0])}

    def pick(i: int, neighbor: int) -> None:
        # product index touched when choosing lambda_i next to lambda_neighbor
        pidx = i if i > neighbor else neighbor
        forbidden = {products[0]}
        if distinct_radius is not None and abs(pidx) <= distinct_radius + 1:
            forbidden.update(
                d for j, d in products.items() if abs(j) <= distinct_radius + 1
            )
        choices = [u for u in units if fld.mul(values[neighbor], u) not in forbidden]
        if not choices:
            raise RangeError("random lambda construction infeasible; enlarge the field")
        values[i] = rng.choice(choices)
        products[pidx] = fld.mul(values[min(i, neighbor)], values[max(i, neighbor)])

    for i in range(1, radius + 1):
        pick(i, i - 1)
    for i in range(-2, -radius - 1, -1):
        pick(i, i + 1)
    return LambdaSpec(fld, values)


def lambda_from_lines(fld: GF, lines) -> LambdaSpec:
    """Parse lines "i c0,c1,..." with coordinates in the canonical basis."""
    values: dict[int, int] = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise RangeError(f"malformed lambda line: {raw!r}")
        idx = int(parts[0])
        coords = [int(tok) for tok in parts[1].split(",")]
        values[idx] = fld.encode(coords)
    return LambdaSpec(fld, values)


def lambda_condition_check(lam: LambdaSpec, mode: str) -> bool:
    """Admissibility of lambda within its stored window.

    "paper" requires lambda_i != +-lambda_0 for all stored i != 0;
    "productGeneric" requires the consecutive products lambda_{i-1}
    lambda_i to differ from the product at i = 0.
    """
    fld = lam.field
    if mode == "paper":
        lam0 = lam.at(0)
        banned = {lam0, fld.neg(lam0)}
        return all(lam.values[i] not in banned for i in lam.values if i != 0)
    if mode == "productGeneric":
        d0 = fld.mul(lam.at(-1), lam.at(0))
        return all(
            fld.mul(lam.values[i - 1], lam.values[i]) != d0
            for i in lam.values
            if i != 0 and i - 1 in lam.values
        )
    raise RangeError(f"unknown mode {mode!r}")


# -- the order-2 operator on characters ---------------------------------


def pi_action(
    label: str, side: str, i: int, lam: LambdaSpec
) -> tuple[str, str, int, int]:
    """Image of a vector in the (label, side) character at copy-index i.

    Returns (label, other side, new index, scalar).  Applying it twice is
    the identity with net scalar 1, so the square of the operator acts
    trivially.
    """
    fld = lam.field
    if side == "S":
        if label == "sigma":
            return (label, "Q", i, lam.at(i))
        if label == "sigma_1":
            return (label, "Q", i - 1, fld.one)
        if label == "sigmaPrime_1":
            return (label, "Q", i + 1, fld.one)
        return (label, "Q", i, fld.one)
    if side == "Q":
        if label == "sigma":
            return (label, "S", i, fld.inv(lam.at(i)))
        if label == "sigma_1":
            return (label, "S", i + 1, fld.one)
        if label == "sigmaPrime_1":
            return (label, "S", i - 1, fld.one)
        return (label, "S", i, fld.one)
    raise RangeError(f"side must be 'S' or 'Q', got {side!r}")


def verify_pi_pairing(d1: D1Basis) -> bool:
    """Total order-2 pairing between the socle-side and mirror characters."""
    s_chars = dict(d1.s_chars)
    q_chars = dict(d1.q_chars)
    if len(s_chars) != len(d1.s_chars) or len(q_chars) != len(d1.q_chars):
        return False
    if set(s_chars) != set(q_chars):
        return False
    if len({c for c in s_chars.values()}) != len(s_chars):
        return False
    for lab, c in s_chars.items():
        if q_chars[lab] != s_conj(c):
            return False
        if s_conj(s_conj(c)) != c:
            return False
    return True


# -- transfer rules ------------------------------------------------------


@dataclass(frozen=True)
class TransferRule:
    """Image of a span at `source`: coefficient c_i moves to index
    i + shift, scaled by lambda_i when scale_lambda is set."""

    source: str
    target: str
    shift: int
    scale_lambda: bool


_SHIFTS = {"sigma_1": -1, "sigmaPrime_1": 1}


def transfer_rules(module: SplicedModule) -> list[TransferRule]:
    """One rule per (socle label, socle factor of the summand holding the
    mirrored cosocle weight): the operator sends the socle character to
    its mirror, which generates that summand, pulling in its full socle."""
    labels = module.socle_labels()
    reverse = {w: lab for lab, w in labels.items()}
    rules = []
    for lab, w in labels.items():
        shift = _SHIFTS.get(lab, 0)
        scale = lab == "sigma"
        landing = summand_of_cosocle(module, s_involution(w, module.ctx))
        for ws in landing.socles:
            rules.append(TransferRule(lab, reverse[ws], shift, scale))
    return rules


def rules_by_source(rules: list[TransferRule]) -> dict[str, list[tuple[int, TransferRule]]]:
    out: dict[str, list[tuple[int, TransferRule]]] = {}
    for idx, r in enumerate(rules):
        out.setdefault(r.source, []).append((idx, r))
    return out


def loop_composition(rules: list[TransferRule], l: int) -> dict:
    """Symbolic composite of each loop, as (index shift, multiset of
    lambda offsets relative to the input index).

    The loop through the plain chain must equal the shift-down-by-one of
    the lambda-diagonal, its double the two-step shift with offsets
    {0, -1} (the consecutive-product form); mirrored for the other loop.
    """

    def chain(seq: list[str]) -> tuple[int, tuple[int, ...]]:
        by_pair = {(r.source, r.target): r for r in rules}
        shift, offsets = 0, []
        for a, b in zip(seq, seq[1:]):
            r = by_pair[(a, b)]
            if r.scale_lambda:
                offsets.append(shift)
            shift += r.shift
        return shift, tuple(sorted(offsets))

    plain = ["sigma"] + [f"sigma_{k}" for k in range(1, l)] + ["sigma"]
    primed = ["sigma"] + [f"sigmaPrime_{k}" for k in range(1, l)] + ["sigma"]
    s1, o1 = chain(plain)
    s2, o2 = chain(primed)
    s1d, o1d = chain(plain[:-1] + plain)
    return {
        "plain": {"shift": s1, "lambda_offsets": list(o1)},
        "primed": {"shift": s2, "lambda_offsets": list(o2)},
        "plain_double": {"shift": s1d, "lambda_offsets": list(o1d)},
    }


# -- certificates --------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """A functional family annihilating everything derivable from the
    start vector while hitting some inner unit vector.

    kind "invariant_geometric": closed under every transfer rule up to a
    scalar, hence sound for unbounded saturation; parametrized by the
    ratio s with consecutive lambda-products constant.  kind
    "fixpoint_complement": complement of the stabilized truncated spans.
    """

    kind: str
    witness_label: str
    witness_index: int
    functionals: dict[str, dict[int, int]]
    ratio: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "witness_label": self.witness_label,
            "witness_index": self.witness_index,
            "ratio": self.ratio,
            "functionals": {
                lab: [[i, c] for i, c in sorted(phi.items())]
                for lab, phi in sorted(self.functionals.items())
            },
        }


def _label_class(label: str) -> str:
    if label == "sigma":
        return "sigma"
    if label in ("sigma_1", "sigmaPrime_1"):
        return "first"
    return "plain_deep" if label.startswith("sigma_") else "primed_deep"


def certificate_search(
    fld: GF,
    lam: LambdaSpec,
    labels: list[str],
    start_label: str,
    start_vec: Vec,
    outer: int,
) -> Certificate | None:
    """Search the geometric family of rule-invariant functionals.

    Exists only when all consecutive products lambda_{j-1} lambda_j agree
    on the window; the free ratio s must then be a unit root of the start
    vector's weighted polynomial.  Deterministic: least root wins.
    """
    idx = list(range(-outer, outer + 1))
    if any(i not in lam.values for i in idx):
        return None
    prod = fld.mul(lam.at(-outer), lam.at(-outer + 1))
    for j in range(-outer + 2, outer + 1):
        if fld.mul(lam.at(j - 1), lam.at(j)) != prod:
            return None

    for s in fld.units():
        inv_s = fld.inv(s)
        a = {0: fld.one}
        for j in range(1, outer + 1):
            a[j] = fld.mul(a[j - 1], fld.mul(lam.at(j), inv_s))
            a[-j] = fld.div(fld.mul(a[-j + 1], s), lam.at(-j + 1))

        def phi_for(label: str) -> dict[int, int]:
            cls = _label_class(label)
            if cls == "sigma":
                return dict(a)
            if cls == "first":
                return {j: fld.div(a[j], lam.at(j)) for j in idx}
            if cls == "plain_deep":
                return {j: fld.mul(a[j], inv_s) for j in idx}
            return {j: fld.div(fld.mul(a[j], s), prod) for j in idx}

        phi_start = phi_for(start_label)
        acc = 0
        for i, c in start_vec.items():
            acc = fld.add(acc, fld.mul(phi_start[i], c))
        if acc == 0:
            functionals = {lab: phi_for(lab) for lab in labels}
            return Certificate(
                kind="invariant_geometric",
                witness_label=labels[0],
                witness_index=0,
                functionals=functionals,
                ratio=s,
            )
    return None


def verify_certificate(
    cert: Certificate,
    rules: list[TransferRule],
    lam: LambdaSpec,
    spans: dict[str, Span],
    window: int,
) -> bool:
    """Check the certificate against the state: vanishing on every span
    row, nonzero on the witness unit, and (for the invariant kind)
    closure under every rule up to a constant scalar on the interior."""
    fld = lam.field
    phi_w = cert.functionals.get(cert.witness_label)
    if not phi_w or phi_w.get(cert.witness_index, 0) == 0:
        return False
    if abs(cert.witness_index) > window:
        return False
    for lab, span in spans.items():
        phi = cert.functionals.get(lab)
        if phi is None:
            return False
        for row in span.rows:
            if apply_functional(fld, phi, row) != 0:
                return False
    if cert.kind != "invariant_geometric":
        return True
    dom = sorted(cert.functionals[cert.witness_label])
    lo, hi = dom[0], dom[-1]
    for rule in rules:
        src = cert.functionals.get(rule.source, {})
        tgt = cert.functionals.get(rule.target, {})
        ratio = None
        for j in range(lo, hi + 1):
            if not lo <= j + rule.shift <= hi:
                continue
            lhs = tgt.get(j + rule.shift, 0)
            if rule.scale_lambda:
                lhs = fld.mul(lhs, lam.at(j))
            src_j = src.get(j, 0)
            if src_j == 0:
                if lhs != 0:
                    return False
                continue
            r = fld.div(lhs, src_j)
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


# -- saturation ----------------------------------------------------------


@dataclass
class ClosureState:
    """Outcome of one saturation run; immutable once returned."""

    verdict: str
    rounds_run: int
    window: int
    max_rounds: int
    start_label: str
    start_vec: Vec
    spans: dict[str, Span]
    covered: dict[str, list[int]]
    certificate: Certificate | None
    inserted: int
    discarded: int
    derivations: list[tuple[int, str, int, int]] = field(default_factory=list)
    raw_vectors: list[tuple[str, Vec]] = field(default_factory=list)
    flagged_finding: bool = False

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "rounds_run": self.rounds_run,
            "window": self.window,
            "max_rounds": self.max_rounds,
            "start_label": self.start_label,
            "start_vec": [[i, c] for i, c in sorted(self.start_vec.items())],
            "covered": {lab: cov for lab, cov in sorted(self.covered.items())},
            "spans": {lab: span.to_json() for lab, span in sorted(self.spans.items())},
            "certificate": self.certificate.to_json() if self.certificate else None,
            "inserted": self.inserted,
            "discarded": self.discarded,
            "flagged_finding": self.flagged_finding,
        }


def _paper_mode_flag(lam: LambdaSpec) -> bool:
    try:
        return lambda_condition_check(lam, "paper")
    except MissingLambda:
        return False


def _apply_rule(
    fld: GF, lam: LambdaSpec, rule: TransferRule, vec: Vec, outer: int
) -> Vec | None:
    """Rule image, or None when the support leaves the outer window."""
    out: Vec = {}
    for i, c in vec.items():
        j = i + rule.shift
        if abs(j) > outer:
            return None
        out[j] = fld.mul(lam.at(i), c) if rule.scale_lambda else c
    return out


def saturate(
    module: SplicedModule,
    lam: LambdaSpec,
    start_label: str,
    start_vec: Vec,
    window: int,
    max_rounds: int,
    log_derivations: bool = True,
) -> ClosureState:
    """Close the start vector under the transfer rules inside the window.

    A round drains the work queue to quiescence, so the truncated fixpoint
    is reached within one round and confirmed by the queue emptying; the
    outer window [-window-max_rounds, window+max_rounds] clips escaping
    supports.  Verdicts: Full when every unit vector of the inner window
    is covered at every label; Proper with a certificate (searched upfront
    in the rule-invariant geometric family, or the complement of the
    stabilized spans); Inconclusive otherwise.
    """
    fld = lam.field
    labels = list(module.socle_labels())
    if start_label not in labels:
        raise RangeError(f"unknown start label {start_label!r}")
    start_vec = {int(i): fld.check(c) for i, c in start_vec.items() if c}
    if not start_vec:
        raise ZeroStartVector("saturation started from the zero vector")
    if any(abs(i) > window for i in start_vec):
        raise RangeError(f"start support must lie in [-{window}, {window}]")
    if window < 1 or max_rounds < 0:
        raise RangeError("window must be >= 1 and max_rounds >= 0")

    outer = window + max_rounds
    rules = transfer_rules(module)
    by_source = rules_by_source(rules)
    spans = {lab: Span(fld) for lab in labels}
    covered: dict[str, set[int]] = {lab: set() for lab in labels}
    inner = [i for i in range(-window, window + 1)]
    need = len(inner) * len(labels)

    state = ClosureState(
        verdict="inconclusive",
        rounds_run=0,
        window=window,
        max_rounds=max_rounds,
        start_label=start_label,
        start_vec=dict(start_vec),
        spans=spans,
        covered={},
        certificate=None,
        inserted=0,
        discarded=0,
    )

    cert = certificate_search(fld, lam, labels, start_label, start_vec, outer)
    if cert is not None:
        spans[start_label].insert(dict(start_vec))
        state.inserted = 1
        state.verdict = "proper"
        state.certificate = cert
        state.covered = {lab: sorted(covered[lab], key=order_key) for lab in labels}
        state.flagged_finding = _paper_mode_flag(lam)
        return state

    def note_units(lab: str, units: list[int]) -> None:
        for u in units:
            if abs(u) <= window:
                covered[lab].add(u)

    def full() -> bool:
        return sum(len(c) for c in covered.values()) == need

    raw: list[tuple[str, Vec]] = [(start_label, dict(start_vec))]
    grew, units = spans[start_label].insert(dict(start_vec))
    state.inserted += 1
    note_units(start_label, units)
    queue: deque[int] = deque([0])
    is_full = full()

    while queue and state.rounds_run < max_rounds and not is_full:
        state.rounds_run += 1
        while queue and not is_full:
            vid = queue.popleft()
            lab, vec = raw[vid]
            for rule_idx, rule in by_source[lab]:
                image = _apply_rule(fld, lam, rule, vec, outer)
                if image is None:
                    state.discarded += 1
                    continue
                grew, units = spans[rule.target].insert(image)
                if not grew:
                    continue
                state.inserted += 1
                raw.append((rule.target, image))
                if log_derivations:
                    state.derivations.append(
                        (len(raw) - 1, rule.target, rule_idx, vid)
                    )
                queue.append(len(raw) - 1)
                note_units(rule.target, units)
                if full():
                    is_full = True
                    break

    state.covered = {lab: sorted(covered[lab], key=order_key) for lab in labels}
    if log_derivations:
        state.raw_vectors = raw
    if is_full:
        state.verdict = "full"
        return state
    if queue:
        state.verdict = "inconclusive"
        return state

    # stabilized truncated fixpoint without full coverage
    missing = [
        i for i in sorted(inner, key=order_key)
        if any(i not in covered[lab] for lab in labels)
    ]
    found = complement_functional(fld, list(spans.values()), missing)
    if found is None:
        state.verdict = "inconclusive"
        return state
    phi, witness = found
    state.verdict = "proper"
    state.certificate = Certificate(
        kind="fixpoint_complement",
        witness_label=next(
            lab for lab in labels if witness not in covered[lab]
        ),
        witness_index=witness,
        functionals={lab: dict(phi) for lab in labels},
    )
    state.flagged_finding = _paper_mode_flag(lam)
    return state
