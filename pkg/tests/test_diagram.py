"""Order-2 operator, transfer rules, and the saturation engine."""

import random

import pytest

from weightcomb import (
    GF,
    Params,
    build_spliced,
    d1_basis,
    lambda_condition_check,
    lambda_const,
    lambda_geometric,
    lambda_random,
    pi_action,
    saturate,
    transfer_rules,
    verify_certificate,
    verify_pi_pairing,
)
from weightcomb.diagram import (
    LambdaSpec,
    certificate_search,
    lambda_from_lines,
    loop_composition,
)
from weightcomb.errors import MissingLambda, RangeError, ZeroStartVector
from weightcomb.modules import D1Basis
from weightcomb.sparse import apply_functional


def setup_module_state(p=5, f=2, r=(1, 1)):
    ctx = Params(p, f)
    return ctx, build_spliced(ctx, r), GF(p, f)


CTX, MODULE, FLD = setup_module_state()
LABELS = list(MODULE.socle_labels())


class TestPiAction:
    def test_scaled_character(self):
        lam = lambda_const(FLD, 6, value=7)
        assert pi_action("sigma", "S", 0, lam) == ("sigma", "Q", 0, 7)

    def test_index_shifts(self):
        lam = lambda_const(FLD, 6)
        assert pi_action("sigma_1", "S", 5, lam) == ("sigma_1", "Q", 4, 1)
        assert pi_action("sigmaPrime_1", "S", 5, lam) == ("sigmaPrime_1", "Q", 6, 1)
        assert pi_action("sigma_2", "S", 5, lam) == ("sigma_2", "Q", 5, 1)

    def test_square_is_identity_with_unit_scalar(self):
        lam = LambdaSpec(FLD, {i: (i % 23) + 1 for i in range(-6, 7)})
        for label in LABELS:
            for side in ("S", "Q"):
                for i in (-3, 0, 2):
                    lab2, side2, i2, s1 = pi_action(label, side, i, lam)
                    lab3, side3, i3, s2 = pi_action(lab2, side2, i2, lam)
                    assert (lab3, side3, i3) == (label, side, i)
                    assert FLD.mul(s1, s2) == 1

    def test_missing_lambda(self):
        lam = lambda_const(FLD, 2)
        with pytest.raises(MissingLambda):
            pi_action("sigma", "S", 5, lam)


class TestTransferRules:
    def test_count_and_shape(self):
        rules = transfer_rules(MODULE)
        assert len(rules) == 2 * CTX.l
        scaled = [r for r in rules if r.scale_lambda]
        assert {(r.source, r.target) for r in scaled} == {
            ("sigma", "sigma_1"),
            ("sigma", "sigmaPrime_1"),
        }
        shifts = {(r.source, r.target): r.shift for r in rules}
        assert shifts[("sigma_1", "sigma_2")] == -1
        assert shifts[("sigmaPrime_1", "sigmaPrime_2")] == 1
        assert shifts[("sigma_3", "sigma")] == 0
        assert shifts[("sigmaPrime_3", "sigma")] == 0

    def test_shift_and_scale_match_pi_action(self):
        # probe with a non-constant lambda: a rule is lambda-scaled exactly
        # when the operator scales the probed index
        lam = LambdaSpec(FLD, {i: (abs(i) % 23) + 2 for i in range(-10, 11)})
        for rule in transfer_rules(MODULE):
            _, _, i2, scalar = pi_action(rule.source, "S", 3, lam)
            assert i2 - 3 == rule.shift
            assert (scalar == lam.at(3)) == rule.scale_lambda

    def test_loop_composition_symbolic(self):
        rules = transfer_rules(MODULE)
        loops = loop_composition(rules, CTX.l)
        assert loops["plain"] == {"shift": -1, "lambda_offsets": [0]}
        assert loops["primed"] == {"shift": 1, "lambda_offsets": [0]}
        # one more full turn picks up the consecutive product, not a square
        assert loops["plain_double"] == {"shift": -2, "lambda_offsets": [-1, 0]}

    def test_rule_count_other_degrees(self):
        for p, f in [(5, 3), (7, 2)]:
            ctx = Params(p, f)
            module = build_spliced(ctx, tuple([1] * f) if p == 5 else (2, 3))
            assert len(transfer_rules(module)) == 2 * ctx.l


class TestLambdaConditions:
    def test_constant_fails_both(self):
        lam = lambda_const(FLD, 5)
        assert not lambda_condition_check(lam, "paper")
        assert not lambda_condition_check(lam, "productGeneric")

    def test_alternating_signs_fail_paper(self):
        v = 2
        lam = LambdaSpec(FLD, {i: v if i % 2 == 0 else FLD.neg(v) for i in range(-5, 6)})
        assert not lambda_condition_check(lam, "paper")

    def test_geometric_small_window_passes_paper(self):
        # g^i != +-1 for 0 < |i| <= 5 since the unit group has order 24
        lam = lambda_geometric(FLD, 5)
        assert lambda_condition_check(lam, "paper")

    def test_product_generic_random(self):
        rng = random.Random(0)
        lam = lambda_random(FLD, 10, rng, distinct_radius=4)
        assert lambda_condition_check(lam, "productGeneric")
        ds = {
            i: FLD.mul(lam.values[i - 1], lam.values[i]) for i in range(-4, 6)
        }
        assert len(set(ds.values())) == len(ds)

    def test_unknown_mode(self):
        with pytest.raises(RangeError):
            lambda_condition_check(lambda_const(FLD, 2), "bogus")


class TestPairing:
    def test_real_basis_passes(self):
        assert verify_pi_pairing(d1_basis(MODULE))

    def test_duplicate_schar_fails(self):
        basis = d1_basis(MODULE)
        broken = D1Basis(
            s_chars=(basis.s_chars[0],) + basis.s_chars[: len(basis.s_chars) - 1],
            q_chars=basis.q_chars,
        )
        assert not verify_pi_pairing(broken)


class TestSaturateControls:
    def test_unit_start_full_at_every_label(self):
        lam = lambda_const(FLD, 46)
        for label in LABELS:
            state = saturate(MODULE, lam, label, {0: 1}, 6, 40)
            assert state.verdict == "full", label

    def test_difference_start_proper_with_sum_certificate(self):
        lam = lambda_const(FLD, 46)
        state = saturate(MODULE, lam, "sigma", {0: 1, 1: FLD.neg(1)}, 6, 40)
        assert state.verdict == "proper"
        cert = state.certificate
        assert cert.kind == "invariant_geometric"
        phi = cert.functionals["sigma"]
        assert set(phi.values()) == {1}
        assert verify_certificate(cert, transfer_rules(MODULE), lam, state.spans, 6)

    def test_random_good_lambda_full(self):
        for seed in (1, 2, 3):
            rng = random.Random(seed)
            lam = lambda_random(FLD, 44, rng, distinct_radius=4)
            start = {rng.randrange(-4, 5): rng.randrange(1, 25) for _ in range(3)}
            state = saturate(MODULE, lam, "sigma_2", start, 4, 40)
            assert state.verdict == "full", seed

    def test_alternating_lambda_certified_proper(self):
        # lambda alternating {x, -x}: non-constant, fails paper mode, but
        # consecutive products are constant, so a geometric certificate
        # exists for a start vector annihilated at some ratio
        x = 2
        lam = LambdaSpec(
            FLD, {i: x if i % 2 == 0 else FLD.neg(x) for i in range(-46, 47)}
        )
        assert not lambda_condition_check(lam, "paper")
        start = {0: 1, 2: FLD.neg(1)}  # phi(c) = 1 - a_2 with a_2 = -x^2/s^2
        cert = certificate_search(FLD, lam, LABELS, "sigma", start, 46)
        assert cert is not None
        state = saturate(MODULE, lam, "sigma", start, 2, 44)
        assert state.verdict == "proper"
        assert state.certificate.kind == "invariant_geometric"
        assert verify_certificate(
            state.certificate, transfer_rules(MODULE), lam, state.spans, 2
        )

    def test_verdicts_deterministic(self):
        rng = random.Random(9)
        lam = lambda_random(FLD, 24, rng, distinct_radius=4)
        a = saturate(MODULE, lam, "sigma", {0: 1, 1: 2}, 4, 20)
        b = saturate(MODULE, lam, "sigma", {0: 1, 1: 2}, 4, 20)
        assert a.to_json() == b.to_json()

    def test_window_monotone_full(self):
        lam = lambda_const(FLD, 46)
        big = saturate(MODULE, lam, "sigma", {0: 1}, 6, 40)
        assert big.verdict == "full"
        for smaller in (4, 2, 1):
            state = saturate(MODULE, lam, "sigma", {0: 1}, smaller, 40)
            assert state.verdict == "full"

    def test_window_monotone_full_random_lambda(self):
        rng = random.Random(21)
        lam = lambda_random(FLD, 46, rng, distinct_radius=7)
        big = saturate(MODULE, lam, "sigma_1", {0: 3}, 6, 40)
        assert big.verdict == "full"
        for smaller in (4, 2):
            assert saturate(MODULE, lam, "sigma_1", {0: 3}, smaller, 40).verdict == "full"

    def test_errors(self):
        lam = lambda_const(FLD, 10)
        with pytest.raises(ZeroStartVector):
            saturate(MODULE, lam, "sigma", {}, 4, 6)
        with pytest.raises(ZeroStartVector):
            saturate(MODULE, lam, "sigma", {0: 0}, 4, 6)
        with pytest.raises(RangeError):
            saturate(MODULE, lam, "sigma", {9: 1}, 4, 6)
        with pytest.raises(RangeError):
            saturate(MODULE, lam, "nope", {0: 1}, 4, 6)
        # scalars stored only on [-2, 2] cannot reach full coverage at
        # window 4: the scale rule must eventually touch a missing index
        with pytest.raises(MissingLambda):
            saturate(MODULE, lambda_const(FLD, 2), "sigma", {0: 1}, 4, 6)

    def test_budget_zero_is_inconclusive(self):
        lam = lambda_const(FLD, 8)
        state = saturate(MODULE, lam, "sigma", {0: 1}, 8, 0)
        assert state.verdict == "inconclusive"

    def test_degree_three_controls(self):
        # odd degree: l = 3, five labels, one interior extension per loop
        ctx = Params(5, 3)
        module = build_spliced(ctx, (1, 1, 1))
        fld = GF(5, 3)
        lam = lambda_const(fld, 24)
        assert saturate(module, lam, "sigma", {0: 1}, 4, 20).verdict == "full"
        state = saturate(module, lam, "sigma", {0: 1, 1: fld.neg(1)}, 4, 20)
        assert state.verdict == "proper"
        assert set(state.certificate.functionals["sigma"].values()) == {1}

    def test_fixpoint_complement_path(self, monkeypatch):
        # with the geometric search disabled, constant lambda saturates to
        # the truncated sum-zero fixpoint and the complement certificate
        # of the stabilized spans is emitted instead
        import weightcomb.diagram as diagram_mod

        monkeypatch.setattr(diagram_mod, "certificate_search", lambda *a, **k: None)
        lam = lambda_const(FLD, 6)
        state = saturate(MODULE, lam, "sigma", {0: 1, 1: FLD.neg(1)}, 2, 4)
        assert state.verdict == "proper"
        cert = state.certificate
        assert cert.kind == "fixpoint_complement"
        assert verify_certificate(cert, transfer_rules(MODULE), lam, state.spans, 2)
        phi = cert.functionals[cert.witness_label]
        assert apply_functional(FLD, phi, {cert.witness_index: 1}) != 0


class TestSoundness:
    def test_derivation_replay(self):
        # every logged insertion is the rule image of its parent
        from weightcomb.diagram import _apply_rule

        rng = random.Random(4)
        lam = lambda_random(FLD, 24, rng, distinct_radius=4)
        state = saturate(MODULE, lam, "sigma", {0: 1, 1: 3}, 4, 20)
        rules = transfer_rules(MODULE)
        raw = state.raw_vectors
        assert raw[0] == ("sigma", state.start_vec)
        for vid, label, rule_idx, parent in state.derivations:
            rule = rules[rule_idx]
            parent_label, parent_vec = raw[parent]
            assert rule.source == parent_label
            assert rule.target == label
            image = _apply_rule(FLD, lam, rule, parent_vec, 24 + 4)
            assert raw[vid] == (label, image)
            assert state.spans[label].contains(image)

    def test_full_coverage_is_genuine(self):
        lam = lambda_const(FLD, 45)
        state = saturate(MODULE, lam, "sigma", {0: 1}, 5, 40)
        assert state.verdict == "full"
        for label in LABELS:
            for i in range(-5, 6):
                assert state.spans[label].contains({i: 1}), (label, i)


class TestLambdaParsing:
    def test_from_lines(self):
        lines = ["# comment", "0 1,0", "1 2,3", "-1 0,1"]
        lam = lambda_from_lines(FLD, lines)
        assert lam.at(0) == 1
        assert lam.at(1) == FLD.encode([2, 3])
        assert lam.at(-1) == FLD.encode([0, 1])

    def test_rejects_zero_value(self):
        with pytest.raises(RangeError):
            lambda_from_lines(FLD, ["0 0,0"])

    def test_rejects_malformed(self):
        with pytest.raises(RangeError):
            lambda_from_lines(FLD, ["0 1,0 junk"])

    def test_json_round_shape(self):
        lam = lambda_const(FLD, 2)
        payload = lam.to_json()
        assert payload["p"] == 5 and payload["f"] == 2
        assert payload["values"]["0"] == [1, 0]


class TestCertificates:
    def test_search_needs_constant_products(self):
        rng = random.Random(11)
        lam = lambda_random(FLD, 10, rng, distinct_radius=3)
        start = {0: 1, 1: FLD.neg(1)}
        assert certificate_search(FLD, lam, LABELS, "sigma", start, 10) is None

    def test_search_finds_sum_functional(self):
        lam = lambda_const(FLD, 10)
        cert = certificate_search(FLD, lam, LABELS, "sigma", {0: 1, 1: FLD.neg(1)}, 10)
        assert cert is not None and cert.ratio == 1
        assert set(cert.functionals["sigma"].values()) == {1}

    def test_unit_start_admits_no_certificate(self):
        lam = lambda_const(FLD, 10)
        assert certificate_search(FLD, lam, LABELS, "sigma", {0: 1}, 10) is None

    def test_invariance_check_rejects_tampering(self):
        lam = lambda_const(FLD, 10)
        state = saturate(MODULE, lam, "sigma", {0: 1, 1: FLD.neg(1)}, 4, 6)
        cert = state.certificate
        bad_functionals = {k: dict(v) for k, v in cert.functionals.items()}
        bad_functionals["sigma_2"][0] = 7
        from weightcomb.diagram import Certificate

        bad = Certificate(
            kind=cert.kind,
            witness_label=cert.witness_label,
            witness_index=cert.witness_index,
            functionals=bad_functionals,
            ratio=cert.ratio,
        )
        assert not verify_certificate(bad, transfer_rules(MODULE), lam, state.spans, 4)

    def test_certificate_annihilates_future_spans(self):
        # saturating anyway: every span vector stays inside ker(phi)
        lam = lambda_const(FLD, 24)
        vec = {0: 1, 1: FLD.neg(1)}
        cert = certificate_search(FLD, lam, LABELS, "sigma", vec, 24)
        assert cert is not None
        rules = transfer_rules(MODULE)
        # drive the engine past the certificate by disabling the search:
        # emulate by inserting and chaining manually for a few steps
        from weightcomb.diagram import _apply_rule, rules_by_source
        from weightcomb.sparse import Span

        spans = {lab: Span(FLD) for lab in LABELS}
        spans["sigma"].insert(dict(vec))
        frontier = [("sigma", vec)]
        for _ in range(6):
            nxt = []
            for lab, v in frontier:
                for _, rule in rules_by_source(rules)[lab]:
                    img = _apply_rule(FLD, lam, rule, v, 24)
                    if img is not None and spans[rule.target].insert(dict(img))[0]:
                        nxt.append((rule.target, img))
            frontier = nxt
        for lab, span in spans.items():
            phi = cert.functionals[lab]
            for row in span.rows:
                assert apply_functional(FLD, phi, row) == 0
