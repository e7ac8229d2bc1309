"""Weight and character algebra."""

import itertools

import pytest
from hypothesis import given, strategies as st

from weightcomb import Params, Weight, chi, is_generic, make_weight, s_conj, s_involution
from weightcomb.errors import NonGenericWeight, RangeError


def all_weights(ctx):
    for r in itertools.product(range(ctx.p), repeat=ctx.f):
        for m in range(ctx.det_mod):
            yield make_weight(ctx, r, m)


class TestParams:
    def test_derived_values(self):
        ctx = Params(7, 2)
        assert (ctx.q, ctx.l, ctx.det_mod) == (49, 4, 48)
        assert Params(5, 3).l == 3
        assert Params(5, 4).l == 8

    @pytest.mark.parametrize("p,f", [(4, 2), (3, 2), (2, 2), (9, 2), (7, 1), (7, 0)])
    def test_rejects_bad_context(self, p, f):
        with pytest.raises(RangeError):
            Params(p, f)


class TestChi:
    def test_direct_substitution(self):
        from weightcomb import BChar

        ctx = Params(7, 2)
        assert chi(make_weight(ctx, (2, 3), 0), ctx) == BChar(23, 0)

    def test_zero_tuple_gives_diagonal_pair(self):
        ctx = Params(7, 2)
        for m in (0, 5, 47):
            c = chi(make_weight(ctx, (0, 0), m), ctx)
            assert (c.u, c.v) == (m, m)

    def test_full_tuple_wraps_to_zero(self):
        # r = (p-1, ..., p-1) has r-value q-1 = 0 mod q-1, so its character
        # collides with the trivial tuple's: expected non-injectivity
        # outside generic weights.
        ctx = Params(5, 2)
        c = chi(make_weight(ctx, (4, 4), 0), ctx)
        assert (c.u, c.v) == (0, 0)
        assert c == chi(make_weight(ctx, (0, 0), 0), ctx)

    def test_injective_on_generic_weights(self):
        for p in (5, 7):
            ctx = Params(p, 2)
            seen = {}
            for w in all_weights(ctx):
                if not is_generic(w, ctx):
                    continue
                c = chi(w, ctx)
                assert c not in seen, (w, seen[c])
                assert c != s_conj(c)
                seen[c] = w


class TestSConj:
    def test_swap(self):
        from weightcomb import BChar

        assert s_conj(BChar(23, 0)) == BChar(0, 23)
        assert s_conj(BChar(5, 5)) == BChar(5, 5)

    @given(st.integers(0, 47), st.integers(0, 47))
    def test_involution(self, u, v):
        from weightcomb import BChar

        c = BChar(u, v)
        assert s_conj(s_conj(c)) == c


class TestGenericity:
    def test_examples(self):
        ctx = Params(7, 2)
        assert is_generic(make_weight(ctx, (2, 3), 5), ctx)
        assert not is_generic(make_weight(ctx, (0, 0), 5), ctx)
        assert is_generic(make_weight(ctx, (6, 0), 0), ctx)
        assert not is_generic(make_weight(ctx, (6, 6), 3), ctx)


class TestSInvolution:
    def test_spec_points(self):
        ctx = Params(7, 2)
        assert s_involution(make_weight(ctx, (2, 3), 0), ctx) == Weight((4, 3), 23)
        ctx5 = Params(5, 2)
        assert s_involution(make_weight(ctx5, (1, 1), 0), ctx5) == Weight((3, 3), 6)

    def test_rejects_non_generic(self):
        ctx = Params(5, 2)
        with pytest.raises(NonGenericWeight):
            s_involution(make_weight(ctx, (0, 0), 3), ctx)

    def test_involution_and_chi_compatibility(self):
        # s_involution realizes s-conjugation on characters, and is an
        # involution, exhaustively for p in {5, 7}, f = 2.
        for p in (5, 7):
            ctx = Params(p, 2)
            for w in all_weights(ctx):
                if not is_generic(w, ctx):
                    continue
                ws = s_involution(w, ctx)
                assert chi(ws, ctx) == s_conj(chi(w, ctx))
                assert s_involution(ws, ctx) == w


class TestSerialization:
    def test_weight_round_trip(self):
        w = Weight((2, 3), 17)
        assert Weight.from_json(w.to_json()) == w
        assert w.to_json() == {"r": [2, 3], "m": 17}

    def test_bchar_round_trip(self):
        from weightcomb import BChar

        c = BChar(23, 0)
        assert BChar.from_json(c.to_json()) == c
        assert c.to_json() == {"u": 23, "v": 0}

    def test_make_weight_validates(self):
        ctx = Params(5, 2)
        with pytest.raises(RangeError):
            make_weight(ctx, (5, 0), 0)
        with pytest.raises(RangeError):
            make_weight(ctx, (1, 1, 1), 0)
        assert make_weight(ctx, (1, 1), 25).m == 1
