import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import O, seeds
from tdoquant.exact import Poly
from tdoquant.polydiff import CoeffKind, PolyDiffTensor, basis_keys, brace, concat, hochschild_d, random_cochain
from tdoquant.weyl import OneForm, parse_one_form, parse_op
from tdoquant.bar import (
    BarChain,
    BarSetup,
    TruncationOverflow,
    bar_d,
    bar_mul,
    gv_mul,
    keys_of,
    two_sided_build,
    window_words,
    word,
    word_degree,
)
from tdoquant.window import TruncationWindow

ONE = Poly.const(1, 1)
X = Poly.var(1, 1)
DX = PolyDiffTensor.pure(O, [(1,)], ONE)          # g -> g'
MX = PolyDiffTensor.pure(O, [(0,)], X)            # g -> x g
PLAIN = BarSetup(1, left=False, right=False, length_cap=4, normalized=False)


def rand_word(rng, s, max_len, n=1):
    def key(ck):
        return next(iter(keys_of(random_cochain(rng, n, ck, rng.randint(0, 2), 2, 2, 1))))
    letters = tuple(key(O) for _ in range(rng.randint(0, max_len)))
    return BarChain(s, {(key(s.n_kind) if s.left else None, letters, key(s.m_kind) if s.right else None):
                        rng.choice([-2, -1, 1, 3])})


class TestDifferential:
    def test_length_zero_is_internal(self):
        s = BarSetup(1, length_cap=2, normalized=False)
        n = PolyDiffTensor.pure(s.n_kind, [(0,)], parse_op("x", 1))
        m = PolyDiffTensor.pure(s.m_kind, [], parse_op("dx", 1))
        d = bar_d(word(s, n, [], m))
        assert all(not letters for (_, letters, _) in d.terms)
        assert d == word(s, hochschild_d(n), [], m) + word(s, n, [], hochschild_d(m)) * (-1) ** 1

    def test_single_letter_is_internal(self):
        assert bar_d(word(PLAIN, letters=[MX])) in (word(PLAIN, letters=[hochschild_d(MX)]),
                                                    word(PLAIN, letters=[hochschild_d(MX)]) * -1)
        assert bar_d(word(PLAIN, letters=[DX])).is_zero()

    def test_absorptions_opposite_signs(self):
        s = BarSetup(1, length_cap=2, normalized=False)
        n = PolyDiffTensor.pure(s.n_kind, [], parse_op("dx", 1))
        m = PolyDiffTensor.pure(s.m_kind, [], parse_op("x", 1))
        d0 = bar_d(word(s, n, [DX], m)).length_part(0)
        left = word(s, concat(n, DX), [], m)
        right = word(s, n, [], concat(DX, m))
        assert d0 in (left - right, right - left)

    @given(seeds, st.sampled_from([(False, False), (True, False), (False, True), (True, True)]))
    def test_squares_to_zero(self, seed, ends):
        rng = random.Random(seed)
        s = BarSetup(1, OneForm.zero(1), *ends, length_cap=3, normalized=False)
        w = rand_word(rng, s, 3)
        assert bar_d(bar_d(w)).is_zero()

    @given(seeds)
    def test_squares_to_zero_twisted(self, seed):
        rng = random.Random(seed)
        s = BarSetup(2, parse_one_form("x^2*dy", 2), True, True, length_cap=2, normalized=False)
        assert bar_d(bar_d(rand_word(rng, s, 2, n=2))).is_zero()

    @given(seeds)
    def test_preserves_degree_plus_one(self, seed):
        rng = random.Random(seed)
        s = BarSetup(1, None, True, True, length_cap=3, normalized=False)
        w = rand_word(rng, s, 3)
        (deg,) = w.degrees()
        assert bar_d(w).degrees() <= {deg + 1}


class TestProduct:
    def test_unit(self):
        e = BarChain(PLAIN, {(None, (), None): 1})
        w = word(PLAIN, letters=[DX, MX])
        assert gv_mul(e, w) == w == gv_mul(w, e)

    def test_two_letters(self):
        a, b = word(PLAIN, letters=[DX]), word(PLAIN, letters=[MX])
        got = gv_mul(a, b)
        want = word(PLAIN, letters=[DX, MX]) + word(PLAIN, letters=[MX, DX]) - word(PLAIN, letters=[brace(DX, [MX])])
        assert got == want

    def test_letters_associative(self):
        s = BarSetup(1, left=False, right=False, length_cap=3, normalized=False)
        rng = random.Random(5)
        for _ in range(10):
            u, v, w = (BarChain(s, {(None, (next(iter(keys_of(random_cochain(rng, 1, O, rng.randint(0, 2), 2, 2, 1)))),), None): 1})
                       for _ in range(3))
            assert gv_mul(gv_mul(u, v), w) == gv_mul(u, gv_mul(v, w))

    def test_overflow(self):
        s = BarSetup(1, left=False, right=False, length_cap=1, normalized=False)
        a = word(s, letters=[DX])
        with pytest.raises(TruncationOverflow):
            gv_mul(a, a)

    def test_two_sided_needs_empty_words(self):
        s = BarSetup(1, length_cap=2, normalized=False)
        n = PolyDiffTensor.pure(s.n_kind, [], parse_op("dx", 1))
        m = PolyDiffTensor.pure(s.m_kind, [], parse_op("x", 1))
        with pytest.raises(ValueError):
            bar_mul(word(s, n, [DX], m), word(s, n, [], m))

    @given(seeds, st.sampled_from([(False, False), (True, False), (False, True), (True, True)]))
    def test_leibniz_and_associativity(self, seed, ends):
        rng = random.Random(seed)
        s = BarSetup(1, None, *ends, length_cap=6, normalized=False)
        short = 0 if all(ends) else 2
        u, v, w = (rand_word(rng, s, short) for _ in range(3))
        (deg,) = u.degrees()
        t = bar_mul(u, bar_d(v))
        assert bar_d(bar_mul(u, v)) == bar_mul(bar_d(u), v) + (t if deg % 2 == 0 else -t)
        assert bar_mul(bar_mul(u, v), w) == bar_mul(u, bar_mul(v, w))

    @given(seeds)
    def test_coalgebra_morphism(self, seed):
        """Deconcatenation is multiplicative for the Koszul-signed tensor product."""
        rng = random.Random(seed)
        s = BarSetup(1, left=False, right=False, length_cap=6, normalized=False)

        def delta(ch):
            out = {}
            for (_, ws, _), c in ch.terms.items():
                for k in range(len(ws) + 1):
                    out[(ws[:k], ws[k:])] = out.get((ws[:k], ws[k:]), 0) + c
            return {k: v for k, v in out.items() if v}

        def sdeg(ws):
            return sum(a[0] - 1 for a in ws)

        def one(ws):
            return BarChain(s, {(None, ws, None): 1})

        def mul2(A, B):
            out = {}
            for (u1, u2), c in A.items():
                for (v1, v2), d in B.items():
                    sign = -1 if (sdeg(u2) * sdeg(v1)) % 2 else 1
                    for (_, x, _), e in gv_mul(one(u1), one(v1)).terms.items():
                        for (_, y, _), f in gv_mul(one(u2), one(v2)).terms.items():
                            out[(x, y)] = out.get((x, y), 0) + sign * c * d * e * f
            return {k: v for k, v in out.items() if v}

        u, v = rand_word(rng, s, 2), rand_word(rng, s, 2)
        assert delta(gv_mul(u, v)) == mul2(delta(u), delta(v))


class TestWindow:
    W = TruncationWindow(nvars=1, order_cap=1, arity_cap=2, bernstein_weight=0, bar_length_cap=2)

    def test_degree_zero_contains_length_zero_words(self):
        s, C = two_sided_build(self.W)
        zero = [w for w in C.basis[0] if not w[1]]
        assert zero and all(w[0][0] == 0 and w[2][0] == 0 for w in zero)

    def test_d_squared(self):
        for twist in (None, parse_one_form("x^2*dy", 2)):
            w = self.W if twist is None else TruncationWindow(2, 1, 2, 3, 0, 2)
            _, C = two_sided_build(w, twist)
            assert C.d_squared_zero()

    def test_enumeration_matches_brute_force(self):
        """Independent count: all triples/quadruples of normalized keys filtered by the caps."""
        s, C = two_sided_build(self.W)
        comp = {}
        for name, ck in (("n", s.n_kind), ("a", O), ("m", s.m_kind)):
            comp[name] = [((ar,) + k, k) for ar in range(3) for w in range(-1, 2)
                          for k in [(sl, p) for sl, p in basis_keys(ck, 1, ar, w, 1)]
                          if all(any(b) for b in k[0])]
        comp["a"] = [x for x in comp["a"] if x[0][0] != 0 or x[0][2] != (0,)]

        def order(key, ck):
            _, slots, p = key
            return sum(sum(b) for b in slots) + (sum(p[1]) if ck != O else 0)

        def weight(key, ck):
            _, slots, p = key
            pw = sum(p[0]) - sum(p[1]) if ck != O else sum(p)
            return pw - sum(sum(b) for b in slots)

        counts = {}
        for r in range(3):
            for n, *letters, m in itertools.product(comp["n"], *[comp["a"]] * r, comp["m"]):
                keys = [(n[0], s.n_kind)] + [(a[0], O) for a in letters] + [(m[0], s.m_kind)]
                if sum(order(k, ck) for k, ck in keys) <= 1 and sum(weight(k, ck) for k, ck in keys) == 0:
                    wk = (n[0], tuple(a[0] for a in letters), m[0])
                    counts[word_degree(wk)] = counts.get(word_degree(wk), 0) + 1
        assert counts == {k: C.dim(k) for k in C.basis}
        assert counts == {-1: 4, 0: 10, 1: 4}

    def test_needs_weight(self):
        with pytest.raises(ValueError):
            window_words(BarSetup(1), TruncationWindow(nvars=1))
