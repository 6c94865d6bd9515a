import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import O, seeds, twist_of, weyl_ops
from tdoquant.bar import BarChain, BarSetup, TruncationOverflow, bar_d, bar_mul
from tdoquant.exact import Poly, monomials_up_to
from tdoquant.polydiff import CoeffKind
from tdoquant.quantize import (
    DiffOD,
    absorption_residue,
    augmentation,
    chi,
    d_D,
    diff_complex_cohomology,
    diffod_mul,
    main_theorem_verify,
    phi,
    psi,
    psi_of,
    weyl_window_basis,
)
from tdoquant.weyl import OneForm, WeylOp, parse_op, random_op
from tdoquant.window import TruncationWindow


def op(text, n=1, nu=None):
    return parse_op(text, n, nu)


def pairs(*items, n=1):
    return DiffOD.from_pairs(n, [(op(a, n), op(b, n)) for a, b in items])


FREE = BarSetup(1, None, True, True, 4, normalized=True)


class TestDD:
    def test_function(self):
        assert d_D(op("x^2 + 3")).is_zero()

    def test_derivative(self):
        assert d_D(op("dx")) == pairs(("dx", "1"))

    def test_second_order(self):
        assert d_D(op("dx^2")) == pairs(("dx^2", "1"), ("dx", "2*dx"))

    @given(weyl_ops(2, twist="x^2*dy"))
    def test_is_the_commutator(self, p):
        """g -> p g - g p, evaluated on monomials."""
        dp = d_D(p)
        for e in monomials_up_to(2, 3):
            g = WeylOp.from_poly(Poly.monomial(e), p.twist)
            assert dp.eval(Poly.monomial(e)) == p * g - g * p


class TestPhi:
    def test_function(self):
        assert phi(op("x^2")) == pairs(("1", "x^2"))

    def test_derivative(self):
        assert phi(op("dx")) == pairs(("dx", "1"), ("1", "dx"))

    def test_second_order(self):
        want = pairs(("dx^2", "1"), ("dx", "2*dx"), ("1", "dx^2"))
        assert phi(op("dx^2")) == want == phi(op("dx")) * phi(op("dx"))

    def test_mixed_product(self):
        got = pairs(("1", "x")) * (pairs(("dx", "1"), ("1", "dx")))
        assert got == pairs(("dx", "x"), ("1", "x*dx")) == phi(op("x*dx")) == phi(op("x")) * phi(op("dx"))

    def test_unit(self):
        a = pairs(("dx^2", "x"), ("1", "dx"))
        assert pairs(("1", "1")) * a == a

    def test_text(self):
        assert str(phi(op("dx"))) == "dx ⊗ 1 + 1 ⊗ dx"

    @given(st.sampled_from(["0", "x^2*dy", "x*y*dx + y^2*dy"]), st.data())
    def test_multiplicative(self, nu, data):
        p = data.draw(weyl_ops(2, 3, 2, twist=nu))
        q = data.draw(weyl_ops(2, 3, 2, twist=nu))
        assert phi(p * q) == phi(p) * phi(q)

    @given(weyl_ops(2, twist="x*dy"))
    def test_cochain_round_trip(self, p):
        x = phi(p)
        assert DiffOD.from_cochain(x.to_cochain()) == x


class TestPsi:
    def test_unit(self):
        one = WeylOp.const(1, 1)
        assert psi(one, one, FREE).terms == {((0, (), ((0,), (0,))), (), (0, (), ((0,), (0,)))): 1}

    def test_product(self):
        one, d = WeylOp.const(1, 1), op("dx")
        assert bar_mul(psi(d, one, FREE), psi(one, d, FREE)) == psi(d, d, FREE)

    @given(weyl_ops(1), weyl_ops(1))
    def test_degree_zero(self, n, m):
        w = psi(n, m, FREE)
        assert w.degrees() <= {0}


class TestChi:
    def test_function_is_cycle(self):
        assert bar_d(chi(op("x^3 + 1"), FREE)).is_zero()

    def test_derivative(self):
        c = chi(op("dx"), FREE)
        assert bar_d(c).is_zero()
        naive, cancel = absorption_residue(op("dx"), FREE)
        assert not naive.is_zero() and len(naive.terms) == 2
        assert (naive + cancel).is_zero()

    def test_second_order(self):
        assert bar_d(chi(op("dx^2"), FREE)).is_zero()

    def test_needs_length(self):
        with pytest.raises(TruncationOverflow):
            chi(op("dx^3"), BarSetup(1, None, True, True, 2))

    @given(st.sampled_from(["0", "x^2*dy"]), st.data())
    def test_cycle(self, nu, data):
        p = data.draw(weyl_ops(2, 2, 2, twist=nu, max_terms=3))
        s = BarSetup(2, p.twist, True, True, 2, normalized=True)
        c = chi(p, s)
        assert bar_d(c).is_zero()
        assert augmentation(c) == phi(p)

    @given(weyl_ops(1, 2), weyl_ops(1, 2))
    def test_multiplicative_after_augmentation(self, p, q):
        assert augmentation(chi(p * q, FREE)) == augmentation(chi(p, FREE)) * augmentation(chi(q, FREE))


class TestCohomologyWindows:
    @pytest.mark.parametrize("n,w,h0", [(1, 2, 1), (2, 1, 2), (1, -1, 0), (1, 0, 1)])
    def test_h0_counts_monomials(self, n, w, h0):
        W = TruncationWindow(nvars=n, order_cap=3, arity_cap=3, bernstein_weight=w)
        tab = diff_complex_cohomology(CoeffKind.D(OneForm.zero(n)), W)
        assert tab.dims[w][0] == h0 and tab.stable[w][0]
        assert tab.dims[w][1] == 0 and tab.stable[w][1]
        assert tab.ok()

    def test_opposite_coefficients(self):
        W = TruncationWindow(nvars=1, order_cap=3, arity_cap=3, bernstein_weight=1)
        assert diff_complex_cohomology(CoeffKind.Dop(OneForm.zero(1), outer_op=True), W).ok()

    def test_function_coefficients_see_vector_fields(self):
        """With O in place of D the first cohomology is the vector fields x^(w+1) d."""
        W = TruncationWindow(nvars=1, order_cap=3, arity_cap=3, bernstein_weight=1)
        tab = diff_complex_cohomology(O, W)
        assert tab.dims[1][1] == 1 and not tab.ok()

    def test_weyl_window(self):
        assert weyl_window_basis(1, 1, 0) == [((0,), (0,)), ((1,), (1,))]
        assert len(weyl_window_basis(2, 1, 0)) == 5


class TestMainTheorem:
    def test_acceptance_window(self):
        W = TruncationWindow(nvars=1, order_cap=1, arity_cap=2, bernstein_weight=0, bar_length_cap=2)
        rep = main_theorem_verify(W)
        assert rep.passed, rep.failures()
        assert rep.dims[0] == 2 == rep.weyl_count
        assert rep.basis_sizes == {-1: 4, 0: 10, 1: 4}

    def test_twists_agree(self):
        W = TruncationWindow(nvars=2, order_cap=1, arity_cap=2, bernstein_weight=0, bar_length_cap=2)
        a = main_theorem_verify(W, None, n_random=10, n_pairs=5)
        b = main_theorem_verify(W, twist_of("x^2*dy", 2), n_random=10, n_pairs=5)
        assert a.passed and b.passed
        assert a.dims == b.dims and a.basis_sizes == b.basis_sizes

    def test_weight_one(self):
        W = TruncationWindow(nvars=1, order_cap=1, arity_cap=2, bernstein_weight=1, bar_length_cap=3)
        rep = main_theorem_verify(W, n_random=10, n_pairs=5)
        assert rep.passed and rep.dims[0] == 2

    def test_short_length_is_provisional(self):
        W = TruncationWindow(nvars=1, order_cap=2, arity_cap=2, bernstein_weight=1, bar_length_cap=3)
        rep = main_theorem_verify(W, n_random=5, n_pairs=3)
        assert not all(rep.stable.values())
        assert rep.passed
        assert any(c.provisional for c in rep.checks)

    def test_short_length_cap_is_inconclusive_not_failed(self):
        short = TruncationWindow(nvars=1, order_cap=2, arity_cap=2, degree_cap=3, bernstein_weight=0,
                                 bar_length_cap=2)
        rep = main_theorem_verify(short)
        assert not rep.stable[0]
        assert rep.passed
        assert {c.name for c in rep.checks if c.provisional} >= {"H0-equals-weyl-window", "H-nonzero-degrees-vanish"}

    def test_longer_length_cap_settles_h0(self):
        W = TruncationWindow(nvars=1, order_cap=2, arity_cap=2, degree_cap=3, bernstein_weight=0, bar_length_cap=4)
        rep = main_theorem_verify(W)
        assert rep.passed and not any(c.provisional for c in rep.checks)
        assert rep.dims[0] == rep.weyl_count == 3
