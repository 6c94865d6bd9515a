import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import polys, twist_of, weyl_ops
from tdoquant.exact import Poly
from tdoquant.parse import parse_poly
from tdoquant.weyl import (
    OneForm,
    TwistMismatch,
    WeylOp,
    coproduct,
    curvature,
    format_op,
    gr_dimension_check,
    is_order_at_most,
    parse_one_form,
    parse_op,
    torsor_iso,
    weyl_apply,
)


def op(text, n=1, twist=None):
    return parse_op(text, n, twist)


class TestProducts:
    def test_defining_relation(self):
        assert op("dx") * op("x") == op("x*dx + 1")

    def test_normal_already(self):
        assert op("x") * op("dx") == op("x*dx")

    def test_second_order(self):
        assert op("dx^2") * op("x^2") == op("x^2*dx^2 + 4*x*dx + 2")

    def test_second_order_against_action(self):
        lhs = op("dx^2") * op("x^2")
        for k in range(7):
            g = Poly.monomial((k,))
            assert weyl_apply(lhs, g) == weyl_apply(op("dx^2"), weyl_apply(op("x^2"), g))

    def test_curved_commutator(self):
        nu = parse_one_form("x^2*dy", 2)
        d1, d2 = WeylOp.d(2, 1, nu), WeylOp.d(2, 2, nu)
        assert d1 * d2 - d2 * d1 == WeylOp.from_poly(parse_poly("2*x", 2), nu)

    def test_twist_mismatch(self):
        nu = parse_one_form("x*dy", 2)
        with pytest.raises(TwistMismatch):
            WeylOp.d(2, 1) * WeylOp.d(2, 1, nu)


class TestAction:
    def test_derivative(self):
        assert weyl_apply(op("dx"), parse_poly("x^3", 1)) == parse_poly("3*x^2", 1)

    @pytest.mark.parametrize("k", range(6))
    def test_euler(self, k):
        assert weyl_apply(op("x*dx"), Poly.monomial((k,))) == Poly.monomial((k,), k)

    def test_sum(self):
        assert weyl_apply(op("dx^2 + x"), parse_poly("x^2", 1)) == parse_poly("2 + x^3", 1)


@given(weyl_ops(2), weyl_ops(2), weyl_ops(2))
def test_associative_untwisted(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(weyl_ops(2, twist="x^2*dy"), weyl_ops(2, twist="x^2*dy"), weyl_ops(2, twist="x^2*dy"))
def test_associative_twisted(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(weyl_ops(2), weyl_ops(2), polys(2, 3))
def test_action_is_a_module(a, b, g):
    assert weyl_apply(a * b, g) == weyl_apply(a, weyl_apply(b, g))


@given(weyl_ops(2, twist="x*dy"))
def test_format_parse_round_trip(a):
    assert parse_op(format_op(a), 2, a.twist) == a


class TestOrder:
    def test_function(self):
        assert is_order_at_most(op("x^2 + 1"), 0, 1, 5)

    def test_derivative(self):
        assert not is_order_at_most(op("dx"), 0, 1, 5)
        assert is_order_at_most(op("dx"), 1, 1, 5)

    def test_x_d2(self):
        A = op("x*dx^2")
        assert not is_order_at_most(A, 1, 1, 6)
        assert is_order_at_most(A, 2, 1, 6)

    def test_black_box_callable(self):
        assert is_order_at_most(lambda g: g.partial(1).partial(1), 2, 1, 6, random_checks=5)
        assert not is_order_at_most(lambda g: g.partial(1).partial(1), 1, 1, 6)


class TestCoproduct:
    def pairs(self, t):
        return sorted((format_op(a), format_op(b)) for a, b in coproduct(t))

    def test_derivative(self):
        assert self.pairs(op("dx")) == sorted([("dx", "1"), ("1", "dx")])

    def test_function(self):
        assert self.pairs(op("x^2")) == [("x^2", "1")]

    def test_second_order(self):
        got = {(format_op(a), format_op(b)): a for a, b in coproduct(op("dx^2"))}
        assert set(got) == {("dx^2", "1"), ("2*dx", "dx"), ("1", "dx^2")}

    @pytest.mark.parametrize("i,j", [(i, j) for i in range(5) for j in range(5)])
    def test_second_order_on_pairs(self, i, j):
        f, g = Poly.monomial((i,)), Poly.monomial((j,))
        total = sum((weyl_apply(a, f) * weyl_apply(b, g) for a, b in coproduct(op("dx^2"))), Poly.zero(1))
        assert total == weyl_apply(op("dx^2"), f * g)


class TestCurvature:
    def test_zero(self):
        assert all(c.is_zero() for row in curvature(OneForm.zero(2)) for c in row)

    def test_x_dy(self):
        F = curvature(parse_one_form("x*dy", 2))
        assert F[0][1] == Poly.const(2, 1) and F[1][0] == Poly.const(2, -1)

    def test_exact_is_flat(self):
        F = curvature(OneForm.exact(parse_poly("x^2*y", 2)))
        assert all(c.is_zero() for row in F for c in row)


class TestTorsor:
    def test_zero_g_is_identity(self):
        T = torsor_iso(OneForm.zero(1), Poly.zero(1))
        a = op("x^2*dx^3 + dx")
        assert T(a) == a

    def test_shift(self):
        g = parse_poly("x^2", 1)
        T = torsor_iso(OneForm.zero(1), g)
        tgt = OneForm.exact(g)
        assert T(op("dx")) == WeylOp.d(1, 1, tgt) + WeylOp.from_poly(parse_poly("2*x", 1), tgt)
        assert T(op("dx") * op("x")) == T(op("dx")) * T(op("x"))

    @given(polys(2, 2), weyl_ops(2, twist="x*dy"), weyl_ops(2, twist="x*dy"))
    def test_multiplicative_and_invertible(self, g, a, b):
        T = torsor_iso(a.twist, g)
        assert T(a * b) == T(a) * T(b)
        assert T.inverse()(T(a)) == a

    @given(polys(2, 3))
    def test_curvature_preserved(self, g):
        nu = parse_one_form("x*y*dy", 2)
        assert curvature(nu) == curvature(torsor_iso(nu, g).target)


class TestAssociatedGraded:
    def test_one_variable(self):
        rows = gr_dimension_check(OneForm.zero(1), 1, 2)
        assert rows == [(0, 3, 3), (1, 3, 3)]

    def test_two_variables_order_two(self):
        rows = gr_dimension_check(twist_of("x^2*dy", 2), 2, 0)
        assert rows[2] == (2, 3, 3)

    @pytest.mark.parametrize("nu", ["0", "x*dy", "x^2*dy + y*dx"])
    def test_symmetric_for_every_twist(self, nu):
        assert all(r == e for _, r, e in gr_dimension_check(twist_of(nu, 2), 2, 2))
