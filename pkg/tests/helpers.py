"""Shared hypothesis strategies and small constructors for the test suite."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from tdoquant.exact import Poly, monomials_up_to
from tdoquant.polydiff import CoeffKind, random_cochain
from tdoquant.weyl import OneForm, WeylOp, parse_one_form

rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, nvars=1, max_deg=3, max_terms=4):
    monos = monomials_up_to(nvars, max_deg)
    terms = draw(st.dictionaries(st.sampled_from(monos), rats, max_size=max_terms))
    return Poly(nvars, terms)


def twist_of(name: str, nvars: int) -> OneForm:
    return OneForm.zero(nvars) if name == "0" else parse_one_form(name, nvars)


@st.composite
def weyl_ops(draw, nvars=1, max_order=2, max_deg=2, twist="0", max_terms=4):
    xs = monomials_up_to(nvars, max_deg)
    ds = monomials_up_to(nvars, max_order)
    keys = st.tuples(st.sampled_from(xs), st.sampled_from(ds))
    terms = draw(st.dictionaries(keys, rats, max_size=max_terms))
    return WeylOp(nvars, terms, twist_of(twist, nvars))


def seeded_cochain(seed: int, nvars: int, coeff: CoeffKind, arity: int, order: int = 2):
    return random_cochain(random.Random(seed), nvars, coeff, arity, order, 2)


seeds = st.integers(min_value=0, max_value=2 ** 32)

O = CoeffKind.O()


def coeff_kinds(nvars: int):
    z = OneForm.zero(nvars)
    nu = parse_one_form("x^2*dy", nvars) if nvars >= 2 else parse_one_form("x^2*dx", nvars)
    return [O, CoeffKind.D(z), CoeffKind.D(nu), CoeffKind.Dop(z), CoeffKind.Dop(nu, outer_op=True)]


def F(x) -> Fraction:
    return Fraction(x)
