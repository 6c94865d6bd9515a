"""Weyl algebra D_n on affine n-space and its twisted variants D_nu.

An operator is stored in left normal form ``sum c_{a,b} x^a N^b`` where
``N_i = d_i + nu_i`` and ``N^b = N_1^{b_1} ... N_n^{b_n}`` in increasing index
order.  Relations: ``[N_i, x_j] = delta_ij`` and
``[N_i, N_j] = d_i nu_j - d_j nu_i``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Mapping

from .exact import (
    ArityError,
    Exps,
    Poly,
    add_exps,
    falling,
    format_monomial,
    format_terms,
    grlex_key,
    leq_exps,
    monomials_up_to,
    multi_binom,
    sub_exps,
    sub_multi_indices,
    var_names,
)
from .parse import derivation_index, parse_expression, variable_index

Key = tuple[Exps, Exps]


class TwistMismatch(ValueError):
    """Operators from differently twisted algebras were combined."""


class NoCanonicalAction(ValueError):
    """A twisted operator was applied to a function."""


@dataclass(frozen=True)
class OneForm:
    """nu = sum_i nu_i dx_i with polynomial components."""

    nvars: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.nvars:
            raise ValueError("one-form needs one component per variable")
        if any(c.nvars != self.nvars for c in self.components):
            raise ArityError("component over the wrong number of variables")

    @classmethod
    def zero(cls, nvars: int) -> OneForm:
        return cls(nvars, tuple(Poly.zero(nvars) for _ in range(nvars)))

    @classmethod
    def exact(cls, g: Poly) -> OneForm:
        """dg."""
        return cls(g.nvars, tuple(g.partial(i) for i in range(1, g.nvars + 1)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: OneForm) -> OneForm:
        if other.nvars != self.nvars:
            raise ArityError("one-forms over different variable counts")
        return OneForm(self.nvars, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> OneForm:
        return OneForm(self.nvars, tuple(-a for a in self.components))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        names = var_names(self.nvars)
        parts = [f"({c})*d{n}" for c, n in zip(self.components, names) if c]
        return " + ".join(parts)


def curvature(nu: OneForm) -> list[list[Poly]]:
    """Antisymmetric matrix (d nu)_{ij} = d_i nu_j - d_j nu_i."""
    n = nu.nvars
    return [[nu.components[j].partial(i + 1) - nu.components[i].partial(j + 1)
             for j in range(n)] for i in range(n)]


def _unit(n: int, i: int) -> Exps:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# twisted products ---------------------------------------------------------

@lru_cache(maxsize=None)
def _curv_terms(nu: OneForm) -> tuple[tuple[tuple[tuple[Exps, Fraction], ...], ...], ...]:
    F = curvature(nu)
    return tuple(tuple(tuple(F[i][j].terms.items()) for j in range(nu.nvars)) for i in range(nu.nvars))


@lru_cache(maxsize=None)
def _nabla_times_word(nu: OneForm, i: int, b: Exps) -> tuple[tuple[Key, Fraction], ...]:
    """Normal form of N_i * N^b (0-based i)."""
    n = nu.nvars
    j = next((j for j in range(i) if b[j]), None)
    if j is None:
        return (((0,) * n, add_exps(b, _unit(n, i))), Fraction(1)),
    rest = sub_exps(b, _unit(n, j))
    # N_i N_j = N_j N_i + F_ij
    inner = dict(_nabla_times_word(nu, i, rest))
    out = _lmul_nabla(nu, j, inner)
    for e, c in _curv_terms(nu)[i][j]:
        _acc(out, (e, rest), c)
    return tuple(out.items())


def _lmul_nabla(nu: OneForm, i: int, terms: Mapping[Key, Fraction]) -> dict[Key, Fraction]:
    """N_i * (sum c x^a N^b) in normal form."""
    out: dict[Key, Fraction] = {}
    for (a, b), c in terms.items():
        if a[i]:
            _acc(out, (sub_exps(a, _unit(nu.nvars, i)), b), c * a[i])
        for (a2, b2), c2 in _nabla_times_word(nu, i, b):
            _acc(out, (add_exps(a, a2), b2), c * c2)
    return out


@lru_cache(maxsize=None)
def _word_times_monomial(nu: OneForm, b: Exps, c: Exps, d: Exps) -> tuple[tuple[Key, Fraction], ...]:
    """Normal form of N^b * x^c N^d."""
    if nu.is_zero():
        out: dict[Key, Fraction] = {}
        for k in sub_multi_indices(b):
            if leq_exps(k, c):
                coeff = multi_binom(b, k) * falling(c, k)
                if coeff:
                    _acc(out, (sub_exps(c, k), add_exps(sub_exps(b, k), d)), Fraction(coeff))
        return tuple(out.items())
    terms: dict[Key, Fraction] = {(c, d): Fraction(1)}
    for i in reversed(range(nu.nvars)):
        for _ in range(b[i]):
            terms = _lmul_nabla(nu, i, terms)
    return tuple(terms.items())


class WeylOp:
    """Element of D_nu in left normal form."""

    __slots__ = ("nvars", "twist", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Key, Fraction] | None = None, twist: OneForm | None = None):
        self.nvars = nvars
        self.twist = twist if twist is not None else OneForm.zero(nvars)
        if self.twist.nvars != nvars:
            raise ArityError("twist over the wrong number of variables")
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}
        for a, b in self.terms:
            if len(a) != nvars or len(b) != nvars:
                raise ValueError(f"bad multi-index pair {(a, b)}")
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, twist: OneForm | None = None) -> WeylOp:
        return cls(nvars, {}, twist)

    @classmethod
    def const(cls, nvars: int, c, twist: OneForm | None = None) -> WeylOp:
        z = (0,) * nvars
        return cls(nvars, {(z, z): Fraction(c)}, twist)

    @classmethod
    def from_poly(cls, p: Poly, twist: OneForm | None = None) -> WeylOp:
        z = (0,) * p.nvars
        return cls(p.nvars, {(a, z): c for a, c in p.terms.items()}, twist)

    @classmethod
    def x(cls, nvars: int, i: int, twist: OneForm | None = None) -> WeylOp:
        return cls.from_poly(Poly.var(nvars, i), twist)

    @classmethod
    def d(cls, nvars: int, i: int, twist: OneForm | None = None) -> WeylOp:
        """The twisted derivation N_i (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"derivation index {i} out of range 1..{nvars}")
        return cls(nvars, {((0,) * nvars, _unit(nvars, i - 1)): Fraction(1)}, twist)

    @classmethod
    def monomial(cls, a: Exps, b: Exps, c=1, twist: OneForm | None = None) -> WeylOp:
        return cls(len(a), {(tuple(a), tuple(b)): Fraction(c)}, twist)

    # protocol ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.nvars, other, self.twist)
        elif isinstance(other, Poly):
            other = WeylOp.from_poly(other, self.twist)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.nvars == other.nvars and self.twist == other.twist and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.twist, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Max |b|; -1 for zero."""
        return max((sum(b) for _, b in self.terms), default=-1)

    def is_function(self) -> bool:
        return all(sum(b) == 0 for _, b in self.terms)

    def as_poly(self) -> Poly:
        if not self.is_function():
            raise ValueError("operator has positive order")
        return Poly(self.nvars, {a: c for (a, _), c in self.terms.items()})

    def bernstein_weights(self) -> set[int]:
        return {sum(a) - sum(b) for a, b in self.terms}

    def bernstein_component(self, w: int) -> WeylOp:
        return WeylOp(self.nvars, {k: c for k, c in self.terms.items() if sum(k[0]) - sum(k[1]) == w}, self.twist)

    def symbol(self, k: int | None = None) -> dict[Key, Fraction]:
        """Terms of order exactly k (default: the order)."""
        k = self.order() if k is None else k
        return {key: c for key, c in self.terms.items() if sum(key[1]) == k}

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        return sorted(self.terms.items(),
                      key=lambda kv: (grlex_key(kv[0][1]), grlex_key(kv[0][0])), reverse=True)

    def _coerce(self, other) -> WeylOp:
        if isinstance(other, WeylOp):
            if other.nvars != self.nvars:
                raise ArityError(f"{self.nvars} vs {other.nvars} variables")
            if other.twist != self.twist:
                raise TwistMismatch("operators from different twisted algebras")
            return other
        if isinstance(other, Poly):
            return WeylOp.from_poly(other, self.twist) if other.nvars == self.nvars else self._coerce_fail(other)
        if isinstance(other, (int, Fraction)):
            return WeylOp.const(self.nvars, other, self.twist)
        return NotImplemented

    def _coerce_fail(self, other):
        raise ArityError(f"{self.nvars} vs {other.nvars} variables")

    def with_terms(self, terms: Mapping[Key, Fraction]) -> WeylOp:
        return WeylOp(self.nvars, terms, self.twist)

    # arithmetic --------------------------------------------------------
    def __add__(self, other) -> WeylOp:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return self.with_terms(out)

    __radd__ = __add__

    def __neg__(self) -> WeylOp:
        return self.with_terms({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> WeylOp:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> WeylOp:
        return (-self) + other

    def scale(self, c) -> WeylOp:
        return self.with_terms({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> WeylOp:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return weyl_mul(self, other)

    def __rmul__(self, other) -> WeylOp:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Poly):
            return weyl_mul(self._coerce(other), self)
        return NotImplemented

    def __pow__(self, k: int) -> WeylOp:
        out = WeylOp.const(self.nvars, 1, self.twist)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"WeylOp({format_op(self)!r})"

    def __str__(self) -> str:
        return format_op(self)


def weyl_mul(a: WeylOp, b: WeylOp) -> WeylOp:
    if a.nvars != b.nvars:
        raise ArityError(f"{a.nvars} vs {b.nvars} variables")
    if a.twist != b.twist:
        raise TwistMismatch("operators from different twisted algebras")
    nu = a.twist
    out: dict[Key, Fraction] = {}
    for (a1, b1), c1 in a.terms.items():
        for (a2, b2), c2 in b.terms.items():
            for (a3, b3), c3 in _word_times_monomial(nu, b1, a2, b2):
                _acc(out, (add_exps(a1, a3), b3), c1 * c2 * c3)
    return a.with_terms(out)


def commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return a * b - b * a


def weyl_apply(op: WeylOp, f: Poly) -> Poly:
    """Action of an untwisted operator on a polynomial."""
    if not op.twist.is_zero():
        raise NoCanonicalAction("twisted operators have no canonical action on functions")
    if op.nvars != f.nvars:
        raise ArityError(f"{op.nvars} vs {f.nvars} variables")
    out: dict[Exps, Fraction] = {}
    for (a, b), c in op.terms.items():
        for e, v in f.terms.items():
            if leq_exps(b, e):
                k = falling(e, b)
                if k:
                    _acc(out, add_exps(a, sub_exps(e, b)), c * v * k)
    return Poly(op.nvars, out)


# normal form conversions -------------------------------------------------

def word(nu: OneForm, b: Exps) -> WeylOp:
    """N^b."""
    n = nu.nvars
    return WeylOp(n, {((0,) * n, tuple(b)): Fraction(1)}, nu)


def from_right_normal(nvars: int, terms: Mapping[Key, Fraction], twist: OneForm | None = None) -> WeylOp:
    """Left normal form of sum c N^b x^a, keys given as (b, a)."""
    nu = twist if twist is not None else OneForm.zero(nvars)
    out: dict[Key, Fraction] = {}
    z = (0,) * nvars
    for (b, a), c in terms.items():
        for k, v in _word_times_monomial(nu, b, a, z):
            _acc(out, k, c * v)
    return WeylOp(nvars, out, nu)


def to_right_normal(op: WeylOp) -> dict[Key, Fraction]:
    """Coefficients c_{b,a} with op = sum c N^b x^a (functions on the right)."""
    rest = dict(op.terms)
    out: dict[Key, Fraction] = {}
    z = (0,) * op.nvars
    while rest:
        top = max(sum(b) for _, b in rest)
        (a, b), c = max(((k, v) for k, v in rest.items() if sum(k[1]) == top),
                        key=lambda kv: (grlex_key(kv[0][1]), grlex_key(kv[0][0])))
        _acc(out, (b, a), c)
        for k, v in _word_times_monomial(op.twist, b, a, z):
            _acc(rest, k, -c * v)
    return out


# Leibniz coproduct ----------------------------------------------------------

def coproduct(t: WeylOp) -> list[tuple[WeylOp, WeylOp]]:
    """Delta(x^a d^b) = sum_{c<=b} binom(b,c) x^a d^c (x) d^{b-c}."""
    if not t.twist.is_zero():
        raise NoCanonicalAction("coproduct is defined on untwisted operators")
    n = t.nvars
    z = (0,) * n
    pairs: dict[tuple[Key, Exps], Fraction] = {}
    for (a, b), c in t.terms.items():
        for k in sub_multi_indices(b):
            _acc(pairs, ((a, k), sub_exps(b, k)), c * multi_binom(b, k))
    out = []
    for (left, right), c in sorted(pairs.items(), key=lambda kv: (grlex_key(kv[0][0][1]), grlex_key(kv[0][1])), reverse=True):
        out.append((WeylOp(n, {left: c}), WeylOp(n, {(z, right): Fraction(1)})))
    return out


# order predicate ------------------------------------------------------------

LinearMap = Callable[[Poly], Poly]


def _as_map(A, nvars: int) -> LinearMap:
    if isinstance(A, WeylOp):
        return lambda f: weyl_apply(A, f)
    if isinstance(A, Mapping):
        table = {k if isinstance(k, tuple) else tuple(k): v for k, v in A.items()}

        def apply(f: Poly) -> Poly:
            out = Poly.zero(nvars)
            for e, c in f.terms.items():
                if e not in table:
                    raise KeyError(f"evaluation table lacks monomial {e}")
                out = out + table[e] * c
            return out
        return apply
    return A


def _iterated_commutator(A: LinearMap, fs: tuple[Poly, ...], g: Poly) -> Poly:
    """A_N(g) for A_k = f_k A_{k-1} - A_{k-1} f_k."""
    if not fs:
        return A(g)
    *head, last = fs
    head = tuple(head)
    return last * _iterated_commutator(A, head, g) - _iterated_commutator(A, head, last * g)


def is_order_at_most(A, N: int, nvars: int, degree_cap: int,
                     random_checks: int = 0, rng: random.Random | None = None) -> bool:
    """Whether every (N+1)-fold commutator with coordinate multiplications vanishes.

    ``A`` is a WeylOp, a callable on Poly, or a table monomial -> image (the
    table must then cover degrees up to ``degree_cap + N + 1``).  With
    ``random_checks`` the commutators are also taken against random
    polynomials of degree <= 3.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    fmap = _as_map(A, nvars)
    coords = [Poly.var(nvars, i) for i in range(1, nvars + 1)]
    tests = [Poly.monomial(e) for e in monomials_up_to(nvars, degree_cap)]
    for fs in itertools.combinations_with_replacement(coords, N + 1):
        for g in tests:
            if _iterated_commutator(fmap, fs, g):
                return False
    if random_checks:
        rng = rng or random.Random(0)
        for _ in range(random_checks):
            fs = tuple(random_poly(rng, nvars, 3) for _ in range(N + 1))
            g = random_poly(rng, nvars, min(degree_cap, 3))
            if _iterated_commutator(fmap, fs, g):
                return False
    return True


# twists -----------------------------------------------------------------

class TorsorIso:
    """Algebra map D_nu -> D_{nu+dg}: fixes functions, N_i -> N_i + d_i g."""

    def __init__(self, nu: OneForm, g: Poly):
        if g.nvars != nu.nvars:
            raise ArityError("g and nu over different variable counts")
        self.source = nu
        self.g = g
        self.target = nu + OneForm.exact(g)
        n = nu.nvars
        self._gens = [WeylOp.d(n, i, self.target) + WeylOp.from_poly(g.partial(i), self.target)
                      for i in range(1, n + 1)]

    def __call__(self, op: WeylOp) -> WeylOp:
        if op.twist != self.source:
            raise TwistMismatch("operator is not in the source algebra")
        n = op.nvars
        out = WeylOp.zero(n, self.target)
        for (a, b), c in op.terms.items():
            t = WeylOp.monomial(a, (0,) * n, c, self.target)
            for i in range(n):
                for _ in range(b[i]):
                    t = t * self._gens[i]
            out = out + t
        return out

    def inverse(self) -> TorsorIso:
        return TorsorIso(self.target, -self.g)


def torsor_iso(nu: OneForm, g: Poly) -> TorsorIso:
    return TorsorIso(nu, g)


# associated graded -----------------------------------------------------------

def gr_dimension_check(twist: OneForm, order_cap: int, degree_cap: int) -> list[tuple[int, int, int]]:
    """Rows (k, dim gr_k in the window, dim of degree-k symbols in the window).

    The measured dimension is the rank of the order-k symbols of all products
    x^a N_{i_1} ... N_{i_k} (every index order), |a| <= degree_cap.
    """
    from .exact import SparseMat, rank

    n = twist.nvars
    rows = []
    coeffs = monomials_up_to(n, degree_cap)
    for k in range(order_cap + 1):
        index: dict[Key, int] = {}
        vectors = []
        for a in coeffs:
            for seq in itertools.product(range(1, n + 1), repeat=k):
                op = WeylOp.monomial(a, (0,) * n, 1, twist)
                for i in seq:
                    op = op * WeylOp.d(n, i, twist)
                vectors.append({index.setdefault(key, len(index)): c for key, c in op.symbol(k).items()
                                if sum(key[0]) <= degree_cap})
        m = SparseMat.from_columns(len(index), vectors)
        expected = len(coeffs) * comb(k + n - 1, n - 1)
        rows.append((k, rank(m), expected))
    return rows


# random elements, text --------------------------------------------------------

def random_poly(rng: random.Random, nvars: int, max_deg: int, max_terms: int = 4,
                coeff_range: int = 3) -> Poly:
    monos = monomials_up_to(nvars, max_deg)
    out = {}
    for _ in range(rng.randint(1, max_terms)):
        out[rng.choice(monos)] = Fraction(rng.randint(-coeff_range, coeff_range))
    return Poly(nvars, out)


def random_op(rng: random.Random, nvars: int, max_order: int, max_deg: int,
              twist: OneForm | None = None, max_terms: int = 4) -> WeylOp:
    xs = monomials_up_to(nvars, max_deg)
    ds = monomials_up_to(nvars, max_order)
    out = {}
    for _ in range(rng.randint(1, max_terms)):
        c = rng.randint(-3, 3)
        out[(rng.choice(xs), rng.choice(ds))] = Fraction(c)
    return WeylOp(nvars, out, twist)


def format_op(op: WeylOp) -> str:
    names = var_names(op.nvars)
    dnames = [f"d{n}" for n in names] if op.nvars <= 3 else [f"d{i}" for i in range(1, op.nvars + 1)]
    items = []
    for (a, b), c in op.sorted_terms():
        mono = "*".join(p for p in (format_monomial(a, names), format_monomial(b, dnames)) if p)
        items.append((mono, c))
    return format_terms(items)


def parse_op(text: str, nvars: int, twist: OneForm | None = None) -> WeylOp:
    nu = twist if twist is not None else OneForm.zero(nvars)

    def atom(name: str) -> WeylOp:
        i = variable_index(name, nvars)
        if i is not None:
            return WeylOp.x(nvars, i, nu)
        i = derivation_index(name, nvars)
        if i is not None:
            return WeylOp.d(nvars, i, nu)
        raise KeyError(name)

    return parse_expression(text, atom, lambda c: WeylOp.const(nvars, c, nu))


def parse_one_form(text: str, nvars: int) -> OneForm:
    """Parse ``sum p_i * dx_i``; each term must end in exactly one differential."""
    op = parse_op(text, nvars)
    comps = [dict() for _ in range(nvars)]
    for (a, b), c in op.terms.items():
        if sum(b) != 1:
            raise ValueError(f"not a one-form: {text!r}")
        comps[b.index(1)][a] = c
    return OneForm(nvars, tuple(Poly(nvars, t) for t in comps))
