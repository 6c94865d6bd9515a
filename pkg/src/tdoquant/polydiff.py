"""Polydifferential Hochschild cochains Diff(O^k, P) on affine space.

A cochain of arity k is stored in tensor normal form

    sum  c * d^{b_1} (x) ... (x) d^{b_k} (x) p

meaning ``(f_1, ..., f_k) -> d^{b_1}f_1 * ... * d^{b_k}f_k * p`` with the
product taken in P.  Slots are pure derivative monomials; every polynomial
coefficient is absorbed into ``p`` by output multiplication, which is what
makes the representation unique (``x d (x) 1 == d (x) x``).

P is one of O (functions), D_nu, or D_nu^op.  Elements of P are handled as
dicts ``key -> Fraction`` (key ``a`` for O, ``(a, b)`` for D and D^op); an
element of D^op is stored as the underlying element of D.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .exact import (
    ArityError,
    Exps,
    Poly,
    add_exps,
    format_monomial,
    grlex_key,
    leq_exps,
    monomials_up_to,
    multi_binom,
    sub_exps,
    sub_multi_indices,
    var_names,
)
from .weyl import OneForm, WeylOp, _word_times_monomial, format_op, parse_op, weyl_apply

Slots = tuple[Exps, ...]


class CoefficientMismatch(ValueError):
    """Cochains with incompatible coefficient bimodules were combined."""


@dataclass(frozen=True)
class CoeffKind:
    """Coefficient bimodule: ``O``, ``D`` (D_nu) or ``Dop`` (D_nu^op).

    ``outer_op`` marks Diff(O^., D^op)^op, whose cup product is reversed.
    """

    kind: str
    twist: OneForm | None = None
    outer_op: bool = False

    def __post_init__(self):
        if self.kind not in ("O", "D", "Dop"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.outer_op and self.kind != "Dop":
            raise ValueError("outer_op is only used with D^op coefficients")
        if self.kind == "O" and self.twist is not None:
            raise ValueError("functions carry no twist")

    @classmethod
    def O(cls) -> CoeffKind:
        return cls("O")

    @classmethod
    def D(cls, twist: OneForm) -> CoeffKind:
        return cls("D", twist)

    @classmethod
    def Dop(cls, twist: OneForm, outer_op: bool = False) -> CoeffKind:
        return cls("Dop", twist, outer_op)

    @property
    def is_operator(self) -> bool:
        return self.kind != "O"

    def tag(self) -> str:
        if self.kind == "O":
            return "@O"
        t = f"@{self.kind}({self.twist})"
        return t + "^op" if self.outer_op else t


# operations on coefficient elements ------------------------------------------

def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _zero(n: int) -> Exps:
    return (0,) * n


def p_embed(ck: CoeffKind, f: Exps):
    """Key of the function monomial x^f inside P."""
    return f if ck.kind == "O" else (f, _zero(len(f)))


@lru_cache(maxsize=None)
def _op_times_fn(nu: OneForm, a: Exps, b: Exps, f: Exps) -> tuple:
    """x^a N^b x^f in left normal form."""
    return tuple(((add_exps(a, a2), b2), c) for (a2, b2), c in _word_times_monomial(nu, b, f, _zero(len(f))))


def p_lmul_fn(ck: CoeffKind, f: Exps, key) -> dict:
    """x^f acting on the left of ``key`` in P."""
    if ck.kind == "O":
        return {add_exps(f, key): Fraction(1)}
    a, b = key
    if ck.kind == "D":
        return {(add_exps(f, a), b): Fraction(1)}
    return dict(_op_times_fn(ck.twist, a, b, f))


def p_lmul_poly(ck: CoeffKind, g: Poly, p: Mapping) -> dict:
    out: dict = {}
    for f, c in g.terms.items():
        for key, v in p.items():
            for k2, w in p_lmul_fn(ck, f, key).items():
                _acc(out, k2, c * v * w)
    return out


@lru_cache(maxsize=None)
def _right_expand(ck: CoeffKind, key) -> tuple:
    """Terms (c, coef, key') with key *_P g = sum coef * d^c(g) *_P key'."""
    if ck.kind == "O":
        return ((_zero(len(key)), Fraction(1), key),)
    a, b = key
    out = []
    for c in sub_multi_indices(b):
        coef = multi_binom(b, c)
        if ck.kind == "Dop" and sum(c) % 2:
            coef = -coef
        out.append((c, Fraction(coef), (a, sub_exps(b, c))))
    return tuple(out)


def p_to_element(ck: CoeffKind, nvars: int, p: Mapping):
    if ck.kind == "O":
        return Poly(nvars, p)
    return WeylOp(nvars, p, ck.twist)


def p_from_element(ck: CoeffKind, x) -> dict:
    if ck.kind == "O":
        if isinstance(x, WeylOp):
            x = x.as_poly()
        return dict(x.terms)
    if isinstance(x, Poly):
        x = WeylOp.from_poly(x, ck.twist)
    if x.twist != ck.twist:
        raise CoefficientMismatch("coefficient element has the wrong twist")
    return dict(x.terms)


def p_mul(ck: CoeffKind, nvars: int, p: Mapping, q: Mapping) -> dict:
    """Product in P (for D^op: q * p computed in D)."""
    if ck.kind == "O":
        return dict((Poly(nvars, p) * Poly(nvars, q)).terms)
    P, Q = WeylOp(nvars, p, ck.twist), WeylOp(nvars, q, ck.twist)
    return dict((P * Q if ck.kind == "D" else Q * P).terms)


def p_weight(ck: CoeffKind, key) -> int:
    return sum(key) if ck.kind == "O" else sum(key[0]) - sum(key[1])


def p_order(ck: CoeffKind, key) -> int:
    return 0 if ck.kind == "O" else sum(key[1])


def fn_times_element(ck: CoeffKind, g: Poly, value):
    """g *_P value, for the evaluation oracle."""
    if ck.kind == "O":
        return g * value
    G = WeylOp.from_poly(g, ck.twist)
    return G * value if ck.kind == "D" else value * G


def element_times_fn(ck: CoeffKind, value, g: Poly):
    """value *_P g, for the evaluation oracle."""
    if ck.kind == "O":
        return value * g
    G = WeylOp.from_poly(g, ck.twist)
    return value * G if ck.kind == "D" else G * value


# cochains ----------------------------------------------------------------------

class PolyDiffTensor:
    """Element of Diff(O^arity, P) in tensor normal form."""

    __slots__ = ("nvars", "arity", "coeff", "terms", "_hash")

    def __init__(self, nvars: int, arity: int, coeff: CoeffKind, terms: Mapping | None = None):
        self.nvars = nvars
        self.arity = arity
        self.coeff = coeff
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}
        for slots, _ in self.terms:
            if len(slots) != arity:
                raise ArityError(f"term with {len(slots)} slots in an arity-{arity} cochain")
        self._hash = None

    @classmethod
    def zero(cls, nvars: int, arity: int, coeff: CoeffKind) -> PolyDiffTensor:
        return cls(nvars, arity, coeff)

    @classmethod
    def constant(cls, coeff: CoeffKind, p) -> PolyDiffTensor:
        """Arity-0 cochain with value p."""
        return cls(p.nvars, 0, coeff, {((), k): c for k, c in p_from_element(coeff, p).items()})

    @classmethod
    def pure(cls, coeff: CoeffKind, slots: Sequence[Exps], p, c=1) -> PolyDiffTensor:
        """d^{b_1} (x) ... (x) d^{b_k} (x) p."""
        slots = tuple(tuple(b) for b in slots)
        pe = p_from_element(coeff, p)
        return cls(p.nvars, len(slots), coeff, {(slots, k): v * c for k, v in pe.items()})

    def with_terms(self, terms: Mapping, arity: int | None = None) -> PolyDiffTensor:
        return PolyDiffTensor(self.nvars, self.arity if arity is None else arity, self.coeff, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyDiffTensor):
            return NotImplemented
        return (self.nvars, self.arity, self.coeff, self.terms) == (other.nvars, other.arity, other.coeff, other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.arity, self.coeff, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: PolyDiffTensor) -> None:
        if (self.nvars, self.arity, self.coeff) != (other.nvars, other.arity, other.coeff):
            raise CoefficientMismatch("cochains differ in variables, arity or coefficients")

    def __add__(self, other: PolyDiffTensor) -> PolyDiffTensor:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return self.with_terms(out)

    def __neg__(self) -> PolyDiffTensor:
        return self.with_terms({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: PolyDiffTensor) -> PolyDiffTensor:
        return self + (-other)

    def __mul__(self, c) -> PolyDiffTensor:
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self.with_terms({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def weights(self) -> set[int]:
        return {p_weight(self.coeff, p) - sum(sum(b) for b in slots) for slots, p in self.terms}

    def total_orders(self) -> set[int]:
        return {p_order(self.coeff, p) + sum(sum(b) for b in slots) for slots, p in self.terms}

    def grouped(self) -> dict[Slots, dict]:
        out: dict[Slots, dict] = {}
        for (slots, p), c in self.terms.items():
            out.setdefault(slots, {})[p] = c
        return out

    def __repr__(self) -> str:
        return f"PolyDiffTensor({format_cochain(self)!r})"

    def __str__(self) -> str:
        return format_cochain(self)


def to_canonical(nvars: int, coeff: CoeffKind, raw: Iterable[tuple[Sequence[WeylOp], object, object]]) -> PolyDiffTensor:
    """Canonical form of sum c * t_1 (x) ... (x) t_k (x) p for arbitrary untwisted t_j.

    ``raw`` yields ``(slots, p, c)``; the polynomial part of every slot
    operator is moved onto p through the left O-action on P.
    """
    out: dict = {}
    arity = None
    for slots, p, c in raw:
        slots = list(slots)
        if arity is None:
            arity = len(slots)
        elif arity != len(slots):
            raise ArityError("mixed arities in a raw cochain")
        for t in slots:
            if not t.twist.is_zero():
                raise ValueError("tensor slots hold untwisted operators")
        pe = p_from_element(coeff, p)
        for choice in itertools.product(*[list(t.terms.items()) for t in slots]):
            coef = Fraction(c)
            cur = dict(pe)
            bs = []
            for (a, b), v in choice:
                coef *= v
                bs.append(b)
                if any(a):
                    nxt: dict = {}
                    for key, w in cur.items():
                        for k2, w2 in p_lmul_fn(coeff, a, key).items():
                            _acc(nxt, k2, w * w2)
                    cur = nxt
            for key, w in cur.items():
                _acc(out, (tuple(bs), key), coef * w)
    return PolyDiffTensor(nvars, arity or 0, coeff, out)


def eval_polydiff(A: PolyDiffTensor, args: Sequence[Poly]):
    """Value of A on the argument tuple, as a Poly (P = O) or WeylOp."""
    if len(args) != A.arity:
        raise ArityError(f"expected {A.arity} arguments, got {len(args)}")
    ck = A.coeff
    total = p_to_element(ck, A.nvars, {})
    for slots, pgroup in A.grouped().items():
        f = Poly.const(A.nvars, 1)
        for b, g in zip(slots, args):
            f = f * g.partial_multi(b)
            if f.is_zero():
                break
        if f.is_zero():
            continue
        total = total + fn_times_element(ck, f, p_to_element(ck, A.nvars, pgroup))
    return total


# Hochschild differential -----------------------------------------------------------

def hochschild_d(A: PolyDiffTensor) -> PolyDiffTensor:
    """dA(g_1..g_{k+1}) = g_1 A(g_2..) + sum_j (-1)^j A(.., g_j g_{j+1}, ..) + (-1)^{k+1} A(..) g_{k+1}."""
    k = A.arity
    n = A.nvars
    z = _zero(n)
    out: dict = {}
    for (slots, p), c in A.terms.items():
        _acc(out, ((z,) + slots, p), c)
        for j in range(k):
            sign = -c if j % 2 == 0 else c
            b = slots[j]
            for e in sub_multi_indices(b):
                new = slots[:j] + (e, sub_exps(b, e)) + slots[j + 1:]
                _acc(out, (new, p), sign * multi_binom(b, e))
        sign = -c if k % 2 == 0 else c
        for e, coef, p2 in _right_expand(A.coeff, p):
            _acc(out, (slots + (e,), p2), sign * coef)
    return A.with_terms(out, k + 1)


def hochschild_d_eval(A: PolyDiffTensor, args: Sequence[Poly]):
    """Evaluation-side oracle for hochschild_d: the formula applied to eval(A)."""
    k = A.arity
    if len(args) != k + 1:
        raise ArityError(f"expected {k + 1} arguments")
    ck = A.coeff
    total = fn_times_element(ck, args[0], eval_polydiff(A, args[1:]))
    for j in range(1, k + 1):
        merged = list(args[:j - 1]) + [args[j - 1] * args[j]] + list(args[j + 1:])
        v = eval_polydiff(A, merged)
        total = total + v if j % 2 == 0 else total - v
    last = element_times_fn(ck, eval_polydiff(A, args[:k]), args[k])
    return total + last if (k + 1) % 2 == 0 else total - last


# products ----------------------------------------------------------------------------

def _result_coeff(a: CoeffKind, b: CoeffKind) -> CoeffKind:
    if a.kind == "O":
        return b
    if b.kind == "O" or a == b:
        return a
    raise CoefficientMismatch(f"cannot multiply {a.tag()} by {b.tag()}")


def concat(A: PolyDiffTensor, B: PolyDiffTensor) -> PolyDiffTensor:
    """Unsigned concatenation (A u B)(a..) = A(a_1..a_i) *_P B(a_{i+1}..).

    Mixed O/P operands realize the two-sided O-cochain action on
    Diff(O^., P).
    """
    if A.nvars != B.nvars:
        raise ArityError("cochains over different variable counts")
    ck = _result_coeff(A.coeff, B.coeff)
    ck_plain = CoeffKind(ck.kind, ck.twist)
    n = A.nvars

    def as_p(key, src: CoeffKind):
        return p_embed(ck, key) if src.kind == "O" else key

    out: dict = {}
    for (sa, pa), ca in A.terms.items():
        pa = as_p(pa, A.coeff)
        for (sb, pb), cb in B.terms.items():
            pb = as_p(pb, B.coeff)
            partial: dict = {((), pa): Fraction(1)}
            for b in sb:
                nxt: dict = {}
                for (extra, key), v in partial.items():
                    for e, coef, k2 in _right_expand(ck_plain, key):
                        _acc(nxt, (extra + (add_exps(b, e),), k2), v * coef)
                partial = nxt
            for (extra, key), v in partial.items():
                for k3, w in p_mul(ck_plain, n, {key: Fraction(1)}, {pb: Fraction(1)}).items():
                    _acc(out, (sa + extra, k3), ca * cb * v * w)
    return PolyDiffTensor(n, A.arity + B.arity, ck, out)


def cup(A: PolyDiffTensor, B: PolyDiffTensor) -> PolyDiffTensor:
    """A . B = (-1)^{ij} A(a_1..a_i) B(a_{i+1}..a_{i+j}); reversed for ^op cochains."""
    if A.coeff != B.coeff:
        raise CoefficientMismatch("cup needs equal coefficient kinds")
    if A.coeff.outer_op:
        return concat(B, A)
    out = concat(A, B)
    return -out if (A.arity * B.arity) % 2 else out


# braces ------------------------------------------------------------------------------

def _compositions(b: Exps, parts: int):
    """All (e_1..e_parts) of multi-indices with sum b, with multinomial coefficient."""
    if parts == 1:
        yield (b,), 1
        return
    for e in sub_multi_indices(b):
        for rest, m in _compositions(sub_exps(b, e), parts - 1):
            yield (e,) + rest, m * multi_binom(b, e)


def brace_sign(positions: Sequence[int], arities: Sequence[int]) -> int:
    """(-1)^eps, eps = sum_l i_l (j_l - 1), from slot positions (0-based, increasing).

    i_l counts the output arguments preceding the inputs of the l-th insertion.
    """
    eps = 0
    consumed = 0
    for l, (s, j) in enumerate(zip(positions, arities)):
        i_l = (s - l) + consumed
        eps += i_l * (j - 1)
        consumed += j
    return -1 if eps % 2 else 1


def _brace(A: PolyDiffTensor, args: Sequence[PolyDiffTensor]) -> PolyDiffTensor:
    for X in args:
        if X.coeff.kind != "O":
            raise CoefficientMismatch("brace arguments must be O-valued cochains")
        if X.nvars != A.nvars:
            raise ArityError("cochains over different variable counts")
    m = len(args)
    i = A.arity
    n_out = i + sum(X.arity for X in args) - m
    if m == 0:
        return A
    if m > i:
        return PolyDiffTensor(A.nvars, max(n_out, 0), A.coeff)
    ck = A.coeff
    n = A.nvars
    arities = [X.arity for X in args]
    arg_terms = [list(X.terms.items()) for X in args]
    out: dict = {}
    for positions in itertools.combinations(range(i), m):
        sign = brace_sign(positions, arities)
        slot_of = {s: l for l, s in enumerate(positions)}
        for (sa, pa), ca in A.terms.items():
            for chosen in itertools.product(*arg_terms):
                # per A-slot: either a plain output slot or a distribution over
                # the inserted cochain's slots and its coefficient function
                options = []
                for s, b in enumerate(sa):
                    l = slot_of.get(s)
                    if l is None:
                        options.append([((b,), None, 1)])
                        continue
                    (sl, pl), _ = chosen[l]
                    opts = []
                    for parts, mult in _compositions(b, len(sl) + 1):
                        new = tuple(add_exps(x, e) for x, e in zip(sl, parts[:-1]))
                        opts.append((new, (pl, parts[-1]), mult))
                    options.append(opts)
                base = ca * sign
                for (_, _), cl in chosen:
                    base *= cl
                for combo in itertools.product(*options):
                    coef = base
                    slots: tuple = ()
                    fn = Poly.const(n, 1)
                    for new, fpart, mult in combo:
                        coef *= mult
                        slots += new
                        if fpart is not None:
                            pl, e = fpart
                            fn = fn * Poly.monomial(pl).partial_multi(e)
                    if fn.is_zero():
                        continue
                    for k2, w in p_lmul_poly(ck, fn, {pa: Fraction(1)}).items():
                        _acc(out, (slots, k2), coef * w)
    return PolyDiffTensor(n, n_out, ck, out)


def brace(A: PolyDiffTensor, args: Sequence[PolyDiffTensor]) -> PolyDiffTensor:
    """A{A_1,...,A_m} for an O-valued cochain A (brace algebra)."""
    if A.coeff.kind != "O":
        raise CoefficientMismatch("brace algebra operations need O-valued A; use brace_module")
    return _brace(A, args)


def brace_module(B: PolyDiffTensor, args: Sequence[PolyDiffTensor]) -> PolyDiffTensor:
    """B{A_1,...,A_m} for B with operator coefficients (brace module)."""
    if B.coeff.kind == "O":
        raise CoefficientMismatch("brace_module expects D or D^op coefficients")
    return _brace(B, args)


# windows, random elements -------------------------------------------------------------

def basis_keys(coeff: CoeffKind, nvars: int, arity: int, weight: int, order_cap: int) -> list:
    """Canonical basis keys of Diff(O^arity, P) with given weight and total order <= order_cap."""
    keys = []
    ders = monomials_up_to(nvars, order_cap)
    for slots in itertools.product(ders, repeat=arity):
        used = sum(sum(b) for b in slots)
        if used > order_cap:
            continue
        if coeff.kind == "O":
            deg = weight + used
            if deg >= 0:
                keys.extend((slots, a) for a in monomials_up_to(nvars, deg) if sum(a) == deg)
            continue
        for bp in ders:
            if used + sum(bp) > order_cap:
                continue
            deg = weight + used + sum(bp)
            if deg >= 0:
                keys.extend((slots, (a, bp)) for a in monomials_up_to(nvars, deg) if sum(a) == deg)
    return sorted(keys, key=_key_sort)


def _key_sort(key):
    slots, p = key
    return (tuple(grlex_key(b) for b in slots), p if isinstance(p[0], int) else (grlex_key(p[1]), grlex_key(p[0])))


def random_cochain(rng: random.Random, nvars: int, coeff: CoeffKind, arity: int,
                   max_order: int = 2, max_deg: int = 2, max_terms: int = 3) -> PolyDiffTensor:
    ders = monomials_up_to(nvars, max_order)
    xs = monomials_up_to(nvars, max_deg)
    out: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        slots = tuple(rng.choice(ders) for _ in range(arity))
        if coeff.kind == "O":
            key = rng.choice(xs)
        else:
            key = (rng.choice(xs), rng.choice(ders))
        _acc(out, (slots, key), Fraction(rng.choice([-3, -2, -1, 1, 2, 3])))
    return PolyDiffTensor(nvars, arity, coeff, out)


# text ------------------------------------------------------------------------------------

def _slot_text(b: Exps, nvars: int) -> str:
    names = [f"d{v}" for v in var_names(nvars)] if nvars <= 3 else [f"d{i}" for i in range(1, nvars + 1)]
    return format_monomial(b, names) or "1"


def format_cochain(A: PolyDiffTensor) -> str:
    if A.is_zero():
        return f"0{A.coeff.tag()}"
    parts = []
    for slots, pg in sorted(A.grouped().items(), key=lambda kv: tuple(grlex_key(b) for b in kv[0]), reverse=True):
        elem = p_to_element(A.coeff, A.nvars, pg)
        ptxt = str(elem)
        if len(pg) > 1:
            ptxt = f"({ptxt})"
        parts.append("[" + " ⊗ ".join([_slot_text(b, A.nvars) for b in slots] + [ptxt]) + "]")
    return " + ".join(parts) + A.coeff.tag()


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?\[([^\]]*)\]")


def parse_cochain(text: str, nvars: int, coeff: CoeffKind) -> PolyDiffTensor:
    """Parse ``c*[t1 ⊗ ... ⊗ p] + ...``; ``#`` is accepted for ``⊗``.

    A trailing coefficient tag (``@O`` etc.) is ignored in favour of ``coeff``.
    """
    body = text.split("@")[0]
    pos = 0
    raw = []
    while pos < len(body.rstrip()):
        m = _TERM.match(body, pos)
        if m is None:
            raise ValueError(f"cannot parse cochain near column {pos + 1}: {text!r}")
        sign, c, inner = m.groups()
        coef = Fraction(c) if c else Fraction(1)
        if sign == "-":
            coef = -coef
        pieces = [s.strip() for s in re.split(r"⊗|#", inner)]
        slots = [parse_op(s, nvars) for s in pieces[:-1]]
        if coeff.kind == "O":
            from .parse import parse_poly
            p = parse_poly(pieces[-1], nvars)
        else:
            p = parse_op(pieces[-1], nvars, coeff.twist)
        raw.append((slots, p, coef))
        pos = m.end()
    if not raw:
        raise ValueError("empty cochain text")
    return to_canonical(nvars, coeff, raw)
