"""Bar constructions over the brace algebra A = Diff(O^., O).

A bar word ``n[a_1|...|a_r]m`` has letters that are single basis cochains of
A (shifted degree arity - 1) and optional ends n in N = Diff(O^., D^op)^op and
m in M = Diff(O^., D).  Linear combinations are :class:`BarChain` values,
dicts ``(left, letters, right) -> Fraction`` where every component is a basis
key ``(arity, slots, pkey)`` (ends may be None).

The bar differential is the two-sided bar differential of the dg algebra
(A, d, u) with u the unsigned concatenation product, N a right module and M
a left module through concatenation.  The product on T(A[1]) is the
coalgebra map whose corestriction is
``(a; b_1..b_m) -> sign * a{b_1..b_m}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .complexes import FiniteComplex
from .polydiff import (
    CoeffKind,
    PolyDiffTensor,
    basis_keys,
    brace,
    brace_module,
    concat,
    format_cochain,
    hochschild_d,
    p_order,
    p_weight,
)
from .weyl import OneForm
from .window import TruncationWindow

Key = tuple  # (arity, slots, pkey)
WordKey = tuple  # (left key | None, tuple of letter keys, right key | None)

O = CoeffKind.O()


class TruncationOverflow(RuntimeError):
    """A product or differential produced a word longer than the length cap."""


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def tensor_of(ck: CoeffKind, nvars: int, key: Key) -> PolyDiffTensor:
    arity, slots, pkey = key
    return PolyDiffTensor(nvars, arity, ck, {(slots, pkey): Fraction(1)})


def keys_of(T: PolyDiffTensor) -> dict[Key, Fraction]:
    return {(T.arity, slots, p): c for (slots, p), c in T.terms.items()}


def key_weight(ck: CoeffKind, key: Key) -> int:
    _, slots, p = key
    return p_weight(ck, p) - sum(sum(b) for b in slots)


def key_order(ck: CoeffKind, key: Key) -> int:
    _, slots, p = key
    return p_order(ck, p) + sum(sum(b) for b in slots)


@dataclass(frozen=True)
class BarSetup:
    """Which ends exist, their coefficient kinds, and the length cap."""

    nvars: int
    twist: OneForm | None = None
    left: bool = True
    right: bool = True
    length_cap: int = 2
    normalized: bool = True

    @property
    def n_kind(self) -> CoeffKind:
        return CoeffKind.Dop(self.twist if self.twist is not None else OneForm.zero(self.nvars), outer_op=True)

    @property
    def m_kind(self) -> CoeffKind:
        return CoeffKind.D(self.twist if self.twist is not None else OneForm.zero(self.nvars))

    def unit_letter(self) -> Key:
        return (0, (), (0,) * self.nvars)


class BarChain:
    """Linear combination of bar words."""

    __slots__ = ("setup", "terms")

    def __init__(self, setup: BarSetup, terms: Mapping[WordKey, Fraction] | None = None):
        self.setup = setup
        clean = {}
        for k, v in (terms or {}).items():
            if v == 0:
                continue
            if setup.normalized and setup.unit_letter() in k[1]:
                continue
            if len(k[1]) > setup.length_cap:
                raise TruncationOverflow(f"word of length {len(k[1])} exceeds cap {setup.length_cap}")
            clean[k] = Fraction(v)
        self.terms = clean

    def __eq__(self, other) -> bool:
        return isinstance(other, BarChain) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: BarChain) -> BarChain:
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return BarChain(self.setup, out)

    def __neg__(self) -> BarChain:
        return BarChain(self.setup, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: BarChain) -> BarChain:
        return self + (-other)

    def __mul__(self, c) -> BarChain:
        if isinstance(c, BarChain):
            return bar_mul(self, c)
        return BarChain(self.setup, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def degrees(self) -> set[int]:
        return {word_degree(w) for w in self.terms}

    def length_part(self, r: int) -> BarChain:
        return BarChain(self.setup, {k: c for k, c in self.terms.items() if len(k[1]) == r})

    def __repr__(self) -> str:
        return f"BarChain({format_chain(self)!r})"

    def __str__(self) -> str:
        return format_chain(self)


def word(setup: BarSetup, left=None, letters: Sequence = (), right=None, c=1) -> BarChain:
    """Multilinear expansion of n[a_1|...|a_r]m from PolyDiffTensor components."""
    parts = []
    if setup.left:
        parts.append(list(keys_of(left).items()) if left is not None else None)
    for a in letters:
        parts.append(list(keys_of(a).items()))
    if setup.right:
        parts.append(list(keys_of(right).items()) if right is not None else None)
    if any(p is None for p in parts):
        raise ValueError("two-sided setups need both ends")
    out: dict = {}
    for combo in itertools.product(*parts):
        coef = Fraction(c)
        keys = []
        for k, v in combo:
            coef *= v
            keys.append(k)
        l = keys.pop(0) if setup.left else None
        r = keys.pop() if setup.right else None
        _acc(out, (l, tuple(keys), r), coef)
    return BarChain(setup, out)


def word_degree(w: WordKey) -> int:
    left, letters, right = w
    deg = sum(a[0] - 1 for a in letters)
    if left is not None:
        deg += left[0]
    if right is not None:
        deg += right[0]
    return deg


# cached single-key operations --------------------------------------------------------

@lru_cache(maxsize=None)
def _d_key(ck: CoeffKind, nvars: int, key: Key) -> tuple:
    return tuple(keys_of(hochschild_d(tensor_of(ck, nvars, key))).items())


@lru_cache(maxsize=None)
def _concat_keys(ck1: CoeffKind, ck2: CoeffKind, nvars: int, k1: Key, k2: Key) -> tuple:
    return tuple(keys_of(concat(tensor_of(ck1, nvars, k1), tensor_of(ck2, nvars, k2))).items())


@lru_cache(maxsize=None)
def _brace_keys(nvars: int, a: Key, bs: tuple) -> tuple:
    T = brace(tensor_of(O, nvars, a), [tensor_of(O, nvars, b) for b in bs])
    return tuple(keys_of(T).items())


def _sdeg(a: Key) -> int:
    return a[0] - 1


# bar differential ------------------------------------------------------------------------

def bar_d(chain: BarChain) -> BarChain:
    """Two-sided (or one-sided, or plain) bar differential."""
    s = chain.setup
    n = s.nvars
    out: dict = {}
    for (left, letters, right), c in chain.terms.items():
        r = len(letters)
        eps = [0] * (r + 1)  # eps[i] = |n| + sum_{j<=i} |s a_j|
        eps[0] = left[0] if left is not None else 0
        for i, a in enumerate(letters):
            eps[i + 1] = eps[i] + _sdeg(a)
        # internal differentials
        if left is not None:
            for k, v in _d_key(s.n_kind, n, left):
                _acc(out, (k, letters, right), c * v)
        for i, a in enumerate(letters):
            sign = 1 if eps[i] % 2 else -1
            for k, v in _d_key(O, n, a):
                _acc(out, (left, letters[:i] + (k,) + letters[i + 1:], right), sign * c * v)
        if right is not None:
            sign = -1 if eps[r] % 2 else 1
            for k, v in _d_key(s.m_kind, n, right):
                _acc(out, (left, letters, k), sign * c * v)
        # merges
        for i in range(1, r):
            sign = -1 if eps[i] % 2 else 1
            for k, v in _concat_keys(O, O, n, letters[i - 1], letters[i]):
                _acc(out, (left, letters[:i - 1] + (k,) + letters[i + 1:], right), sign * c * v)
        # absorptions into the ends
        if r and left is not None:
            sign = -1 if eps[0] % 2 else 1
            for k, v in _concat_keys(s.n_kind, O, n, left, letters[0]):
                _acc(out, (k, letters[1:], right), sign * c * v)
        if r and right is not None:
            sign = 1 if eps[r - 1] % 2 else -1
            for k, v in _concat_keys(O, s.m_kind, n, letters[-1], right):
                _acc(out, (left, letters[:-1], k), sign * c * v)
    return BarChain(s, out)


# Gerstenhaber-Voronov product ---------------------------------------------------------------

def brace_corestriction_sign(a: Key, bs: Sequence[Key]) -> int:
    """Sign attached to (a; b_1..b_m) -> a{b_1..b_m} in the corestriction.

    (-1)^(|a|' sum|b|' + sum_{k<l} |b_k|'|b_l|' + m) with |.|' = arity - 1; the
    unique choice among bilinear-degree signs making the product associative
    and bar_d a derivation of it.
    """
    A = _sdeg(a)
    B = [_sdeg(b) for b in bs]
    e = A * sum(B) + len(B)
    e += sum(B[k] * B[l] for l in range(len(B)) for k in range(l))
    return -1 if e % 2 else 1


def _pieces(letters: tuple, k: int):
    """Ways to cut a word into k consecutive (possibly empty) pieces."""
    r = len(letters)
    for cuts in itertools.combinations_with_replacement(range(r + 1), k - 1):
        bounds = (0,) + cuts + (r,)
        yield tuple(letters[bounds[t]:bounds[t + 1]] for t in range(k))


def _word_sdeg(piece: tuple) -> int:
    return sum(_sdeg(a) for a in piece)


@lru_cache(maxsize=None)
def _gv_words(nvars: int, x: tuple, y: tuple) -> tuple:
    """[x] * [y] in T(A[1]) for basis words x, y (letter-key tuples)."""
    out: dict = {}
    r, s = len(x), len(y)
    if r == 0:
        return (((y,), Fraction(1)),)
    if s == 0:
        return (((x,), Fraction(1)),)
    # each a-letter gets a (possibly empty) block of b's braced into it; b's
    # not braced sit alone between them.  Enumerate the block structure of y
    # as: free_0, braced_1, free_1, braced_2, ..., braced_r, free_r.
    for cut in _pieces(y, 2 * r + 1):
        free = cut[0::2]
        braced = cut[1::2]
        # Koszul sign: the canonical order x_1 y_1 x_2 y_2 ... from x ⊗ y.
        # pieces in output order: free_0 | (a_1; braced_1) | free_1 | ...
        # y-material before a_t is free_0..free_{t-1}, braced_1..braced_{t-1}
        # and braced_t (braced_t travels with a_t but stands after it).
        sign = 0
        moved = 0
        for t in range(r):
            before = free[t]
            # y-pieces that pass a_t are everything of y that ends up at or
            # before a_t's block, i.e. everything up to and including free_t's
            # predecessor pieces plus braced_t.
            moved += _word_sdeg(before)
            if t:
                moved += _word_sdeg(braced[t - 1])
            sign += moved * _sdeg(x[t])
        factors = []
        for t in range(r):
            for b in free[t]:
                factors.append((((b,), Fraction(1)),))
            if braced[t]:
                bs = braced[t]
                sg = brace_corestriction_sign(x[t], bs)
                factors.append(tuple(((k,), v * sg) for k, v in _brace_keys(nvars, x[t], bs)))
            else:
                factors.append((((x[t],), Fraction(1)),))
        for b in free[r]:
            factors.append((((b,), Fraction(1)),))
        base = -1 if sign % 2 else 1
        for combo in itertools.product(*factors):
            coef = Fraction(base)
            w: tuple = ()
            for k, v in combo:
                coef *= v
                w += k
            _acc(out, w, coef)
    return tuple(((w,), c) for w, c in out.items())


def gv_mul(u: BarChain, v: BarChain) -> BarChain:
    """Gerstenhaber-Voronov product of plain bar chains."""
    s = u.setup
    if s.left or s.right or v.setup.left or v.setup.right:
        raise ValueError("gv_mul multiplies plain bar words; use bar_mul for ended words")
    out: dict = {}
    for (_, x, _), cu in u.terms.items():
        for (_, y, _), cv in v.terms.items():
            for (w,), c in _gv_words(s.nvars, x, y):
                if len(w) > s.length_cap:
                    raise TruncationOverflow(f"product word of length {len(w)} exceeds cap {s.length_cap}")
                _acc(out, (None, w, None), cu * cv * c)
    return BarChain(s, out)


def _koszul(e: int) -> int:
    return -1 if e % 2 else 1


@lru_cache(maxsize=None)
def _brace_module_keys(ck: CoeffKind, nvars: int, end: Key, bs: tuple) -> tuple:
    T = brace_module(tensor_of(ck, nvars, end), [tensor_of(O, nvars, b) for b in bs])
    return tuple(keys_of(T).items())


def _right_words(setup: BarSetup, x: WordKey, y: WordKey) -> dict:
    """[u]m * [v]m' = sum_{v = v1 v2} +- [u * v1] (m{v2} m')."""
    n = setup.nvars
    _, u, m = x
    _, v, m2 = y
    M = m[0]
    out: dict = {}
    for cut in range(len(v) + 1):
        v1, v2 = v[:cut], v[cut:]
        sign = brace_corestriction_sign(m, v2) * _koszul(M * _word_sdeg(v1))
        ends: dict = {}
        for k, c in _brace_module_keys(setup.m_kind, n, m, v2):
            for k2, c2 in _concat_keys(setup.m_kind, setup.m_kind, n, k, m2):
                _acc(ends, k2, c * c2)
        for (w,), c in _gv_words(n, u, v1):
            for k, c2 in ends.items():
                _acc(out, (None, w, k), sign * c * c2)
    return out


def _left_words(setup: BarSetup, x: WordKey, y: WordKey) -> dict:
    """n[u] * n'[v] = sum_{u = u1 u2} +- (n n'{u1}) [u2 *op v].

    The tail is multiplied in the opposite order, u2 *op v = (-1)^{|u2||v|} v * u2.
    """
    n = setup.nvars
    nn, u, _ = x
    n2, v, _ = y
    V = _word_sdeg(v)
    out: dict = {}
    for cut in range(len(u) + 1):
        u1, u2 = u[:cut], u[cut:]
        B = [_sdeg(b) for b in u1]
        e = len(u1) + sum(B) + sum(B[k] * B[l] for l in range(len(B)) for k in range(l))
        e += n2[0] * _word_sdeg(u2) + V * _word_sdeg(u2)
        sign = _koszul(e)
        ends: dict = {}
        for k, c in _brace_module_keys(setup.n_kind, n, n2, u1):
            for k2, c2 in _concat_keys(setup.n_kind, setup.n_kind, n, nn, k):
                _acc(ends, k2, c * c2)
        for (w,), c in _gv_words(n, v, u2):
            for k, c2 in ends.items():
                _acc(out, (k, w, None), sign * c * c2)
    return out


def _ends_only_words(setup: BarSetup, x: WordKey, y: WordKey) -> dict:
    """n[]m * n'[]m' = (-1)^{|m||n'|} (n n')[](m m')."""
    n = setup.nvars
    nn, u, m = x
    n2, v, m2 = y
    if u or v:
        raise ValueError("two-sided products are only defined on length-0 words")
    sign = _koszul(m[0] * n2[0])
    out: dict = {}
    for k, c in _concat_keys(setup.n_kind, setup.n_kind, n, nn, n2):
        for k2, c2 in _concat_keys(setup.m_kind, setup.m_kind, n, m, m2):
            _acc(out, (k, (), k2), sign * c * c2)
    return out


def bar_mul(u: BarChain, v: BarChain) -> BarChain:
    """Product on plain, left-sided, right-sided or length-0 two-sided chains."""
    s = u.setup
    if s != v.setup:
        raise ValueError("chains live in different bar complexes")
    if not s.left and not s.right:
        return gv_mul(u, v)
    rule = _ends_only_words if (s.left and s.right) else (_left_words if s.left else _right_words)
    out: dict = {}
    for x, cu in u.terms.items():
        for y, cv in v.terms.items():
            for w, c in rule(s, x, y).items():
                if len(w[1]) > s.length_cap:
                    raise TruncationOverflow(f"product word of length {len(w[1])} exceeds cap {s.length_cap}")
                _acc(out, w, cu * cv * c)
    return BarChain(s, out)


def format_chain(chain: BarChain) -> str:
    if chain.is_zero():
        return "0"
    s = chain.setup
    n = s.nvars
    parts = []
    for (left, letters, right), c in sorted(chain.terms.items(), key=lambda kv: repr(kv[0])):
        body = "|".join(format_cochain(tensor_of(O, n, a)).removesuffix("@O") for a in letters)
        txt = f"[{body}]"
        if left is not None:
            txt = format_cochain(tensor_of(s.n_kind, n, left)).rsplit("@", 1)[0] + " " + txt
        if right is not None:
            txt = txt + " " + format_cochain(tensor_of(s.m_kind, n, right)).rsplit("@", 1)[0]
        parts.append(f"{c}*{txt}" if c != 1 else txt)
    return " + ".join(parts)


# windowed two-sided complex -------------------------------------------------------------

def _normalized(key: Key) -> bool:
    return all(any(b) for b in key[1])


@lru_cache(maxsize=None)
def _component_keys(ck: CoeffKind, nvars: int, arity_cap: int, order_cap: int, lo: int, hi: int) -> tuple:
    """Normalized basis keys with total order <= order_cap and weight in [lo, hi]."""
    out = []
    for arity in range(arity_cap + 1):
        for w in range(lo, hi + 1):
            for slots, p in basis_keys(ck, nvars, arity, w, order_cap):
                key = (arity, slots, p)
                if _normalized(key):
                    out.append((key, w, key_order(ck, key)))
    return tuple(out)


def window_words(setup: BarSetup, window: TruncationWindow) -> dict[int, list[WordKey]]:
    """Basis words of the two-sided (or one-sided) complex within the window, by degree."""
    if window.bernstein_weight is None:
        raise ValueError("the bar window needs a Bernstein weight slice")
    n = setup.nvars
    N = window.order_cap
    w = window.bernstein_weight
    lo, hi = -N, w + N
    letters = [x for x in _component_keys(O, n, window.arity_cap, N, lo, hi) if x[0] != setup.unit_letter()]
    lefts = _component_keys(setup.n_kind, n, window.arity_cap, N, lo, hi) if setup.left else ((None, 0, 0),)
    rights = _component_keys(setup.m_kind, n, window.arity_cap, N, lo, hi) if setup.right else ((None, 0, 0),)
    out: dict[int, list[WordKey]] = {}

    def extend(prefix, weight, order, length):
        for r, rw, ro in rights:
            if weight + rw == w and order + ro <= N:
                wk = (prefix[0], tuple(prefix[1:]), r)
                out.setdefault(word_degree(wk), []).append(wk)
        if length == setup.length_cap:
            return
        for a, aw, ao in letters:
            if order + ao <= N:
                extend(prefix + [a], weight + aw, order + ao, length + 1)

    for l, lw, lo_ in lefts:
        if lo_ <= N:
            extend([l], lw, lo_, 0)
    return {k: sorted(v, key=repr) for k, v in sorted(out.items())}


def two_sided_build(window: TruncationWindow, twist: OneForm | None = None,
                    left: bool = True, right: bool = True) -> tuple[BarSetup, FiniteComplex]:
    """Windowed bar complex N (x) T(A[1]) (x) M with its differential matrices.

    Basis: normalized cochains (every slot of order >= 1) in each component,
    no unit letter, total derivation order <= order_cap, Bernstein weight
    equal to the window's, length <= bar_length_cap.  The differential
    preserves order and weight and never lengthens words, so this is a
    subcomplex and d^2 = 0 holds exactly.
    """
    setup = BarSetup(window.nvars, twist, left, right, window.bar_length_cap, normalized=True)
    basis = window_words(setup, window)

    def image(wk):
        return bar_d(BarChain(setup, {wk: Fraction(1)})).terms

    return setup, FiniteComplex.assemble(basis, image)
