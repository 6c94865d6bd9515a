"""The maps D -> D_X (x) D -> two-sided bar complex and their verification.

``DiffOD`` elements are sums ``d^b (x) s_b`` (pure derivatives on the left,
operators of D_nu on the right) standing for the cochains
``g -> sum_b d^b(g) * s_b``; every function factor of the left slot is moved
into ``s_b`` through ``f P (x) s = P (x) f s``.

The cycle representing an operator in the bar model is the length-graded
completion of psi(phi(p)):

    chi(x^al N^c) = c! [t^c] sum_r (-1)^r E_N(t) [a(t)|...|a(t)] x^al E_M(t)

with ``a(t) = sum_{c != 0} (d^c (x) 1) t^c / c!`` and ``E(t) = sum N^b t^b / b!``
on either end.  Its length-0 part is exactly psi(phi(p)); the longer words
cancel the absorption terms that psi(phi(p)) alone leaves behind.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Mapping, Sequence

from .bar import BarChain, BarSetup, TruncationOverflow, bar_d, bar_mul, two_sided_build
from .complexes import FiniteComplex
from .exact import Exps, SparseMat, add_exps, monomials_of_degree, monomials_up_to, multi_binom, rank, sub_exps, sub_multi_indices
from .polydiff import CoeffKind, PolyDiffTensor, basis_keys, hochschild_d
from .weyl import OneForm, WeylOp, random_op, weyl_apply
from .window import TruncationWindow


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _fact(e: Exps) -> int:
    return prod(factorial(x) for x in e)


# Diff(O, D) = D_X (x)_O D -------------------------------------------------------------------

class DiffOD:
    """Element sum_b d^b (x) s_b of Diff(O, D_nu)."""

    __slots__ = ("nvars", "twist", "comps")

    def __init__(self, nvars: int, comps: Mapping[Exps, WeylOp] | None = None, twist: OneForm | None = None):
        self.nvars = nvars
        self.twist = twist if twist is not None else OneForm.zero(nvars)
        self.comps = {tuple(b): s for b, s in (comps or {}).items() if not s.is_zero()}
        for s in self.comps.values():
            if s.twist != self.twist:
                raise ValueError("component from a different twisted algebra")

    @classmethod
    def from_pairs(cls, nvars: int, pairs: Sequence[tuple[WeylOp, WeylOp]], twist: OneForm | None = None) -> DiffOD:
        """Canonical form of sum L (x) R with L untwisted: x^a d^b (x) R -> d^b (x) x^a R."""
        nu = twist if twist is not None else OneForm.zero(nvars)
        comps: dict[Exps, WeylOp] = {}
        for L, R in pairs:
            for (a, b), c in L.terms.items():
                term = WeylOp.monomial(a, (0,) * nvars, c, nu) * R
                comps[b] = comps[b] + term if b in comps else term
        return cls(nvars, comps, nu)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffOD) and self.nvars == other.nvars and self.comps == other.comps

    def __hash__(self):
        return hash(frozenset(self.comps.items()))

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: DiffOD) -> DiffOD:
        comps = dict(self.comps)
        for b, s in other.comps.items():
            comps[b] = comps[b] + s if b in comps else s
        return DiffOD(self.nvars, comps, self.twist)

    def __neg__(self) -> DiffOD:
        return DiffOD(self.nvars, {b: -s for b, s in self.comps.items()}, self.twist)

    def __sub__(self, other: DiffOD) -> DiffOD:
        return self + (-other)

    def __mul__(self, other: DiffOD) -> DiffOD:
        return diffod_mul(self, other)

    def eval(self, g) -> WeylOp:
        """g -> sum d^b(g) s_b (untwisted derivatives act on the polynomial g)."""
        out = WeylOp.zero(self.nvars, self.twist)
        z = (0,) * self.nvars
        for b, s in self.comps.items():
            dg = weyl_apply(WeylOp.monomial(z, b), g)
            out = out + WeylOp.from_poly(dg, self.twist) * s
        return out

    def to_cochain(self) -> PolyDiffTensor:
        ck = CoeffKind.D(self.twist)
        terms: dict = {}
        for b, s in self.comps.items():
            for key, c in s.terms.items():
                _acc(terms, ((b,), key), c)
        return PolyDiffTensor(self.nvars, 1, ck, terms)

    @classmethod
    def from_cochain(cls, T: PolyDiffTensor) -> DiffOD:
        if T.arity != 1 or T.coeff.kind != "D":
            raise ValueError("expected an arity-1 D-valued cochain")
        comps: dict[Exps, dict] = {}
        for ((b,), key), c in T.terms.items():
            comps.setdefault(b, {})[key] = c
        return cls(T.nvars, {b: WeylOp(T.nvars, t, T.coeff.twist) for b, t in comps.items()}, T.coeff.twist)

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        from .polydiff import _slot_text
        parts = []
        for b in sorted(self.comps, key=lambda e: (sum(e), e), reverse=True):
            s = self.comps[b]
            txt = str(s)
            if len(s.terms) > 1:
                txt = f"({txt})"
            parts.append(f"{_slot_text(b, self.nvars)} ⊗ {txt}")
        return " + ".join(parts)

    __repr__ = __str__


def d_D(p: WeylOp) -> DiffOD:
    """The cochain g -> p g - g p."""
    n = p.nvars
    comps: dict[Exps, dict] = {}
    for (a, b), c in p.terms.items():
        for e in sub_multi_indices(b):
            if any(e):
                _acc(comps.setdefault(e, {}), (a, sub_exps(b, e)), c * multi_binom(b, e))
    return DiffOD(n, {e: WeylOp(n, t, p.twist) for e, t in comps.items()}, p.twist)


def phi(p: WeylOp) -> DiffOD:
    """phi(p) = d_D(p) + 1 (x) p."""
    return d_D(p) + DiffOD(p.nvars, {(0,) * p.nvars: p}, p.twist)


def diffod_mul(u: DiffOD, v: DiffOD) -> DiffOD:
    """(d^a (x) r)(d^b (x) s) = d^(a+b) (x) r s on canonical representatives."""
    comps: dict[Exps, WeylOp] = {}
    for a, r in u.comps.items():
        for b, s in v.comps.items():
            e = add_exps(a, b)
            t = r * s
            comps[e] = comps[e] + t if e in comps else t
    return DiffOD(u.nvars, comps, u.twist)


# bar-side maps -------------------------------------------------------------------------------

def _end_key(x: Exps, y: Exps) -> tuple:
    return (0, (), (x, y))


def psi(n: WeylOp, m: WeylOp, setup: BarSetup) -> BarChain:
    """The length-0 word n[]m; n is read in N^0 and m in M^0."""
    out: dict = {}
    for kn, cn in n.terms.items():
        for km, cm in m.terms.items():
            _acc(out, (_end_key(*kn), (), _end_key(*km)), cn * cm)
    return BarChain(setup, out)


def psi_of(x: DiffOD, setup: BarSetup) -> BarChain:
    """psi applied to sum d^b (x) s_b."""
    z = (0,) * x.nvars
    out = BarChain(setup)
    for b, s in x.comps.items():
        out = out + psi(WeylOp.monomial(z, b, 1, x.twist), s, setup)
    return out


def _splits(c: Exps, r: int):
    """(c_1..c_r) with every c_i nonzero and sum <= c, with the remainder."""
    if r == 0:
        yield (), c
        return
    for c1 in sub_multi_indices(c):
        if any(c1):
            for rest, rem in _splits(sub_exps(c, c1), r - 1):
                yield (c1,) + rest, rem


def chi(p: WeylOp, setup: BarSetup) -> BarChain:
    """Cycle of the two-sided bar complex representing p.

    Words have length <= order(p); a smaller length cap raises TruncationOverflow.
    """
    if not (setup.left and setup.right):
        raise ValueError("chi lands in the two-sided complex")
    n = p.nvars
    z = (0,) * n
    if p.order() > setup.length_cap:
        raise TruncationOverflow(f"chi of an order-{p.order()} operator needs length cap >= {p.order()}")
    out: dict = {}
    for (al, c), coef in p.terms.items():
        for r in range(sum(c) + 1):
            for cs, rem in _splits(c, r):
                denom = prod(_fact(x) for x in cs)
                letters = tuple((1, (ci,), z) for ci in cs)
                for b in sub_multi_indices(rem):
                    beta = sub_exps(rem, b)
                    w = Fraction(_fact(c), _fact(b) * _fact(beta) * denom) * (-1) ** r
                    _acc(out, (_end_key(z, b), letters, _end_key(al, beta)), coef * w)
    return BarChain(setup, out)


def augmentation(chain: BarChain) -> DiffOD:
    """Length-0, degree-0 part read in D_X (x)_O D: x^a N^b [] m -> d^b (x) x^a m."""
    s = chain.setup
    n = s.nvars
    nu = s.twist if s.twist is not None else OneForm.zero(n)
    comps: dict[Exps, dict] = {}
    for (left, letters, right), c in chain.terms.items():
        if letters or left[0] or right[0]:
            continue
        a, b = left[2]
        al, beta = right[2]
        _acc(comps.setdefault(b, {}), (add_exps(a, al), beta), c)
    return DiffOD(n, {b: WeylOp(n, t, nu) for b, t in comps.items()}, nu)


def absorption_residue(p: WeylOp, setup: BarSetup) -> tuple[BarChain, BarChain]:
    """(bar_d(psi(phi(p))), its cancelling part).

    The first entry is the naive boundary, made only of absorption-type
    terms; the second is the length-0 part of bar_d of chi's longer words.
    They sum to zero, so the naive terms vanish in N (x)_A M.
    """
    naive = psi_of(phi(p), setup)
    longer = chi(p, setup) - naive
    return bar_d(naive), bar_d(longer).length_part(0)


# windows -----------------------------------------------------------------------------------

def weyl_window_basis(nvars: int, order_cap: int, weight: int) -> list[tuple[Exps, Exps]]:
    """Monomials x^a N^b with |b| <= order_cap and |a| - |b| = weight."""
    out = []
    for b in monomials_up_to(nvars, order_cap):
        d = weight + sum(b)
        if d >= 0:
            out.extend((a, b) for a in monomials_of_degree(nvars, d))
    return out


def _normal_keys(ck: CoeffKind, nvars: int, arity: int, weight: int, order_cap: int) -> list:
    return [(arity, slots, p) for slots, p in basis_keys(ck, nvars, arity, weight, order_cap)
            if all(any(b) for b in slots)]


def diff_complex(coeff: CoeffKind, window: TruncationWindow, weight: int) -> FiniteComplex:
    """Normalized Diff(O^k, P), 0 <= k <= arity_cap, total order <= order_cap, one weight."""
    n = window.nvars
    basis = {k: _normal_keys(coeff, n, k, weight, window.order_cap) for k in range(window.arity_cap + 1)}

    def image(key):
        arity, slots, p = key
        if arity == window.arity_cap:
            return {}
        T = hochschild_d(PolyDiffTensor(n, arity, coeff, {(slots, p): Fraction(1)}))
        return {(T.arity, s, q): c for (s, q), c in T.terms.items()}

    return FiniteComplex.assemble(basis, image)


@dataclass
class CohomologyTable:
    coeff: str
    window: TruncationWindow
    dims: dict[int, dict[int, int]]  # weight -> degree -> dim
    stable: dict[int, dict[int, bool]]
    h0_oracle: dict[int, int]

    def ok(self) -> bool:
        """Stable H^0 matches the monomial count and stable H^k (0 < k < arity cap) vanish."""
        for w, row in self.dims.items():
            for k, d in row.items():
                if not self.stable[w][k] or k >= self.window.arity_cap:
                    continue
                if k == 0 and d != self.h0_oracle[w]:
                    return False
                if k > 0 and d != 0:
                    return False
        return True


def diff_complex_cohomology(coeff: CoeffKind, window: TruncationWindow) -> CohomologyTable:
    """Windowed cohomology of Diff(O^., P) per Bernstein weight, with stability flags.

    Without a weight slice, weights -order_cap .. degree_cap are tabulated.
    A dimension is stable when unchanged with order_cap and arity_cap both + 1.
    """
    weights = ([window.bernstein_weight] if window.bernstein_weight is not None
               else list(range(-window.order_cap, window.degree_cap + 1)))
    bigger = window.bumped(order=1, arity=1)
    dims, stable, oracle = {}, {}, {}
    for w in weights:
        h = diff_complex(coeff, window, w).cohomology()
        h2 = diff_complex(coeff, bigger, w).cohomology()
        # the top arity is a truncation edge, never stable by fiat
        dims[w] = h
        stable[w] = {k: (h2.get(k) == d and k < window.arity_cap) for k, d in h.items()}
        oracle[w] = len(list(monomials_of_degree(window.nvars, w))) if w >= 0 else 0
    tag = coeff.kind + ("^op" if coeff.outer_op else "")
    return CohomologyTable(tag, window, dims, stable, oracle)


# main theorem ------------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    provisional: bool = False  # inconclusive: the degrees involved still move with the length cap


@dataclass
class MainTheoremReport:
    window: TruncationWindow
    twist: OneForm
    dims: dict[int, int]
    basis_sizes: dict[int, int]
    stable: dict[int, bool]
    weyl_count: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures()

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed and not c.provisional]


def _generators(nvars: int, nu: OneForm) -> list[WeylOp]:
    gens = [WeylOp.x(nvars, i, nu) for i in range(1, nvars + 1)]
    gens += [WeylOp.d(nvars, i, nu) for i in range(1, nvars + 1)]
    return gens


_H0_CHECKS = ("augmentation-injective-on-H0", "H0-equals-weyl-window", "chi-bijective-onto-H0")


def main_theorem_verify(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
                        n_random: int = 50, n_pairs: int = 30) -> MainTheoremReport:
    """Cocycle, multiplicativity, H^0 and vanishing checks in one window.

    Multiplicativity is checked in H^0, where the augmentation identifies
    classes with elements of D_X (x)_O D carrying the componentwise product;
    the window itself certifies that the identification is injective.
    """
    n = window.nvars
    nu = twist if twist is not None else OneForm.zero(n)
    if window.bernstein_weight is None:
        window = window.with_weight(0)
    w = window.bernstein_weight
    rng = random.Random(seed)
    setup, C = two_sided_build(window, nu)
    _, C_big = two_sided_build(window.bumped(order=0, arity=1, length=1), nu)
    H = C.cohomology()
    H_big = C_big.cohomology()
    wbasis = weyl_window_basis(n, window.order_cap, w)
    report = MainTheoremReport(window, nu, H, {k: C.dim(k) for k in C.basis},
                               {k: H_big.get(k) == d for k, d in H.items()}, len(wbasis))
    checks = report.checks
    L = window.bar_length_cap
    free = BarSetup(n, nu, True, True, L, normalized=True)

    # (a) cocycles
    elems = _generators(n, nu) + [random_op(rng, n, min(L, 3), 2, twist=nu) for _ in range(n_random)]
    bad = [p for p in elems if not bar_d(chi(p, free)).is_zero()]
    checks.append(Check("chi-cocycle", not bad,
                        f"{len(elems)} elements" + (f"; first failure: {bad[0]}" if bad else "")))
    resid = [p for p in _generators(n, nu) if not (sum(absorption_residue(p, free), BarChain(free))).is_zero()]
    checks.append(Check("naive-terms-cancel-over-A", not resid, "bar_d(psi(phi(p))) + longer-word absorptions = 0"))
    lead = [p for p in elems if augmentation(chi(p, free)) != phi(p)]
    checks.append(Check("chi-length0-is-psi-phi", not lead,
                        "" if not lead else f"first failure: {lead[0]}"))

    # (b) multiplicativity in H^0
    pairs = [(p, q) for p in _generators(n, nu) for q in _generators(n, nu)]
    while len(pairs) < len(_generators(n, nu)) ** 2 + n_pairs:
        a = rng.randint(0, L)
        p = random_op(rng, n, a, 2, twist=nu)
        q = random_op(rng, n, L - a, 2, twist=nu)
        pairs.append((p, q))
    badm = []
    for p, q in pairs:
        lhs = augmentation(chi(p * q, free))
        rhs = diffod_mul(augmentation(chi(p, free)), augmentation(chi(q, free)))
        if lhs != rhs:
            badm.append((p, q, lhs, rhs))
    checks.append(Check("chi-multiplicative-H0", not badm,
                        f"{len(pairs)} pairs" + (f"; {badm[0][0]} * {badm[0][1]}: {badm[0][2]} vs {badm[0][3]}" if badm else "")))
    # augmentation kills boundaries and is injective on H^0 inside the window
    D_in = C.d(-1)
    aug_rows = _augmentation_matrix(C, setup)
    kills = aug_rows.matmul(D_in).is_zero() if C.dim(-1) else True
    checks.append(Check("augmentation-kills-boundaries", kills))
    Z0 = C.cocycles(0)
    ker_aug = [z for z in Z0 if not any(aug_rows.matvec(z))]
    inj = all(C.is_boundary(0, z) for z in ker_aug)
    checks.append(Check("augmentation-injective-on-H0", inj, f"{len(ker_aug)} cocycles with zero augmentation"))

    # (c) H^0 against the Weyl window, chi onto H^0
    checks.append(Check("H0-equals-weyl-window", H.get(0, 0) == len(wbasis),
                        f"H0={H.get(0, 0)} weyl={len(wbasis)}"))
    try:
        vecs = [C.vector(0, chi(WeylOp.monomial(a, b, 1, nu), setup).terms) for a, b in wbasis]
        cyc = all(C.is_cycle(0, v) for v in vecs)
        B0 = [list(col) for col in _columns(D_in)]
        r_b = rank(SparseMat.from_columns(C.dim(0), [dict(enumerate(c)) for c in B0]))
        r_all = rank(SparseMat.from_columns(C.dim(0), [dict(enumerate(c)) for c in B0 + vecs]))
        onto = cyc and r_all - r_b == len(wbasis) == H.get(0, 0)
        checks.append(Check("chi-bijective-onto-H0", onto, f"independent classes {r_all - r_b}"))
    except TruncationOverflow as exc:
        checks.append(Check("chi-bijective-onto-H0", False, str(exc)))

    # (d) vanishing away from degree 0
    # a nonzero dimension that still moves with the length cap is not counted against the window
    nz = {k: d for k, d in H.items() if k != 0 and d}
    unstable = [k for k, s in report.stable.items() if not s]
    stable_nz = {k: d for k, d in nz.items() if k not in unstable}
    checks.append(Check("H-nonzero-degrees-vanish", not stable_nz,
                        f"nonzero: {nz}; unstable degrees: {unstable}", provisional=bool(unstable)))
    if not report.stable.get(0, True):
        for c in checks:
            if c.name in _H0_CHECKS:
                c.provisional = True
    return report


def _columns(M: SparseMat) -> list[list[Fraction]]:
    cols = [[Fraction(0)] * M.rows for _ in range(M.cols)]
    for (r, c), v in M.entries.items():
        cols[c][r] = v
    return cols


def _augmentation_matrix(C: FiniteComplex, setup: BarSetup) -> SparseMat:
    """Rows: (b, operator key) coordinates of the augmentation on degree-0 words."""
    rows: dict = {}
    entries = {}
    for j, wk in enumerate(C.basis.get(0, [])):
        aug = augmentation(BarChain(setup, {wk: Fraction(1)}))
        for b, s in aug.comps.items():
            for key, c in s.terms.items():
                i = rows.setdefault((b, key), len(rows))
                entries[(i, j)] = entries.get((i, j), 0) + c
    return SparseMat(max(len(rows), 1), C.dim(0), entries)
