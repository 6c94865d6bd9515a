"""Koszul and twisted de Rham complexes on affine space, polyvectors and the BV operator.

Forms are sums ``g dx_I`` and polyvectors sums ``g d_I`` with ``I`` a strictly
increasing index tuple (0-based).  The BV operator is the divergence for the
standard volume ``dx_1 ^ ... ^ dx_n``; transport to forms is contraction
into that volume.

Sign conventions (each pinned by the smallest nonzero case):
    interior products remove an index from the left, with sign (-1)^position;
    transport sends ``d_I`` to ``(-1)^(k(k-1)/2) sgn(I, I^c) dx_{I^c}`` for ``|I| = k``,
    the extra factor making ``transport(delta v) = d transport(v)`` and
    ``transport(iota_df v) = df ^ transport(v)`` hold with sign +1 in every degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exact import Exps, Poly, SparseMat, monomials_up_to, rank, rank_and_kernel, var_names

Index = tuple[int, ...]


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _insert_sign(i: int, I: Index) -> tuple[int, Index] | None:
    """dx_i ^ dx_I = sign * dx_{I + i}; None when i in I."""
    if i in I:
        return None
    before = sum(1 for j in I if j < i)
    return (-1 if before % 2 else 1), tuple(sorted(I + (i,)))


def _perm_sign(seq: Index) -> int:
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class _Graded:
    nvars: int
    terms: Mapping[tuple[Exps, Index], Fraction]

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: Fraction(v) for k, v in self.terms.items() if v != 0})
        for e, I in self.terms:
            if len(e) != self.nvars or list(I) != sorted(set(I)) or any(not 0 <= i < self.nvars for i in I):
                raise ValueError(f"bad term {(e, I)}")

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return type(self)(self.nvars, out)

    def __neg__(self):
        return type(self)(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return type(self)(self.nvars, {k: v * c for k, v in self.terms.items()})

    def degrees(self) -> set[int]:
        return {len(I) for _, I in self.terms}

    def components(self) -> dict[Index, Poly]:
        out: dict[Index, dict] = {}
        for (e, I), c in self.terms.items():
            out.setdefault(I, {})[e] = c
        return {I: Poly(self.nvars, t) for I, t in out.items()}

    @classmethod
    def from_components(cls, nvars: int, comps: Mapping[Index, Poly]):
        out: dict = {}
        for I, g in comps.items():
            for e, c in g.terms.items():
                _acc(out, (e, tuple(I)), c)
        return cls(nvars, out)

    @classmethod
    def basis(cls, nvars: int, I: Index, g: Poly | None = None):
        g = g if g is not None else Poly.const(nvars, 1)
        return cls.from_components(nvars, {tuple(I): g})

    _symbol = "dx"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = var_names(self.nvars)
        parts = []
        for I, g in sorted(self.components().items()):
            wedge = "^".join(f"{self._symbol[0]}{names[i]}" for i in I)
            parts.append(f"({g})" + (f"*{wedge}" if wedge else ""))
        return " + ".join(parts)


class PolyForm(_Graded):
    """Polynomial differential form."""


class PolyVector(_Graded):
    """Polynomial polyvector field; index tuples denote d_{i_1} ^ ... ^ d_{i_k}."""

    _symbol = "∂"


# forms -------------------------------------------------------------------------

def wedge_df(w: PolyForm, f: Poly) -> PolyForm:
    """df ^ w."""
    out: dict = {}
    for I, g in w.components().items():
        for i in range(w.nvars):
            fi = f.partial(i + 1)
            r = _insert_sign(i, I)
            if r is None or fi.is_zero():
                continue
            sign, J = r
            for e, c in (fi * g).terms.items():
                _acc(out, (e, J), sign * c)
    return PolyForm(w.nvars, out)


def de_rham_d(w: PolyForm) -> PolyForm:
    out: dict = {}
    for I, g in w.components().items():
        for i in range(w.nvars):
            r = _insert_sign(i, I)
            if r is None:
                continue
            sign, J = r
            for e, c in g.partial(i + 1).terms.items():
                _acc(out, (e, J), sign * c)
    return PolyForm(w.nvars, out)


def twisted_dr_d(w: PolyForm, f: Poly) -> PolyForm:
    """d w + df ^ w."""
    return de_rham_d(w) + wedge_df(w, f)


# polyvectors ---------------------------------------------------------------------

def _remove(I: Index):
    for s, i in enumerate(I):
        yield i, (-1 if s % 2 else 1), I[:s] + I[s + 1:]


def contract_df(v: PolyVector, f: Poly) -> PolyVector:
    """iota_df: d_I -> sum_s (-1)^s (d_{i_s} f) d_{I - i_s}."""
    out: dict = {}
    for I, g in v.components().items():
        for i, sign, J in _remove(I):
            for e, c in (g * f.partial(i + 1)).terms.items():
                _acc(out, (e, J), sign * c)
    return PolyVector(v.nvars, out)


def bv_delta(v: PolyVector) -> PolyVector:
    """Divergence: g d_I -> sum_s (-1)^s (d_{i_s} g) d_{I - i_s}."""
    out: dict = {}
    for I, g in v.components().items():
        for i, sign, J in _remove(I):
            for e, c in g.partial(i + 1).terms.items():
                _acc(out, (e, J), sign * c)
    return PolyVector(v.nvars, out)


def wedge_vectors(a: PolyVector, b: PolyVector) -> PolyVector:
    out: dict = {}
    for I, g in a.components().items():
        for J, h in b.components().items():
            if set(I) & set(J):
                continue
            sign = _perm_sign(I + J)
            K = tuple(sorted(I + J))
            for e, c in (g * h).terms.items():
                _acc(out, (e, K), sign * c)
    return PolyVector(a.nvars, out)


def volume_transport(v: PolyVector) -> PolyForm:
    """d_I -> (-1)^(k(k-1)/2) sgn(I, I^c) dx_{I^c}, contraction into the volume form."""
    n = v.nvars
    out: dict = {}
    for I, g in v.components().items():
        Ic = tuple(i for i in range(n) if i not in I)
        k = len(I)
        sign = _perm_sign(I + Ic) * (-1 if (k * (k - 1) // 2) % 2 else 1)
        for e, c in g.terms.items():
            _acc(out, (e, Ic), sign * c)
    return PolyForm(n, out)


def bv_polarization(a: PolyVector, b: PolyVector) -> PolyVector:
    """Phi2(a, b) = delta(ab) - delta(a) b - (-1)^{|a|} a delta(b) for homogeneous a."""
    (ka,) = a.degrees() or {0}
    ab = wedge_vectors(a, b)
    out = bv_delta(ab) - wedge_vectors(bv_delta(a), b)
    tail = wedge_vectors(a, bv_delta(b))
    return out - tail if ka % 2 == 0 else out + tail


# windowed cohomology ---------------------------------------------------------------

def _form_keys(nvars: int, k: int, cap: int) -> list[tuple[Exps, Index]]:
    if cap < 0:
        return []
    return [(e, I) for I in itertools.combinations(range(nvars), k) for e in monomials_up_to(nvars, cap)]


def _window_dims(f: Poly, flavor: str, cap: int) -> list[int]:
    """Classes with a representative of coefficient degree <= cap, modulo
    boundaries of forms of degree <= 2 cap.  The twisted differential is not
    homogeneous, so the naive truncated subcomplex overcounts."""
    n = f.nvars
    pad = cap

    def diff(w: PolyForm) -> PolyForm:
        return wedge_df(w, f) if flavor == "koszul" else twisted_dr_d(w, f)

    index: list[dict] = [dict() for _ in range(n + 1)]

    def column(k: int, key) -> dict:
        out = {}
        for t, c in diff(PolyForm(n, {key: 1})).terms.items():
            out[index[k + 1].setdefault(t, len(index[k + 1]))] = c
        return out

    dims = []
    for k in range(n + 1):
        small = _form_keys(n, k, cap)
        for key in small:
            index[k].setdefault(key, len(index[k]))
        if k < n:
            d_small = [column(k, key) for key in small]
            _, ker = rank_and_kernel(SparseMat.from_columns(len(index[k + 1]), d_small))
        else:
            ker = [[1 if i == j else 0 for i in range(len(small))] for j in range(len(small))]
        cycles = [{index[k][small[i]]: v for i, v in enumerate(vec) if v} for vec in ker]
        bounds = [column(k - 1, key) for key in _form_keys(n, k - 1, cap + pad)] if k > 0 else []
        rows = len(index[k])
        rb = rank(SparseMat.from_columns(rows, bounds)) if bounds else 0
        rbz = rank(SparseMat.from_columns(rows, bounds + cycles)) if bounds or cycles else 0
        dims.append(rbz - rb)
    return dims


@dataclass(frozen=True)
class CohomologyTable:
    flavor: str
    dims: tuple[int, ...]
    stable: tuple[bool, ...]
    degree_cap: int


def twisted_cohomology_dims(f: Poly, flavor: str = "twisted_dr", degree_cap: int = 8) -> CohomologyTable:
    """Cohomology of (forms, df^) or (forms, d + df^) in a degree window.

    A class is counted when it has a cocycle representative of coefficient
    degree <= cap that is not a boundary of any form of degree <= 2 cap.
    A dimension is stable when it is unchanged at cap + 2.
    """
    if flavor not in ("koszul", "twisted_dr"):
        raise ValueError(f"unknown flavor {flavor!r}")
    d0 = _window_dims(f, flavor, degree_cap)
    d1 = _window_dims(f, flavor, degree_cap + 2)
    return CohomologyTable(flavor, tuple(d0), tuple(a == b for a, b in zip(d0, d1)), degree_cap)


def _jacobian_quotient_dim(f: Poly, D: int) -> int:
    """dim P_{<=D} / (I cap P_{<=D}) with I the Jacobian ideal.

    Ideal elements of degree <= D can need multipliers of higher degree whose
    top parts cancel, so multipliers run to degree 2D and the intersection is
    rank(S) - rank(S restricted to the monomials above D)."""
    n = f.nvars
    partials = [f.partial(i) for i in range(1, n + 1)]
    partials = [g for g in partials if not g.is_zero()]
    if not partials:
        return len(monomials_up_to(n, D))
    top = 2 * D + max(g.degree() for g in partials)
    monos = monomials_up_to(n, top)
    index = {e: i for i, e in enumerate(monos)}
    high = {index[e] for e in monos if sum(e) > D}
    cols, high_cols = [], []
    for g in partials:
        for e in monomials_up_to(n, 2 * D):
            col = {index[t]: c for t, c in (Poly.monomial(e) * g).terms.items()}
            cols.append(col)
            high_cols.append({i: c for i, c in col.items() if i in high})
    in_low = rank(SparseMat.from_columns(len(monos), cols)) - rank(SparseMat.from_columns(len(monos), high_cols))
    return len(monomials_up_to(n, D)) - in_low


def jacobian_ring_dim(f: Poly, degree_cap: int = 10) -> int | str:
    """dim Q[x]/(df/dx_1, ..., df/dx_n), or "not isolated" if it keeps growing."""
    dims = [_jacobian_quotient_dim(f, D) for D in (degree_cap - 2, degree_cap - 1, degree_cap)]
    if dims[0] == dims[1] == dims[2]:
        return dims[2]
    return "not isolated"
