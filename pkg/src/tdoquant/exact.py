"""Exact scalars, multivariate polynomials over Q, and sparse exact linear algebra.

Scalars are :class:`fractions.Fraction`; every value here is immutable once
built, and canonical, so equality of values is equality of term maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping

Rat = Fraction
Exps = tuple[int, ...]


class ArityError(ValueError):
    """Operands live over different numbers of variables."""


def grlex_key(exps: Exps) -> tuple:
    """Sort key; larger means earlier in canonical (graded-lex) output."""
    return (sum(exps), exps)


def add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(i + j for i, j in zip(a, b))


def sub_exps(a: Exps, b: Exps) -> Exps:
    return tuple(i - j for i, j in zip(a, b))


def leq_exps(a: Exps, b: Exps) -> bool:
    return all(i <= j for i, j in zip(a, b))


def multi_binom(b: Exps, c: Exps) -> int:
    out = 1
    for bi, ci in zip(b, c):
        out *= comb(bi, ci)
    return out


def falling(a: Exps, k: Exps) -> int:
    """Product of falling factorials a_i (a_i - 1) ... (a_i - k_i + 1)."""
    out = 1
    for ai, ki in zip(a, k):
        for t in range(ki):
            out *= ai - t
    return out


def sub_multi_indices(b: Exps) -> Iterator[Exps]:
    """All c with 0 <= c <= b componentwise."""
    if not b:
        yield ()
        return
    for head in range(b[0] + 1):
        for tail in sub_multi_indices(b[1:]):
            yield (head,) + tail


def monomials_of_degree(nvars: int, deg: int) -> Iterator[Exps]:
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    for head in range(deg, -1, -1):
        for tail in monomials_of_degree(nvars - 1, deg - head):
            yield (head,) + tail


def monomials_up_to(nvars: int, deg: int) -> list[Exps]:
    return [e for d in range(deg + 1) for e in monomials_of_degree(nvars, d)]


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


class Poly:
    """Polynomial in ``nvars`` commuting variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, Fraction] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        self.terms = _clean(terms or {})
        for e in self.terms:
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for {nvars} variables")
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        """The coordinate x_i, 1-based."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Exps, c=1) -> Poly:
        return cls(len(exps), {tuple(exps): Fraction(c)})

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(nvars)

    # basic protocol ----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ArityError(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    # arithmetic --------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_mul(self, other)

    def __rmul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> Poly:
        return Poly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def partial(self, i: int) -> Poly:
        return poly_partial(self, i)

    def partial_multi(self, b: Exps) -> Poly:
        """Apply d^b = prod_i (d/dx_i)^{b_i}."""
        out = {}
        for e, c in self.terms.items():
            if leq_exps(b, e):
                out[sub_exps(e, b)] = c * falling(e, b)
        return Poly(self.nvars, out)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a.nvars != b.nvars:
        raise ArityError(f"{a.nvars} vs {b.nvars} variables")
    out: dict[Exps, Fraction] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = add_exps(ea, eb)
            out[e] = out.get(e, 0) + ca * cb
    return Poly(a.nvars, out)


def poly_partial(p: Poly, i: int) -> Poly:
    if not 1 <= i <= p.nvars:
        raise IndexError(f"variable index {i} out of range 1..{p.nvars}")
    k = i - 1
    out = {}
    for e, c in p.terms.items():
        if e[k]:
            f = list(e)
            f[k] -= 1
            out[tuple(f)] = c * e[k]
    return Poly(p.nvars, out)


# text output -------------------------------------------------------------

def var_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i}" for i in range(1, nvars + 1)]


def format_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(exps: Exps, names: list[str]) -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_terms(items: Iterable[tuple[str, Fraction]]) -> str:
    """Join (monomial text, coefficient) pairs into canonical sum syntax."""
    out = ""
    for mono, c in items:
        neg = c < 0
        a = -c if neg else c
        if mono == "":
            body = format_rat(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rat(a)}*{mono}"
        if not out:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out or "0"


def format_poly(p: Poly) -> str:
    names = var_names(p.nvars)
    return format_terms((format_monomial(e, names), c) for e, c in p.sorted_terms())


# sparse exact linear algebra --------------------------------------------

@dataclass(frozen=True)
class SparseMat:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if v != 0:
                clean[(r, c)] = Fraction(v)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: list[list]) -> SparseMat:
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        return cls(nr, nc, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def from_columns(cls, nrows: int, columns: list[Mapping[int, Fraction]]) -> SparseMat:
        return cls(nrows, len(columns),
                   {(r, j): v for j, col in enumerate(columns) for r, v in col.items()})

    def transpose(self) -> SparseMat:
        return SparseMat(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def matvec(self, v: list) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (r, c), x in self.entries.items():
            out[r] += x * v[c]
        return out

    def matmul(self, other: SparseMat) -> SparseMat:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return SparseMat(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows


def _echelon(rows: list[dict[int, Fraction]]) -> tuple[dict[int, dict[int, Fraction]], list[int]]:
    """Reduced row echelon form of sparse rows; returns pivot column -> row."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = dict(row)
        # clear every pivot column; pivot rows vanish on each other's pivots,
        # so one pass suffices
        for p in [c for c in row if c in pivots]:
            f = row.get(p)
            if not f:
                continue
            for c, v in pivots[p].items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        # keep the basis fully reduced
        for prow in pivots.values():
            f = prow.get(lead)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots[lead] = row
    return pivots, sorted(pivots)


def rank(m: SparseMat) -> int:
    pivots, _ = _echelon(m.row_dicts())
    return len(pivots)


def rank_and_kernel(m: SparseMat) -> tuple[int, list[list[Fraction]]]:
    """Rank and a basis of the right kernel {v : m v = 0}, exactly."""
    pivots, pcols = _echelon(m.row_dicts())
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for p, row in pivots.items():
            coeff = row.get(f)
            if coeff:
                v[p] = -coeff
        basis.append(v)
    return len(pcols), basis


def solve(m: SparseMat, rhs: list) -> list[Fraction] | None:
    """One exact solution of m v = rhs, or None if inconsistent."""
    rows = m.row_dicts()
    aug = m.cols
    for r, row in enumerate(rows):
        if rhs[r]:
            row[aug] = Fraction(rhs[r])
    pivots, _ = _echelon(rows)
    if aug in pivots:
        return None
    v = [Fraction(0)] * m.cols
    for p, row in pivots.items():
        v[p] = row.get(aug, Fraction(0))
    return v


class Basis:
    """Index assignment for hashable basis keys, used to assemble matrices."""

    def __init__(self, keys: Iterable = ()):
        self.keys: list = []
        self.index: dict = {}
        for k in keys:
            self.add(k)

    def add(self, key) -> int:
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.keys)
            self.keys.append(key)
        return i

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, key) -> bool:
        return key in self.index

    def vector(self, combo: Mapping) -> dict[int, Fraction]:
        """Sparse column for a key->coefficient map; keys must be present."""
        return {self.index[k]: v for k, v in combo.items() if v}


def matrix_from_images(domain: list, codomain: Basis, image) -> SparseMat:
    """Matrix whose j-th column is image(domain[j]) expressed in codomain."""
    cols = []
    for key in domain:
        img = image(key)
        missing = [k for k in img if k not in codomain]
        if missing:
            raise KeyError(f"image of {key!r} leaves the codomain basis: {missing[0]!r}")
        cols.append(codomain.vector(img))
    return SparseMat.from_columns(len(codomain), cols)
