"""Finite cochain complexes assembled from basis keys and a differential."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .exact import SparseMat, rank, rank_and_kernel, solve


class WindowLeak(AssertionError):
    """The differential produced a basis element outside the enumerated window."""


@dataclass
class FiniteComplex:
    """Cochain complex with explicit bases per degree; d: C^k -> C^(k+1)."""

    basis: dict[int, list[Hashable]]
    diffs: dict[int, SparseMat] = field(default_factory=dict)

    @classmethod
    def assemble(cls, basis: Mapping[int, Sequence[Hashable]],
                 image: Callable[[Hashable], Mapping[Hashable, Fraction]]) -> FiniteComplex:
        basis = {k: list(v) for k, v in sorted(basis.items())}
        index = {k: {key: i for i, key in enumerate(v)} for k, v in basis.items()}
        diffs = {}
        for k, keys in basis.items():
            target = index.get(k + 1, {})
            cols = []
            for key in keys:
                col = {}
                for t, c in image(key).items():
                    if t not in target:
                        raise WindowLeak(f"d({key!r}) has a term {t!r} outside degree {k + 1}")
                    col[target[t]] = c
                cols.append(col)
            diffs[k] = SparseMat.from_columns(len(basis.get(k + 1, [])), cols)
        return cls(basis, diffs)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, []))

    def d(self, k: int) -> SparseMat:
        if k in self.diffs:
            return self.diffs[k]
        return SparseMat(self.dim(k + 1), self.dim(k), {})

    def ranks(self) -> dict[int, int]:
        return {k: rank(m) for k, m in self.diffs.items()}

    def cohomology(self) -> dict[int, int]:
        r = self.ranks()
        return {k: self.dim(k) - r.get(k, 0) - r.get(k - 1, 0) for k in self.basis}

    def d_squared_zero(self) -> bool:
        return all(self.d(k + 1).matmul(self.d(k)).is_zero() for k in self.basis)

    def euler(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.basis)

    def vector(self, k: int, element: Mapping[Hashable, Fraction]) -> list[Fraction]:
        index = {key: i for i, key in enumerate(self.basis.get(k, []))}
        v = [Fraction(0)] * len(index)
        for key, c in element.items():
            if key not in index:
                raise WindowLeak(f"{key!r} is not a degree-{k} basis element")
            v[index[key]] += c
        return v

    def is_cycle(self, k: int, v: Sequence[Fraction]) -> bool:
        return not any(self.d(k).matvec(list(v)))

    def is_boundary(self, k: int, v: Sequence[Fraction]) -> bool:
        if not any(v):
            return True
        return solve(self.d(k - 1), list(v)) is not None

    def cocycles(self, k: int) -> list[list[Fraction]]:
        return rank_and_kernel(self.d(k))[1]
