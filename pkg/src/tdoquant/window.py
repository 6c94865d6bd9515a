from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class TruncationWindow:
    """Finite caps under which complexes are enumerated.

    ``order_cap`` bounds the *total* derivation order of a basis element (sum
    over all tensor slots and the coefficient), which every differential in
    the package preserves, so order-capped pieces are direct summands.
    """

    nvars: int = 1
    order_cap: int = 2
    arity_cap: int = 3
    degree_cap: int = 3
    bernstein_weight: int | None = None
    bar_length_cap: int = 2

    def __post_init__(self):
        for name in ("nvars", "order_cap", "arity_cap", "degree_cap", "bar_length_cap"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.nvars == 0:
            raise ValueError("nvars must be positive")

    def bumped(self, order: int = 1, arity: int = 1, length: int = 0) -> TruncationWindow:
        return replace(self, order_cap=self.order_cap + order, arity_cap=self.arity_cap + arity,
                       bar_length_cap=self.bar_length_cap + length)

    def with_weight(self, w: int | None) -> TruncationWindow:
        return replace(self, bernstein_weight=w)
