"""Products on bar chains: which setups carry a Leibniz, associative product.

    python3 scripts/bar_products.py [--vars 1] [--samples 30]

Plain and one-sided chains get a product from the brace structure; on the
two-sided complex only words with no middle letters multiply, and degree-zero
cohomology is multiplied through the augmentation instead.
"""

import argparse
import random

from tdoquant import TruncationWindow, main_theorem_verify
from tdoquant.bar import BarSetup, bar_mul, word
from tdoquant.polydiff import CoeffKind, random_cochain
from tdoquant.suites import bar_suite
from tdoquant.weyl import OneForm


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=1)
    ap.add_argument("--samples", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    n = args.vars

    win = TruncationWindow(nvars=n, order_cap=1, arity_cap=2, degree_cap=3, bar_length_cap=2)
    print("random products (bar length <= 2 for one-sided, 0 for two-sided):")
    for rec in bar_suite(win, seed=args.seed, samples=args.samples):
        print(f"  {rec.status:<5} {rec.id}")

    rng = random.Random(args.seed)
    s = BarSetup(n, left=True, right=True, length_cap=4, normalized=False)
    zero = OneForm.zero(n)
    ends = (random_cochain(rng, n, CoeffKind.Dop(zero, outer_op=True), 1, 1, 1, 1),
            random_cochain(rng, n, CoeffKind.D(zero), 1, 1, 1, 1))
    letter = random_cochain(rng, n, CoeffKind.O(), 1, 1, 1, 1)
    u = word(s, ends[0], [letter], ends[1])
    try:
        bar_mul(u, u)
        print("two-sided product on a length-1 word: defined")
    except ValueError as exc:
        print(f"two-sided product on a length-1 word: refused ({exc})")

    rep = main_theorem_verify(TruncationWindow(nvars=n, order_cap=1, arity_cap=2, degree_cap=3,
                                               bernstein_weight=0, bar_length_cap=2), seed=args.seed)
    for c in rep.checks:
        if c.name in ("chi-multiplicative-H0", "augmentation-kills-boundaries", "augmentation-injective-on-H0"):
            print(f"  {'pass' if c.passed else 'fail':<5} {c.name}  {c.detail}")


if __name__ == "__main__":
    main()
