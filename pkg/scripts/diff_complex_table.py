"""Windowed cohomology of the polydifferential complex with coefficients in D_nu,
beside the direct centralizer count and the monomial count it should equal.

    python3 scripts/diff_complex_table.py --vars 2 --twist "x^2*dy"
"""

import argparse

from tdoquant import TruncationWindow
from tdoquant.polydiff import CoeffKind
from tdoquant.quantize import diff_complex_cohomology
from tdoquant.suites import centralizer_dim
from tdoquant.weyl import OneForm, parse_one_form


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=1)
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--arity", type=int, default=3)
    ap.add_argument("--weights", type=int, nargs="+", default=[-2, -1, 0, 1, 2])
    ap.add_argument("--twist", default=None)
    args = ap.parse_args()
    n = args.vars
    nu = parse_one_form(args.twist, n) if args.twist else OneForm.zero(n)
    print(f"coefficients D({nu}), n={n}, order<={args.order}, arity<={args.arity}")
    print(f"{'w':>3} {'monomials':>9} {'centralizer':>11}  H^0..H^{args.arity}")
    for w in args.weights:
        win = TruncationWindow(nvars=n, order_cap=args.order, arity_cap=args.arity, degree_cap=3,
                               bernstein_weight=w)
        tab = diff_complex_cohomology(CoeffKind.D(nu), win)
        h = " ".join(f"{d}{'' if tab.stable[w][k] else '?'}" for k, d in sorted(tab.dims[w].items()))
        print(f"{w:>3} {tab.h0_oracle[w]:>9} {centralizer_dim(n, args.order, w, nu):>11}  {h}")


if __name__ == "__main__":
    main()
