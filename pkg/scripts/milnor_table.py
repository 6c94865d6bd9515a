"""Twisted de Rham and Koszul dimensions against the Jacobian ring dimension.

    python3 scripts/milnor_table.py [--degree-cap 8] [f ...]

'?' marks a dimension that changes when the degree cap grows by two.
"""

import argparse
import time

from tdoquant.koszul import jacobian_ring_dim, twisted_cohomology_dims
from tdoquant.parse import infer_nvars, parse_poly

DEFAULT = ["x^2", "x^3", "x^4", "x^3+y^3", "x*y", "x^2+y^2", "x^4+y^3", "x^5+x*y^2", "x^2*y+y^4",
           "x^3+y^3+z^3", "x^2+y^2+z^2", "0"]


def cells(tab) -> str:
    return " ".join(f"{d}{'' if s else '?'}" for d, s in zip(tab.dims, tab.stable))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("polys", nargs="*", default=DEFAULT)
    ap.add_argument("--degree-cap", type=int, default=8)
    args = ap.parse_args()
    print(f"{'f':<14} {'jacobian':>8}  {'twisted dR':<14} {'koszul':<14} secs")
    for text in args.polys:
        f = parse_poly(text, max(infer_nvars(text), 2 if text == "0" else 1))
        t = time.monotonic()
        mu = jacobian_ring_dim(f, max(args.degree_cap, 4))
        tdr = twisted_cohomology_dims(f, "twisted_dr", args.degree_cap)
        kos = twisted_cohomology_dims(f, "koszul", args.degree_cap) if text != "0" else None
        print(f"{text:<14} {mu!s:>8}  {cells(tdr):<14} {cells(kos) if kos else '-':<14} "
              f"{time.monotonic() - t:.1f}")


if __name__ == "__main__":
    main()
