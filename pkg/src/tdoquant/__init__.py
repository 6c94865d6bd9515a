"""Exact computations with twisted differential operators, polydifferential
Hochschild cochains, bar constructions and Koszul/BV complexes on affine space."""

from .bar import BarChain, BarSetup, TruncationOverflow, bar_d, bar_mul, gv_mul, two_sided_build
from .complexes import FiniteComplex, WindowLeak
from .exact import Poly, SparseMat, rank, solve
from .koszul import (
    PolyForm,
    PolyVector,
    bv_delta,
    contract_df,
    jacobian_ring_dim,
    twisted_cohomology_dims,
    twisted_dr_d,
    volume_transport,
    wedge_df,
)
from .parse import ParseError, parse_poly
from .polydiff import CoeffKind, PolyDiffTensor, brace, brace_module, concat, cup, hochschild_d
from .quantize import DiffOD, chi, diff_complex_cohomology, main_theorem_verify, phi, psi
from .weyl import OneForm, WeylOp, parse_one_form, parse_op, torsor_iso
from .window import TruncationWindow

__version__ = "0.1.0"
