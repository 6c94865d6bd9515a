"""Seeded verification suites shared by the command line and the tests.

Every suite returns a list of :class:`CheckRecord`.  A record's ``data`` holds
counts, dimensions and, on failure, a re-runnable witness in text syntax.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .bar import BarChain, BarSetup, TruncationOverflow, bar_d, bar_mul, keys_of, two_sided_build
from .exact import Poly, SparseMat, monomials_up_to, rank, solve
from .koszul import (
    PolyForm,
    PolyVector,
    bv_delta,
    bv_polarization,
    contract_df,
    de_rham_d,
    jacobian_ring_dim,
    twisted_cohomology_dims,
    twisted_dr_d,
    volume_transport,
    wedge_df,
    wedge_vectors,
)
from .polydiff import (
    CoeffKind,
    PolyDiffTensor,
    basis_keys,
    brace,
    brace_sign,
    cup,
    eval_polydiff,
    hochschild_d,
    hochschild_d_eval,
    random_cochain,
)
from .quantize import DiffOD, diff_complex_cohomology, main_theorem_verify, phi, weyl_window_basis
from .weyl import OneForm, WeylOp, format_op, gr_dimension_check, parse_op, random_op, random_poly, torsor_iso
from .window import TruncationWindow

O = CoeffKind.O()
STATUSES = ("pass", "fail", "provisional")


@dataclass
class CheckRecord:
    id: str
    status: str
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(self.status)


def _record(cid: str, ok: bool, **data) -> CheckRecord:
    return CheckRecord(cid, "pass" if ok else "fail", data)


def _standard_twists(nvars: int, twist: OneForm | None) -> list[OneForm]:
    """Zero, the given twist, and a curved (or for n = 1, non-trivial) default."""
    out = [OneForm.zero(nvars)]
    if twist is not None and not twist.is_zero():
        out.append(twist)
    else:
        from .weyl import parse_one_form
        out.append(parse_one_form("x^2*dy" if nvars >= 2 else "x^2*dx", nvars))
    return out


def _random_polyvector(rng: random.Random, nvars: int, k: int, max_deg: int = 3) -> PolyVector:
    comps = {}
    for I in itertools.combinations(range(nvars), k):
        if rng.random() < 0.7:
            comps[I] = random_poly(rng, nvars, max_deg)
    return PolyVector.from_components(nvars, comps)


def _random_form(rng: random.Random, nvars: int, k: int, max_deg: int = 3) -> PolyForm:
    return PolyForm(nvars, _random_polyvector(rng, nvars, k, max_deg).terms)


# Hochschild -------------------------------------------------------------------------

def _coeff_kinds(nvars: int, twist: OneForm | None) -> list[CoeffKind]:
    z = OneForm.zero(nvars)
    kinds = [O, CoeffKind.D(z), CoeffKind.Dop(z)]
    for nu in _standard_twists(nvars, twist)[1:]:
        kinds.insert(2, CoeffKind.D(nu))
    return kinds


def hochschild_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
                     samples: int = 200, eval_samples: int = 100, eval_degree: int = 3) -> list[CheckRecord]:
    """d^2 = 0 on random cochains for every coefficient kind and n <= nvars,
    and the structural differential against the evaluation formula."""
    rng = random.Random(seed)
    records = []
    for n in range(1, window.nvars + 1):
        for ck in _coeff_kinds(n, twist if n == window.nvars else None):
            bad = None
            for _ in range(samples):
                A = random_cochain(rng, n, ck, rng.randint(0, window.arity_cap), window.order_cap, 2)
                if not hochschild_d(hochschild_d(A)).is_zero():
                    bad = A
                    break
            records.append(_record(f"d-squared-zero[n={n},{ck.tag()}]", bad is None, samples=samples,
                                   **({"witness": str(bad)} if bad is not None else {})))
    # evaluation coherence
    for n in range(1, window.nvars + 1):
        monos = [Poly.monomial(e) for e in monomials_up_to(n, eval_degree)]
        bad = None
        tuples = 0
        for _ in range(eval_samples):
            ck = rng.choice(_coeff_kinds(n, None))
            A = random_cochain(rng, n, ck, rng.randint(0, min(window.arity_cap, 2)), window.order_cap, 2)
            dA = hochschild_d(A)
            for args in itertools.product(monos, repeat=A.arity + 1):
                tuples += 1
                if eval_polydiff(dA, args) != hochschild_d_eval(A, args):
                    bad = (A, args)
                    break
            if bad:
                break
        data = {"cochains": eval_samples, "tuples": tuples, "max_degree": eval_degree}
        if bad:
            data["witness"] = f"{bad[0]} on ({', '.join(str(g) for g in bad[1])})"
        records.append(_record(f"structural-equals-evaluation[n={n}]", bad is None, **data))
    return records


# braces and cup -------------------------------------------------------------------------

def _eps_by_layout(positions, arities, i: int) -> int:
    """sum_l i_l (j_l - 1) computed by laying out the output arguments."""
    eps = 0
    placed = 0
    ins = dict(zip(positions, arities))
    for s in range(i):
        if s in ins:
            eps += placed * (ins[s] - 1)
            placed += ins[s]
        else:
            placed += 1
    return -1 if eps % 2 else 1


def _random_closed(rng: random.Random, n: int) -> PolyDiffTensor:
    """A Hochschild cocycle of O: a vector field, a bivector, or a coboundary added to one."""
    kind = rng.randrange(3) if n >= 2 else rng.randrange(2)
    e = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    if kind == 0:
        terms = {((e[i],), tuple(rng.randint(0, 2) for _ in range(n))): Fraction(rng.choice([-2, -1, 1, 2]))
                 for i in range(n)}
        X = PolyDiffTensor(n, 1, O, terms)
    elif kind == 1:
        X = PolyDiffTensor(n, 0, O, {((), (0,) * n): Fraction(rng.randint(1, 3))})
    else:
        f = tuple(rng.randint(0, 2) for _ in range(n))
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        X = PolyDiffTensor(n, 2, O, {((e[0], e[1]), f): c, ((e[1], e[0]), f): -c})
    if rng.random() < 0.5 and X.arity >= 1:
        X = X + hochschild_d(random_cochain(rng, n, O, X.arity - 1, 1, 2))
    return X


def _in_image_of_d(C: PolyDiffTensor) -> list | None:
    """Solve d(Y) = C with Y in the arity-(k-1) cochains of matching weights and orders."""
    if C.is_zero():
        return []
    if C.arity == 0:
        return None
    n = C.nvars
    order_cap = max(C.total_orders())
    keys = []
    for w in sorted(C.weights()):
        keys += basis_keys(C.coeff, n, C.arity - 1, w, order_cap)
    rows: dict = {}
    cols = []
    for k in keys:
        img = hochschild_d(PolyDiffTensor(n, C.arity - 1, C.coeff, {k: 1}))
        cols.append({rows.setdefault(t, len(rows)): c for t, c in img.terms.items()})
    rhs_idx = {t: rows.setdefault(t, len(rows)) for t in C.terms}
    rhs = [Fraction(0)] * len(rows)
    for t, c in C.terms.items():
        rhs[rhs_idx[t]] = c
    return solve(SparseMat.from_columns(len(rows), cols), rhs)


def brace_suite(window: TruncationWindow, seed: int = 0, samples: int = 60) -> list[CheckRecord]:
    rng = random.Random(seed)
    records = []
    # eps bookkeeping against an independent layout count
    bad = None
    count = 0
    for i in range(window.arity_cap + 2):
        for m in range(i + 1):
            for pos in itertools.combinations(range(i), m):
                for ar in itertools.product(range(4), repeat=m):
                    count += 1
                    if brace_sign(pos, ar) != _eps_by_layout(pos, ar, i):
                        bad = (pos, ar)
    records.append(_record("eps-sign", bad is None, cases=count, **({"witness": str(bad)} if bad else {})))

    n = window.nvars
    bad_ar, bad_gv = None, None
    for _ in range(samples):
        A = random_cochain(rng, n, O, rng.randint(2, max(window.arity_cap, 2)), window.order_cap, 2)
        B = random_cochain(rng, n, O, rng.randint(1, 2), window.order_cap, 2)
        C = random_cochain(rng, n, O, rng.randint(0, 2), window.order_cap, 2)
        for args in ([B], [B, C], [C]):
            R = brace(A, args)
            if R.arity != A.arity + sum(X.arity for X in args) - len(args):
                bad_ar = (A, args)
        sB, sC = B.arity - 1, C.arity - 1
        lhs = brace(brace(A, [B]), [C])
        rhs = brace(A, [brace(B, [C])]) + brace(A, [B, C])
        cb = brace(A, [C, B])
        rhs = rhs - cb if (sB * sC) % 2 else rhs + cb
        if lhs != rhs and bad_gv is None:
            bad_gv = (A, B, C)
    records.append(_record("arity-formula", bad_ar is None, samples=samples,
                           **({"witness": f"{bad_ar[0]} {{{', '.join(map(str, bad_ar[1]))}}}"} if bad_ar else {})))
    records.append(_record("gv-brace-relation", bad_gv is None, samples=samples,
                           **({"witness": " ; ".join(map(str, bad_gv))} if bad_gv else {})))

    # homotopy commutativity of cup on cocycles
    bad_h = None
    witnesses = 0
    for _ in range(max(10, samples // 3)):
        A, B = _random_closed(rng, n), _random_closed(rng, n)
        comm = cup(A, B)
        ba = cup(B, A)
        comm = comm - ba if (A.arity * B.arity) % 2 == 0 else comm + ba
        if _in_image_of_d(comm) is None:
            bad_h = (A, B)
            break
        if not comm.is_zero():
            witnesses += 1
    records.append(_record("cup-commutator-exact", bad_h is None, nonzero_commutators=witnesses,
                           **({"witness": f"{bad_h[0]} ; {bad_h[1]}"} if bad_h else {})))
    return records


def cup_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
              samples: int = 60) -> list[CheckRecord]:
    rng = random.Random(seed)
    n = window.nvars
    records = []
    nu = _standard_twists(n, twist)[-1]
    for ck in (O, CoeffKind.D(OneForm.zero(n)), CoeffKind.D(nu), CoeffKind.Dop(OneForm.zero(n)),
               CoeffKind.Dop(nu, outer_op=True)):
        bad_l, bad_a = None, None
        for _ in range(samples):
            A, B, C = (random_cochain(rng, n, ck, rng.randint(0, 2), window.order_cap, 2) for _ in range(3))
            # the (-1)^{ij} twist of concatenation moves the Leibniz sign onto dA
            lhs = hochschild_d(cup(A, B))
            t = cup(hochschild_d(A), B)
            rhs = (t if B.arity % 2 == 0 else -t) + cup(A, hochschild_d(B))
            if lhs != rhs and bad_l is None:
                bad_l = (A, B)
            if cup(cup(A, B), C) != cup(A, cup(B, C)) and bad_a is None:
                bad_a = (A, B, C)
        records.append(_record(f"leibniz[{ck.tag()}]", bad_l is None, samples=samples,
                               **({"witness": " ; ".join(map(str, bad_l))} if bad_l else {})))
        records.append(_record(f"associative[{ck.tag()}]", bad_a is None, samples=samples,
                               **({"witness": " ; ".join(map(str, bad_a))} if bad_a else {})))
    return records


# quantization map phi, twists -------------------------------------------------------------

def _generators(n: int, nu: OneForm) -> list[WeylOp]:
    return ([WeylOp.x(n, i, nu) for i in range(1, n + 1)] + [WeylOp.d(n, i, nu) for i in range(1, n + 1)]
            + [WeylOp.const(n, 1, nu)])


def phi_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
              samples: int = 200) -> list[CheckRecord]:
    rng = random.Random(seed)
    records = []
    dx = parse_op("dx", 1)
    expected = {
        "phi(dx)": (phi(dx), DiffOD.from_pairs(1, [(dx, WeylOp.const(1, 1)), (WeylOp.const(1, 1), dx)])),
        "phi(dx^2)": (phi(dx * dx), DiffOD.from_pairs(1, [(dx * dx, WeylOp.const(1, 1)), (dx, dx * 2),
                                                           (WeylOp.const(1, 1), dx * dx)])),
    }
    for name, (got, want) in expected.items():
        records.append(_record(f"worked-value[{name}]", got == want, value=str(got)))
    order = window.order_cap
    for n in range(1, window.nvars + 1):
        for nu in _standard_twists(n, twist if n == window.nvars else None):
            gens = _generators(n, nu)
            pairs = [(p, q) for p in gens for q in gens]
            n_gen = len(pairs)
            for _ in range(samples):
                pairs.append((random_op(rng, n, order, 2, twist=nu), random_op(rng, n, order, 2, twist=nu)))
            bad = next(((p, q) for p, q in pairs if phi(p * q) != phi(p) * phi(q)), None)
            tag = f"n={n},nu={nu}"
            data = {"generator_pairs": n_gen, "random_pairs": samples, "max_order": order}
            if bad:
                data["witness"] = f"p = {format_op(bad[0])} ; q = {format_op(bad[1])}"
            records.append(_record(f"phi-multiplicative[{tag}]", bad is None, **data))
    return records


def torsor_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
                 samples: int = 50) -> list[CheckRecord]:
    rng = random.Random(seed)
    n = window.nvars
    records = []
    for nu in _standard_twists(n, twist):
        g = random_poly(rng, n, 3)
        T = torsor_iso(nu, g)
        Tinv = T.inverse()
        gens = _generators(n, nu)
        pairs = [(p, q) for p in gens for q in gens]
        pairs += [(random_op(rng, n, window.order_cap, 2, twist=nu), random_op(rng, n, window.order_cap, 2, twist=nu))
                  for _ in range(samples)]
        bad_m = next(((p, q) for p, q in pairs if T(p * q) != T(p) * T(q)), None)
        ops = [p for pq in pairs for p in pq]
        bad_i = next((p for p in ops if Tinv(T(p)) != p), None)
        tag = f"nu={nu},g={g}"
        records.append(_record(f"torsor-multiplicative[{tag}]", bad_m is None, pairs=len(pairs),
                               **({"witness": f"{format_op(bad_m[0])} ; {format_op(bad_m[1])}"} if bad_m else {})))
        records.append(_record(f"torsor-inverse[{tag}]", bad_i is None, elements=len(ops),
                               **({"witness": format_op(bad_i)} if bad_i else {})))
    return records


# bar constructions -------------------------------------------------------------------------

def _rand_key(rng: random.Random, n: int, ck: CoeffKind, arity: int, order: int):
    return next(iter(keys_of(random_cochain(rng, n, ck, arity, order, 2, 1))))


def _rand_word(rng: random.Random, s: BarSetup, max_len: int, order: int) -> BarChain:
    n = s.nvars
    letters = tuple(_rand_key(rng, n, O, rng.randint(0, 2), order) for _ in range(rng.randint(0, max_len)))
    left = _rand_key(rng, n, s.n_kind, rng.randint(0, 2), order) if s.left else None
    right = _rand_key(rng, n, s.m_kind, rng.randint(0, 2), order) if s.right else None
    return BarChain(s, {(left, letters, right): Fraction(rng.choice([-2, -1, 1, 3]))})


def bar_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
              samples: int = 12) -> list[CheckRecord]:
    rng = random.Random(seed)
    n = window.nvars
    nu = twist if twist is not None else OneForm.zero(n)
    records = []
    L = window.bar_length_cap
    for name, left, right in (("plain", False, False), ("left", True, False), ("right", False, True), ("two-sided", True, True)):
        s = BarSetup(n, nu, left, right, 3 * max(L, 1), normalized=False)
        bad_d, bad_l, bad_a = None, None, None
        for _ in range(samples):
            short = 0 if name == "two-sided" else min(L, 2)
            u, v, w = (_rand_word(rng, s, short, 2) for _ in range(3))
            z = _rand_word(rng, s, L, 2)
            if not bar_d(bar_d(z)).is_zero() and bad_d is None:
                bad_d = z
            uv = bar_mul(u, v)
            (deg,) = u.degrees()
            t = bar_mul(u, bar_d(v))
            rhs = bar_mul(bar_d(u), v) + (t if deg % 2 == 0 else -t)
            if bar_d(uv) != rhs and bad_l is None:
                bad_l = (u, v)
            if bar_mul(uv, w) != bar_mul(u, bar_mul(v, w)) and bad_a is None:
                bad_a = (u, v, w)
        records.append(_record(f"bar-d-squared[{name}]", bad_d is None, samples=samples,
                               **({"witness": str(bad_d)} if bad_d else {})))
        records.append(_record(f"product-leibniz[{name}]", bad_l is None, samples=samples,
                               **({"witness": " ; ".join(map(str, bad_l))} if bad_l else {})))
        records.append(_record(f"product-associative[{name}]", bad_a is None, samples=samples,
                               **({"witness": " ; ".join(map(str, bad_a))} if bad_a else {})))
    # products respect the length cap
    s = BarSetup(n, nu, False, False, 1, normalized=False)
    u = BarChain(s, {(None, (_rand_key(rng, n, O, 1, 1),), None): 1})
    try:
        bar_mul(u, u)
        raised = False
    except TruncationOverflow:
        raised = True
    records.append(_record("length-cap-overflow-raises", raised))
    # windowed two-sided complex
    w = window if window.bernstein_weight is not None else window.with_weight(0)
    _, C = two_sided_build(w, nu)
    records.append(_record("window-d-squared", C.d_squared_zero(),
                           dims={k: C.dim(k) for k in C.basis}, cohomology=C.cohomology()))
    return records


def main_theorem_suite(window: TruncationWindow, twist: OneForm | None = None, seed: int = 0,
                       samples: int = 50) -> list[CheckRecord]:
    rep = main_theorem_verify(window, twist, seed=seed, n_random=samples)
    records = [CheckRecord(c.name, "provisional" if c.provisional else "pass" if c.passed else "fail",
                           {"detail": c.detail} if c.detail else {}) for c in rep.checks]
    records.append(CheckRecord("window-dimensions", "pass", {
        "basis": rep.basis_sizes, "cohomology": rep.dims,
        "stable": {k: v for k, v in rep.stable.items()}, "weyl_window": rep.weyl_count,
        "h0": rep.dims.get(0, 0)}))
    return records


# Koszul / BV ---------------------------------------------------------------------------------

def bv_suite(window: TruncationWindow, f: Poly | None = None, seed: int = 0, samples: int = 40) -> list[CheckRecord]:
    rng = random.Random(seed)
    records = []
    bad = {k: None for k in ("twisted-dr-squared", "koszul-bv-squared", "transport-delta", "transport-iota",
                             "biderivation")}
    nonzero_phi = None
    for n in range(1, max(window.nvars, 3) + 1):
        for _ in range(samples):
            g = f if (f is not None and f.nvars == n) else random_poly(rng, n, 3)
            k = rng.randint(0, n)
            w = _random_form(rng, n, k)
            if not twisted_dr_d(twisted_dr_d(w, g), g).is_zero():
                bad["twisted-dr-squared"] = bad["twisted-dr-squared"] or (g, w)
            v = _random_polyvector(rng, n, k)
            tot = lambda x: contract_df(x, g) + bv_delta(x)
            if not tot(tot(v)).is_zero():
                bad["koszul-bv-squared"] = bad["koszul-bv-squared"] or (g, v)
            if volume_transport(bv_delta(v)) != de_rham_d(volume_transport(v)):
                bad["transport-delta"] = bad["transport-delta"] or (g, v)
            if volume_transport(contract_df(v, g)) != wedge_df(volume_transport(v), g):
                bad["transport-iota"] = bad["transport-iota"] or (g, v)
            ka, kb = rng.randint(0, n), rng.randint(0, n)
            a, b = _random_polyvector(rng, n, ka, 2), _random_polyvector(rng, n, kb, 2)
            c = _random_polyvector(rng, n, rng.randint(0, n), 2)
            lhs = bv_polarization(a, wedge_vectors(b, c))
            t1 = wedge_vectors(bv_polarization(a, b), c)
            t2 = wedge_vectors(b, bv_polarization(a, c))
            rhs = t1 + t2 if ((ka + 1) * kb) % 2 == 0 else t1 - t2
            if lhs != rhs:
                bad["biderivation"] = bad["biderivation"] or (a, b, c)
            if nonzero_phi is None and not bv_polarization(a, b).is_zero():
                nonzero_phi = (a, b, bv_polarization(a, b))
    for cid, w in bad.items():
        data = {"samples_per_n": samples, "max_n": max(window.nvars, 3)}
        if cid.startswith("transport"):
            data["sign"] = 1
        if w is not None:
            data["witness"] = " ; ".join(str(x) for x in w)
        records.append(_record(cid, w is None, **data))
    records.append(_record("polarization-nonzero", nonzero_phi is not None,
                           **({"witness": f"Phi2({nonzero_phi[0]}, {nonzero_phi[1]}) = {nonzero_phi[2]}"}
                              if nonzero_phi else {})))
    return records


# cohomology tables ---------------------------------------------------------------------------

def centralizer_dim(nvars: int, order_cap: int, weight: int, twist: OneForm | None = None) -> int:
    """dim of {p in D_nu : [x_i, p] = 0 for all i} in the window, by a direct kernel computation."""
    nu = twist if twist is not None else OneForm.zero(nvars)
    basis = weyl_window_basis(nvars, order_cap, weight)
    rows: dict = {}
    cols = []
    for a, b in basis:
        p = WeylOp.monomial(a, b, 1, nu)
        col = {}
        for i in range(1, nvars + 1):
            x = WeylOp.x(nvars, i, nu)
            for key, c in (x * p - p * x).terms.items():
                col[rows.setdefault((i, key), len(rows))] = c
        cols.append(col)
    return len(basis) - rank(SparseMat.from_columns(max(len(rows), 1), cols))


def diff_complex_suite(window: TruncationWindow, twist: OneForm | None = None,
                       weights: list[int] | None = None) -> list[CheckRecord]:
    n = window.nvars
    nu = twist if twist is not None else OneForm.zero(n)
    if weights is None:
        weights = ([window.bernstein_weight] if window.bernstein_weight is not None
                   else list(range(-2, 3)))
    records = []
    for ck in (CoeffKind.D(nu), CoeffKind.Dop(nu, outer_op=True)):
        for w in weights:
            tab = diff_complex_cohomology(ck, window.with_weight(w))
            h = tab.dims[w]
            stable = tab.stable[w]
            oracle = centralizer_dim(n, window.order_cap, w, nu)
            ok = tab.ok() and (not stable.get(0) or h[0] == oracle)
            status = "pass" if ok else "fail"
            if ok and not all(stable.get(k) for k in range(min(3, window.arity_cap))):
                status = "provisional"
            records.append(CheckRecord(f"diff-complex[{ck.tag()},w={w}]", status, {
                "cohomology": h, "stable": stable, "centralizer": oracle, "monomials": tab.h0_oracle[w]}))
    return records


def _stable_dims(tab) -> dict:
    return {"dims": list(tab.dims), "stable": list(tab.stable), "degree_cap": tab.degree_cap}


def twisted_derham_suite(f: Poly, degree_cap: int = 8) -> list[CheckRecord]:
    tab = twisted_cohomology_dims(f, "twisted_dr", degree_cap)
    n = f.nvars
    mu = jacobian_ring_dim(f, max(degree_cap, 4))
    data = _stable_dims(tab) | {"jacobian_ring_dim": mu}
    lower_ok = all(d == 0 for d, s in zip(tab.dims[:n], tab.stable[:n]) if s)
    if f.is_zero() or f.degree() <= 0:
        ok = tab.dims[0] == 1 and all(d == 0 for d in tab.dims[1:]) and all(tab.stable)
        return [_record("twisted-derham[poincare]", ok, **data)]
    if mu == "not isolated":
        return [CheckRecord("twisted-derham[top-vs-milnor]", "provisional", data)]
    top_ok = tab.stable[n] and tab.dims[n] == mu
    return [_record("twisted-derham[top-vs-milnor]", top_ok, **data),
            _record("twisted-derham[lower-vanish]", lower_ok and all(tab.stable[:n]), **data)]


def koszul_suite(f: Poly, degree_cap: int = 8) -> list[CheckRecord]:
    """Koszul dimensions, compared with twisted de Rham in top degree (reported, not asserted
    unless f is quasi-homogeneous)."""
    tab = twisted_cohomology_dims(f, "koszul", degree_cap)
    tdr = twisted_cohomology_dims(f, "twisted_dr", degree_cap)
    n = f.nvars
    data = _stable_dims(tab) | {"twisted_dr_dims": list(tdr.dims)}
    qh = _quasi_homogeneous(f)
    agree = tab.stable[n] and tdr.stable[n] and tab.dims[n] == tdr.dims[n]
    if qh and not f.is_zero():
        return [_record("koszul[top-matches-twisted-dr]", agree, quasi_homogeneous=True, **data)]
    return [CheckRecord("koszul[top-matches-twisted-dr]", "provisional", data | {"quasi_homogeneous": qh,
                                                                                 "agree": agree})]


def _quasi_homogeneous(f: Poly) -> bool:
    """Whether positive rational weights make every monomial of f the same weighted degree.

    Checked by solving sum_i q_i a_i = 1 over all exponents and requiring q > 0.
    """
    n = f.nvars
    exps = list(f.terms)
    if not exps:
        return False
    cols = [{r: Fraction(e[i]) for r, e in enumerate(exps) if e[i]} for i in range(n)]
    q = solve(SparseMat.from_columns(len(exps), cols), [Fraction(1)] * len(exps))
    return q is not None and all(x > 0 for x in q)


def jacobian_oracle(f: Poly, degree_cap: int = 10) -> list[CheckRecord]:
    mu = jacobian_ring_dim(f, degree_cap)
    return [CheckRecord("jacobian-ring-dim", "pass" if mu != "not isolated" else "provisional",
                        {"dim": mu, "degree_cap": degree_cap})]


def weyl_window_oracle(window: TruncationWindow, twist: OneForm | None = None) -> list[CheckRecord]:
    n = window.nvars
    nu = twist if twist is not None else OneForm.zero(n)
    w = window.bernstein_weight if window.bernstein_weight is not None else 0
    count = len(weyl_window_basis(n, window.order_cap, w))
    gr = gr_dimension_check(nu, window.order_cap, window.degree_cap)
    return [CheckRecord("weyl-window-count", "pass", {"weight": w, "order_cap": window.order_cap, "count": count}),
            _record("associated-graded-is-symmetric", all(r == e for _, r, e in gr),
                    rows=[list(r) for r in gr])]


SUITES: dict[str, Callable] = {
    "hochschild": hochschild_suite,
    "braces": brace_suite,
    "cup": cup_suite,
    "phi": phi_suite,
    "torsor": torsor_suite,
    "bar": bar_suite,
    "main-theorem": main_theorem_suite,
    "bv": bv_suite,
}
