"""Pseudosymmetry-type conditions: detection, coefficient solving, classification."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field as dc_field

from .catalog import Catalog
from .operators import kulkarni_nomizu
from .symkernel import DiffExpr, KernelError
from .tensor import NONE, Tensor, accumulate

__all__ = [
    "HOLDS", "FAILS", "DEGENERATE", "ConditionReport", "solve_proportionality",
    "solve_linear_relation", "solve_linear_combination", "solve_roter",
    "solve_weyl_pair", "RicciClassification", "classify_ricci", "negative_suite",
    "matrix_rank",
]

HOLDS = "holds"
FAILS = "fails"
DEGENERATE = "degenerate"


@dataclass
class ConditionReport:
    conditionId: str
    verdict: str
    coefficients: dict = dc_field(default_factory=dict)
    residual: Tensor | None = None
    notes: list = dc_field(default_factory=list)
    expected: str | None = None
    method: str = "exact"

    @property
    def residual_zero(self):
        return self.residual is None or self.residual.is_zero()

    @property
    def matches_claim(self):
        return self.expected is None or self.verdict == self.expected

    def __repr__(self):
        return (f"ConditionReport({self.conditionId!r}, {self.verdict}, "
                f"coefficients={sorted(self.coefficients)})")


def _shape_check(X, Y):
    if (X.rank, X.dim) != (Y.rank, Y.dim):
        raise ValueError(f"shape mismatch: rank {X.rank}/dim {X.dim} vs rank {Y.rank}/dim {Y.dim}")


def solve_proportionality(X, Y, condition_id="", pivot_order=None, coefficient="L"):
    """Decide ``X = L * Y`` for a scalar function ``L``.

    The pivot is the first component of ``Y`` (lexicographic, or in
    ``pivot_order`` if given) that is nonzero.
    """
    _shape_check(X, Y)
    if Y.is_zero():
        verdict = HOLDS if X.is_zero() else FAILS
        note = "right-hand side vanishes; L unconstrained" if X.is_zero() else \
            "right-hand side vanishes identically but the left-hand side does not"
        return ConditionReport(condition_id, verdict, {}, X, [note])
    order = pivot_order if pivot_order is not None else sorted(Y.comps)
    pivot = next(c for c in order if c in Y.comps)
    L = X[pivot] / Y[pivot]
    residual = X - Y.scale(L)
    verdict = HOLDS if residual.is_zero() else FAILS
    return ConditionReport(condition_id, verdict, {coefficient: L}, residual,
                           [f"pivot {tuple(i + 1 for i in pivot)}"])


def _combine(terms, field):
    acc = None
    for coef, T in terms:
        x = T.scale(coef)
        acc = x if acc is None else acc + x
    return acc


def solve_linear_relation(terms, condition_id="", unknown_name="L"):
    """Verify ``sum c_i T_i = 0``; a single ``None`` coefficient is solved for.

    ``terms`` is a list of ``(name, coefficient or None, Tensor)``.
    """
    if len(terms) < 2:
        raise ValueError("a linear relation needs at least two terms")
    first = terms[0][2]
    for _, _, T in terms[1:]:
        _shape_check(first, T)
    unknown = [i for i, (_, c, _) in enumerate(terms) if c is None]
    if len(unknown) > 1:
        raise ValueError("solve mode supports exactly one unknown coefficient")
    field = first.field
    if not unknown:
        coeffs = [(field.convert(c) if isinstance(c, DiffExpr) else field(c), T) for _, c, T in terms]
        residual = _combine(coeffs, field)
        verdict = HOLDS if residual.is_zero() else FAILS
        return ConditionReport(condition_id, verdict, {}, residual)
    k = unknown[0]
    known = [(-(field.convert(c) if isinstance(c, DiffExpr) else field(c)), T)
             for i, (_, c, T) in enumerate(terms) if i != k]
    rep = solve_proportionality(_combine(known, field), terms[k][2], condition_id,
                                coefficient=unknown_name)
    rep.notes.append(f"solved coefficient of {terms[k][0]}")
    return rep


def _rank_rows(rows, field):
    """Exact rank of a list of DiffExpr rows by fraction-free-free Gaussian elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    pivots = []
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if not rows[r][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for r in range(rank + 1, len(rows)):
            if rows[r][c].is_zero():
                continue
            f = rows[r][c] / p
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(c)
        rank += 1
    return rank, pivots


def matrix_rank(M, field):
    if not M:
        return 0
    return _rank_rows(M, field)[0]


def _solve_square(A, b):
    """Solve ``A x = b`` over the field by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if not M[r][c].is_zero())
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def solve_linear_combination(target, basis, condition_id=""):
    """Find scalars ``a_i`` with ``target = sum a_i B_i`` and verify them.

    ``basis`` is a list of ``(name, Tensor)``.  Component equations are taken
    in lexicographic index order, keeping each one that raises the rank, until
    an invertible square subsystem is found.
    """
    for _, B in basis:
        _shape_check(target, B)
    field = target.field
    k = len(basis)
    index = set(target.comps)
    for _, B in basis:
        index |= set(B.comps)
    chosen_rows, chosen_rhs, chosen_idx = [], [], []
    for idx in sorted(index):
        row = [B[idx] for _, B in basis]
        if all(v.is_zero() for v in row):
            continue
        if matrix_rank(chosen_rows + [row], field) > len(chosen_rows):
            chosen_rows.append(row)
            chosen_rhs.append(target[idx])
            chosen_idx.append(idx)
            if len(chosen_rows) == k:
                break
    if len(chosen_rows) < k:
        return ConditionReport(condition_id, DEGENERATE, {}, None,
                               ["no invertible subsystem: the basis tensors are linearly dependent"])
    sol = _solve_square(chosen_rows, chosen_rhs)
    coeffs = {name: a for (name, _), a in zip(basis, sol)}
    residual = target
    for (name, B), a in zip(basis, sol):
        residual = residual - B.scale(a)
    verdict = HOLDS if residual.is_zero() else FAILS
    notes = ["equations at " + ", ".join(str(tuple(i + 1 for i in idx)) for idx in chosen_idx)]
    return ConditionReport(condition_id, verdict, coeffs, residual, notes)


def solve_roter(bundle, condition_id="roter"):
    """``R = phi/2 S^S + mu g^S + eta G``."""
    S = bundle.ricci()
    basis = [("phi", kulkarni_nomizu(S, S).scale(bundle.field(1) / 2)),
             ("mu", bundle.g_wedge_S()), ("eta", bundle.G())]
    return solve_linear_combination(bundle.riemann(), basis, condition_id)


def solve_weyl_pair(bundle, condition_id="weyl.pair"):
    """Find ``(alpha, beta)`` with ``Q(S - alpha g, C - beta G) = 0``.

    Since ``Q(g, G) = 0`` the condition is linear:
    ``Q(S, C) = alpha Q(g, C) + beta Q(S, G)``.
    """
    cat = Catalog(bundle)
    rep = solve_linear_combination(cat["Q(S,C)"], [("alpha", cat["Q(g,C)"]),
                                                   ("beta", cat["Q(S,G)"])], condition_id)
    if rep.verdict == HOLDS:
        from .operators import tachibana
        a, b = rep.coefficients["alpha"], rep.coefficients["beta"]
        A = bundle.ricci() - bundle.g().scale(a)
        T = bundle.weyl() - bundle.G().scale(b)
        rep.residual = tachibana(A, T)
        if not rep.residual.is_zero():
            rep.verdict = FAILS
    return rep


# -- Ricci classification --------------------------------------------------

@dataclass
class RicciClassification:
    einstein: bool
    generic_rank: int
    min_rank: int
    alphas: list
    quasi_einstein: bool
    two_quasi_einstein: bool
    codazzi: Tensor
    cyclic: Tensor
    ricci_parallel: bool
    ricci_recurrent: bool
    ricci_semisymmetric: bool
    notes: list = dc_field(default_factory=list)

    @property
    def codazzi_type(self):
        return self.codazzi.is_zero()

    @property
    def cyclic_parallel(self):
        return self.cyclic.is_zero()


def _alpha_candidates(S, g, field):
    """Rational roots in alpha of det(S - alpha g), found by factoring."""
    ext = field.extend(constants=("alpha_",))
    alpha = ext.constant("alpha_")
    n = S.dim
    M = [[ext.convert(S[(i, j)]) - (alpha * ext.convert(g[(i, j)]) if i == j else ext.zero)
          for j in range(n)] for i in range(n)]
    if any(not g[(i, j)].is_zero() for i in range(n) for j in range(n) if i != j):
        raise KernelError("metric must be diagonal")
    det = _det(M, ext)
    if det.is_zero():
        return [], True
    ai = ext._index["k_alpha_"]
    _, factors = det.num.factor()
    roots, irrational = [], False
    for poly, _mult in factors:
        deg = poly.degrees()[ai]
        if deg <= 0:
            continue
        if deg > 1:
            irrational = True
            continue
        # poly = d * alpha + a0 with d free of alpha
        d = poly.derivative(ai)
        a0 = poly - d * ext._gens[ai]
        roots.append(field.convert(-DiffExpr._make(ext, a0, d)))
    uniq = []
    for r in roots:
        if all(r != u for u in uniq):
            uniq.append(r)
    return uniq, irrational


def _det(M, field):
    n = len(M)
    M = [list(r) for r in M]
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if piv is None:
            return field.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        for r in range(c + 1, n):
            if not M[r][c].is_zero():
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def _matrix(T, shift=None, g=None):
    n = T.dim
    return [[T[(i, j)] - (shift * g[(i, j)] if shift is not None else 0) for j in range(n)]
            for i in range(n)]


def _recurrent(nablaT, T):
    """Is ``nabla T = T (x) A`` for some 1-form A (derivative index last)?"""
    if T.is_zero():
        return nablaT.is_zero()
    n = T.dim
    for l in range(n):
        slice_ = Tensor(T.field, T.rank, n,
                        {idx[:-1]: v for idx, v in nablaT.comps.items() if idx[-1] == l},
                        NONE, check=False)
        if solve_proportionality(slice_, T).verdict != HOLDS:
            return False
    return True


def classify_ricci(bundle):
    S = bundle.ricci()
    g = bundle.g()
    f = bundle.field
    n = bundle.n
    einstein = (S - g.scale(bundle.scalar() / n)).is_zero()
    generic = matrix_rank(_matrix(S), f)
    notes = []
    alphas, irrational = ([], False) if einstein else _alpha_candidates(S, g, f)
    if irrational:
        notes.append("det(S - alpha g) has factors of degree > 1 in alpha; "
                     "only rational roots were examined")
    ranks = []
    for a in alphas:
        ranks.append((matrix_rank(_matrix(S, a, g), f), a))
    if einstein:
        min_rank, best = 0, [bundle.scalar() / n]
    elif ranks:
        min_rank = min(r for r, _ in ranks)
        best = [a for r, a in ranks if r == min_rank]
    else:
        min_rank, best = n, []
    nS = bundle.nabla_ricci()
    terms = defaultdict(list)
    cyc = defaultdict(list)
    for (j, k, i), v in nS.comps.items():
        # Codazzi: S_{jk,i} - S_{ik,j}; cyclic: S_{jk,i} + S_{ki,j} + S_{ij,k}
        terms[(i, j, k)].append(v)
        terms[(j, i, k)].append(-v)
        cyc[(i, j, k)].append(v)
        cyc[(j, k, i)].append(v)
        cyc[(k, i, j)].append(v)
    codazzi = Tensor(f, 3, n, accumulate(f, terms), NONE, name="codazzi", check=False)
    cyclic = Tensor(f, 3, n, accumulate(f, cyc), NONE, name="cyclic", check=False)
    R_dot_S = Catalog(bundle)["R.S"]
    return RicciClassification(
        einstein=einstein, generic_rank=generic, min_rank=min_rank, alphas=best,
        quasi_einstein=(not einstein and min_rank == 1),
        two_quasi_einstein=(not einstein and min_rank == 2),
        codazzi=codazzi, cyclic=cyclic, ricci_parallel=nS.is_zero(),
        ricci_recurrent=_recurrent(nS, S), ricci_semisymmetric=R_dot_S.is_zero(),
        notes=notes)


# -- exclusions --------------------------------------------------------------

NEGATIVE_Z = ("R", "C", "W", "K", "P")
OUT_OF_SCOPE = (
    "Chaki pseudo symmetric", "Chaki pseudo Ricci symmetric", "weakly symmetric",
    "weakly Ricci symmetric", "hyper generalized recurrent",
    "weakly generalized recurrent", "quasi generalized recurrent",
)


def negative_suite(bundle, prefix="negative"):
    """Structures the black-hole metrics are claimed not to admit."""
    cat = Catalog(bundle)
    out = []
    R_S = cat["R.S"]
    out.append(ConditionReport(f"{prefix}.ricci-semisymmetric",
                               HOLDS if R_S.is_zero() else FAILS, {}, R_S,
                               ["R.S = 0"], expected=FAILS))
    for X in ("R", "C", "W", "K", "P"):
        for Z in NEGATIVE_Z:
            rep = solve_proportionality(cat[f"{X}.{Z}"], cat[f"Q(S,{Z})"],
                                        f"{prefix}.{X}.{Z}=LQ(S,{Z})")
            rep.expected = FAILS
            out.append(rep)
    for Z in NEGATIVE_Z:
        rep = solve_proportionality(cat[f"P.{Z}"], cat[f"Q(g,{Z})"], f"{prefix}.P.{Z}=LQ(g,{Z})")
        rep.expected = FAILS
        out.append(rep)
    comm = cat["R.C"] - cat["C.R"]
    for k, rhs in enumerate(("Q(g,R)", "Q(g,C)", "Q(S,R)", "Q(S,C)"), 1):
        rep = solve_proportionality(comm, cat[rhs], f"{prefix}.RC-CR=LQ.{k}",
                                    coefficient=f"L{k}")
        rep.notes.append(f"R.C - C.R = L {rhs}")
        rep.expected = FAILS
        out.append(rep)
    cls = classify_ricci(bundle)
    out.append(ConditionReport(f"{prefix}.quasi-einstein", HOLDS if cls.quasi_einstein else FAILS,
                               {}, None, [f"min rank(S - alpha g) = {cls.min_rank}"],
                               expected=FAILS))
    out.append(ConditionReport(f"{prefix}.codazzi", HOLDS if cls.codazzi_type else FAILS,
                               {}, cls.codazzi, ["S_jk,i - S_ik,j = 0"], expected=FAILS))
    out.append(ConditionReport(f"{prefix}.cyclic-parallel",
                               HOLDS if cls.cyclic_parallel else FAILS, {}, cls.cyclic,
                               ["S_jk,i + S_ki,j + S_ij,k = 0"], expected=FAILS))
    nR = bundle.nabla_riemann()
    rec = _recurrent(nR, bundle.riemann())
    out.append(ConditionReport(f"{prefix}.recurrent", HOLDS if rec else FAILS, {}, None,
                               ["nabla R = R (x) A; the simplest member of the recurrent family"],
                               expected=FAILS))
    out.append(ConditionReport(f"{prefix}.ricci-recurrent", HOLDS if cls.ricci_recurrent else FAILS,
                               {}, None, ["nabla S = S (x) A"], expected=FAILS))
    for name in OUT_OF_SCOPE:
        out.append(ConditionReport(f"{prefix}.out-of-scope.{name.replace(' ', '-')}",
                                   "out-of-scope", {}, None,
                                   ["involves arbitrary 1-forms; no detector implemented"]))
    return out


def shuffled_pivots(Y, seed):
    """Nonzero indices of ``Y`` in a random order (for pivot-independence checks)."""
    order = sorted(Y.comps)
    random.Random(seed).shuffle(order)
    return order
