"""Kulkarni-Nomizu products, Tachibana tensors and curvature actions.

For a (0,k) tensor T:

* ``Q(A,T)_{i1..ik u v} = sum_a A_{i_a u} T_{..v..} - A_{i_a v} T_{..u..}``
  (``v`` resp. ``u`` in slot ``a``);
* ``(D.T)_{i1..ik u v} = -sum_a g^{pq} T_{..p..} D_{u v i_a q}``, which is
  the derivation action of the endomorphism ``D(X,Y)`` defined through
  ``D(X1,X2,X3,X4) = g(D(X1,X2)X3, X4)``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .tensor import GENERALIZED_CURVATURE, NONE, Tensor, accumulate

__all__ = [
    "ACTORS", "ACTED", "kulkarni_nomizu", "tachibana", "action", "ActionResult",
    "TachibanaResult", "identity_suite", "IdentityCheck",
]

ACTORS = ("R", "C", "P", "W", "K")
ACTED = ("R", "S", "C", "P", "W", "K")


def _check_symmetric2(T, what):
    if T.rank != 2:
        raise ValueError(f"{what} must be a (0,2) tensor, got rank {T.rank}")
    for (i, j), v in T.comps.items():
        if T[(j, i)] != v:
            raise ValueError(f"{what} must be symmetric")


def kulkarni_nomizu(A, B):
    """``(A ^ B)_{hijk} = A_hk B_ij + A_ij B_hk - A_hj B_ik - A_ik B_hj``."""
    _check_symmetric2(A, "A")
    _check_symmetric2(B, "B")
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    terms = defaultdict(list)
    for (a1, a2), va in A.comps.items():
        for (b1, b2), vb in B.comps.items():
            p = va * vb
            terms[(a1, b1, b2, a2)].append(p)
            terms[(b1, a1, a2, b2)].append(p)
            terms[(a1, b1, a2, b2)].append(-p)
            terms[(b1, a1, b2, a2)].append(-p)
    name = f"{A.name or 'A'}^{B.name or 'B'}"
    return Tensor(A.field, 4, A.dim, accumulate(A.field, terms), GENERALIZED_CURVATURE, name=name)


@dataclass
class TachibanaResult:
    A: str
    T: str
    tensor: Tensor


@dataclass
class ActionResult:
    D: str
    T: str
    tensor: Tensor


def tachibana(A, T):
    """Tachibana tensor ``Q(A, T)`` as a rank k+2 tensor."""
    _check_symmetric2(A, "A")
    if T.rank < 1:
        raise ValueError("Q(A,T) needs rank(T) >= 1")
    a_rows = defaultdict(list)  # i -> [(u, A_iu)]
    for (i, u), v in A.comps.items():
        a_rows[i].append((u, v))
    terms = defaultdict(list)
    for J, tv in T.comps.items():
        for a, x in enumerate(J):
            # x occupies slot a: as v (positive part) and as u (negative part)
            for i, row in a_rows.items():
                for y, av in row:
                    p = av * tv
                    base = J[:a] + (i,) + J[a + 1:]
                    terms[base + (y, x)].append(p)
                    terms[base + (x, y)].append(-p)
    name = f"Q({A.name or 'A'},{T.name or 'T'})"
    return Tensor(T.field, T.rank + 2, T.dim, accumulate(T.field, terms), NONE, name=name)


def action(D, T, ginv):
    """``D . T`` for a (0,4) tensor ``D`` and inverse metric diagonal ``ginv``."""
    if D.rank != 4:
        raise ValueError("the acting tensor must have rank 4")
    by_last = defaultdict(list)  # q -> [(u, v, i, D_uviq)]
    for (u, v, i, q), dv in D.comps.items():
        by_last[q].append((u, v, i, dv))
    terms = defaultdict(list)
    for J, tv in T.comps.items():
        for a, q in enumerate(J):
            entries = by_last.get(q)
            if not entries:
                continue
            w = -(ginv[q] * tv)
            for u, v, i, dv in entries:
                terms[J[:a] + (i,) + J[a + 1:] + (u, v)].append(w * dv)
    name = f"{D.name or 'D'}.{T.name or 'T'}"
    return Tensor(T.field, T.rank + 2, T.dim, accumulate(T.field, terms), NONE, name=name)


@dataclass
class IdentityCheck:
    id: str
    holds: bool
    residual: Tensor


def identity_suite(bundle):
    """Universal relations between curvature actions, as exact tensor identities."""
    from .catalog import Catalog
    cat = Catalog(bundle)
    n = bundle.n
    corr = bundle.scalar() / ((n - 1) * (n - 2))
    checks = [
        ("R.K=R.C", cat["R.K"] - cat["R.C"]),
        ("R.W=R.R", cat["R.W"] - cat["R.R"]),
        ("C.R=C.W", cat["C.R"] - cat["C.W"]),
        ("C.C=C.K", cat["C.C"] - cat["C.K"]),
        ("W.R=W.W", cat["W.R"] - cat["W.W"]),
        ("W.C=W.K", cat["W.C"] - cat["W.K"]),
        ("K.R=K.W", cat["K.R"] - cat["K.W"]),
        ("K.C=K.K", cat["K.C"] - cat["K.K"]),
        ("K.S=C.S-r/((n-1)(n-2))Q(g,S)", cat["K.S"] - cat["C.S"] + cat["Q(g,S)"].scale(corr)),
        ("K.R=C.R-r/((n-1)(n-2))Q(g,R)", cat["K.R"] - cat["C.R"] + cat["Q(g,R)"].scale(corr)),
        ("K.K=C.C-r/((n-1)(n-2))Q(g,C)", cat["K.K"] - cat["C.C"] + cat["Q(g,C)"].scale(corr)),
        ("Q(g,G)=0", cat["Q(g,G)"]),
        ("Q(g,R)=Q(g,W)", cat["Q(g,R)"] - cat["Q(g,W)"]),
        ("Q(g,C)=Q(g,K)", cat["Q(g,C)"] - cat["Q(g,K)"]),
    ]
    return [IdentityCheck(name, res.is_zero(), res) for name, res in checks]
