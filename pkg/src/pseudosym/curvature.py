"""Curvature pipeline for diagonal metrics.

Conventions (components 0-based here, 1-based in reports):

* ``Gamma[h, j, k]`` is the Christoffel symbol of the second kind with the
  upper index first.
* ``R_hijk = -g_hl (d_k G^l_ij - d_j G^l_ik + G^m_ij G^l_mk - G^m_ik G^l_mj)``.
  The overall sign is the one that reproduces the published component
  tables of the black-hole metrics; equivalently ``R(X1,X2,X3,X4) =
  g(R(X1,X2)X4, X3)`` with ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``.
  A round sphere then has ``R = -G`` and negative ``r``.
* ``S_ij = g^hk R_hijk``, ``r = g^ij S_ij``.
* ``(nabla T)_{i1..ik, l}`` puts the derivative index last.
"""
from __future__ import annotations

import threading
from collections import defaultdict

from .symkernel import KernelError
from .tensor import NONE, RIEMANN_LIKE, SYMMETRIC2, Tensor, accumulate

__all__ = ["DimensionError", "CurvatureBundle", "TENSOR_NAMES", "CONVENTION"]

CONVENTION = ("R(X1,X2,X3,X4) = g(R(X1,X2)X4,X3), R(X,Y) = [nabla_X,nabla_Y] - nabla_[X,Y]; "
              "S_ij = g^hk R_hijk; G = (g^g)/2; (D.T) derivation action; indices 1-based")

TENSOR_NAMES = ("g", "G", "R", "S", "C", "P", "W", "K")


class DimensionError(KernelError, ValueError):
    """A tensor is undefined in the chart's dimension."""


class CurvatureBundle:
    """Lazily computed, memoised curvature data of one metric."""

    def __init__(self, metric):
        self.metric = metric
        self.field = metric.field
        self.n = metric.n
        self._memo = {}
        self._lock = threading.RLock()

    def _cached(self, key, compute):
        with self._lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]

    # -- basic objects ---------------------------------------------------
    def g(self):
        return self._cached("g", self.metric.tensor)

    def christoffel(self):
        return self._cached("Gamma", self._christoffel)

    def _christoffel(self):
        m = self.metric
        coords = m.coordinates
        n = self.n
        dg = {}
        for i in range(n):
            for c in range(n):
                d = m.diagonal[i].diff(coords[c])
                if not d.is_zero():
                    dg[(i, c)] = d
        zero = self.field.zero
        comps = {}
        for h in range(n):
            half_inv = m.inverse_diagonal[h] / 2
            for j in range(n):
                for k in range(j, n):
                    # 1/2 g^hh (d_j g_hk + d_k g_hj - d_h g_jk), diagonal g
                    acc = zero
                    if h == k:
                        acc = acc + dg.get((h, j), zero)
                    if h == j:
                        acc = acc + dg.get((h, k), zero)
                    if j == k:
                        acc = acc - dg.get((j, h), zero)
                    if not acc.is_zero():
                        v = half_inv * acc
                        comps[(h, j, k)] = v
                        comps[(h, k, j)] = v
        return Tensor(self.field, 3, n, comps, NONE, name="Gamma")

    def riemann(self):
        return self._cached("R", self._riemann)

    def _riemann(self):
        gam = self.christoffel()
        coords = self.metric.coordinates
        n = self.n
        dgam = {}

        def d(l, i, j, k):
            key = (l, i, j, k)
            if key not in dgam:
                dgam[key] = gam[(l, i, j)].diff(coords[k])
            return dgam[key]

        comps = {}
        for l in range(n):
            gl = self.metric.diagonal[l]
            for i in range(n):
                for j in range(n):
                    for k in range(j + 1, n):
                        acc = d(l, i, j, k) - d(l, i, k, j)
                        for m in range(n):
                            a = gam[(m, i, j)]
                            if not a.is_zero():
                                b = gam[(l, m, k)]
                                if not b.is_zero():
                                    acc = acc + a * b
                            a = gam[(m, i, k)]
                            if not a.is_zero():
                                b = gam[(l, m, j)]
                                if not b.is_zero():
                                    acc = acc - a * b
                        if acc.is_zero():
                            continue
                        v = -(gl * acc)
                        comps[(l, i, j, k)] = v
                        comps[(l, i, k, j)] = -v
        return Tensor(self.field, 4, n, comps, RIEMANN_LIKE, name="R")

    def ricci(self):
        return self._cached("S", self._ricci)

    def _ricci(self):
        R = self.riemann()
        ginv = self.metric.inverse_diagonal
        terms = defaultdict(list)
        for (h, i, j, k), v in R.comps.items():
            if h == k:
                terms[(i, j)].append(ginv[h] * v)
        return Tensor(self.field, 2, self.n, accumulate(self.field, terms), SYMMETRIC2, name="S")

    def scalar(self):
        def compute():
            S = self.ricci()
            ginv = self.metric.inverse_diagonal
            total = self.field.zero
            for i in range(self.n):
                total = total + ginv[i] * S[(i, i)]
            return total
        return self._cached("r", compute)

    # -- derived tensors ---------------------------------------------------
    def G(self):
        from .operators import kulkarni_nomizu

        def compute():
            g = self.g()
            G = kulkarni_nomizu(g, g).scale(self.field(1) / 2)
            G.name = "G"
            G.symmetry = RIEMANN_LIKE
            return G
        return self._cached("G", compute)

    def g_wedge_S(self):
        from .operators import kulkarni_nomizu
        return self._cached("gS", lambda: kulkarni_nomizu(self.g(), self.ricci()))

    def weyl(self):
        if self.n < 4:
            raise DimensionError(f"the Weyl tensor is defined here for n >= 4 (n = {self.n})")

        def compute():
            n = self.n
            f = self.field
            C = (self.riemann() - self.g_wedge_S().scale(f(1) / (n - 2))
                 + self.G().scale(self.scalar() / ((n - 1) * (n - 2))))
            C.name, C.symmetry = "C", RIEMANN_LIKE
            C.check_symmetry()
            return C
        return self._cached("C", compute)

    def concircular(self):
        if self.n < 2:
            raise DimensionError("the concircular tensor needs n >= 2")

        def compute():
            n = self.n
            W = self.riemann() - self.G().scale(self.scalar() / (n * (n - 1)))
            W.name, W.symmetry = "W", RIEMANN_LIKE
            return W
        return self._cached("W", compute)

    def conharmonic(self):
        if self.n < 4:
            raise DimensionError(f"the conharmonic tensor is defined here for n >= 4 (n = {self.n})")

        def compute():
            K = self.riemann() - self.g_wedge_S().scale(self.field(1) / (self.n - 2))
            K.name, K.symmetry = "K", RIEMANN_LIKE
            return K
        return self._cached("K", compute)

    def projective(self):
        if self.n < 3:
            raise DimensionError(f"the projective tensor needs n >= 3 (n = {self.n})")

        def compute():
            n = self.n
            S = self.ricci()
            g = self.metric.diagonal
            c = self.field(1) / (n - 1)
            terms = defaultdict(list)
            for idx, v in self.riemann().comps.items():
                terms[idx].append(v)
            # P = R - (g(X1,X4) S(X2,X3) - g(X2,X4) S(X1,X3)) / (n-1)
            for (i, j), s in S.comps.items():
                for h in range(n):
                    terms[(h, i, j, h)].append(-c * g[h] * s)
                    terms[(i, h, j, h)].append(c * g[h] * s)
            return Tensor(self.field, 4, n, accumulate(self.field, terms), NONE, name="P")
        return self._cached("P", compute)

    def tensor(self, name):
        """Look up one of g, G, R, S, C, P, W, K by name."""
        table = {
            "g": self.g, "G": self.G, "R": self.riemann, "S": self.ricci,
            "C": self.weyl, "P": self.projective, "W": self.concircular,
            "K": self.conharmonic,
        }
        if name not in table:
            raise KeyError(f"unknown tensor {name!r}; expected one of {', '.join(TENSOR_NAMES)}")
        return table[name]()

    # -- covariant derivatives ----------------------------------------------
    def covariant_derivative(self, T):
        """``(nabla T)_{I, l} = d_l T_I - sum_a Gamma^m_{l i_a} T_{I[a -> m]}``."""
        gam = self.christoffel()
        coords = self.metric.coordinates
        by_upper = defaultdict(list)
        for (m, l, i), v in gam.comps.items():
            by_upper[m].append((l, i, v))
        terms = defaultdict(list)
        for J, v in T.comps.items():
            for l, c in enumerate(coords):
                d = v.diff(c)
                if not d.is_zero():
                    terms[J + (l,)].append(d)
            for a, m in enumerate(J):
                for l, i, gv in by_upper[m]:
                    idx = J[:a] + (i,) + J[a + 1:] + (l,)
                    terms[idx].append(-(gv * v))
        name = f"nabla{T.name}" if T.name else "nablaT"
        return Tensor(self.field, T.rank + 1, self.n, accumulate(self.field, terms), NONE, name=name)

    def nabla_riemann(self):
        return self._cached("nablaR", lambda: self.covariant_derivative(self.riemann()))

    def nabla_ricci(self):
        return self._cached("nablaS", lambda: self.covariant_derivative(self.ricci()))

