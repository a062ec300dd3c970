"""Covariant tensors with exact components.

Indexing is dense (every index tuple in ``range(n)**k`` is valid) but only
non-zero components are stored.  Indices are 0-based internally; reports use
the 1-based labels of the chart order.
"""
from __future__ import annotations

import itertools
from collections import defaultdict

from .symkernel import DiffExpr, KernelError

__all__ = ["Tensor", "SymmetryError", "NONE", "SYMMETRIC2", "RIEMANN_LIKE",
           "GENERALIZED_CURVATURE", "accumulate"]

NONE = "none"
SYMMETRIC2 = "symmetric2"
RIEMANN_LIKE = "riemannLike"
GENERALIZED_CURVATURE = "generalizedCurvature"
_CLASSES = (NONE, SYMMETRIC2, RIEMANN_LIKE, GENERALIZED_CURVATURE)


class SymmetryError(KernelError):
    """A tensor does not have the symmetries it was declared with."""


def accumulate(field, terms):
    """Sum a mapping ``index -> list of DiffExpr`` and drop zero results."""
    out = {}
    for idx, values in terms.items():
        total = field.zero
        for v in values:
            total = total + v
        if not total.is_zero():
            out[idx] = total
    return out


class Tensor:
    """A (0,k) tensor on an n-dimensional chart."""

    __slots__ = ("field", "rank", "dim", "comps", "symmetry", "name")

    def __init__(self, field, rank, dim, comps=None, symmetry=NONE, name="", check=True):
        if symmetry not in _CLASSES:
            raise ValueError(f"unknown symmetry class {symmetry!r}")
        self.field = field
        self.rank = rank
        self.dim = dim
        self.symmetry = symmetry
        self.name = name
        clean = {}
        for idx, v in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != rank or any(not 0 <= i < dim for i in idx):
                raise IndexError(f"index {idx} out of range for rank {rank}, dimension {dim}")
            if not isinstance(v, DiffExpr):
                v = field(v)
            if not v.is_zero():
                clean[idx] = v
        self.comps = clean
        if check:
            self.check_symmetry()

    # -- access ----------------------------------------------------------
    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        return self.comps.get(tuple(idx), self.field.zero)

    def items(self):
        return sorted(self.comps.items())

    def nonzero(self):
        return sorted(self.comps)

    def is_zero(self):
        return not self.comps

    def __len__(self):
        return len(self.comps)

    def __repr__(self):
        label = self.name or "Tensor"
        return f"<{label} rank={self.rank} dim={self.dim} nonzero={len(self.comps)}>"

    # -- algebra ---------------------------------------------------------
    def _same_shape(self, other):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if (self.rank, self.dim) != (other.rank, other.dim):
            raise ValueError(f"shape mismatch: rank {self.rank}/dim {self.dim} vs "
                             f"rank {other.rank}/dim {other.dim}")
        if self.field != other.field:
            raise KernelError("tensors live in different fields")

    def _combine_symmetry(self, other):
        return self.symmetry if self.symmetry == other.symmetry else NONE

    def __add__(self, other):
        self._same_shape(other)
        comps = dict(self.comps)
        for idx, v in other.comps.items():
            comps[idx] = comps[idx] + v if idx in comps else v
        return Tensor(self.field, self.rank, self.dim, comps,
                      self._combine_symmetry(other), check=False)

    def __neg__(self):
        return Tensor(self.field, self.rank, self.dim,
                      {i: -v for i, v in self.comps.items()}, self.symmetry, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c) if not isinstance(c, DiffExpr) else c
        if c.is_zero():
            return Tensor(self.field, self.rank, self.dim, {}, self.symmetry, check=False)
        return Tensor(self.field, self.rank, self.dim,
                      {i: c * v for i, v in self.comps.items()}, self.symmetry, check=False)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.rank, self.dim) == (other.rank, other.dim) and self.comps == other.comps

    __hash__ = None

    def map(self, fn):
        """Apply ``fn`` componentwise (e.g. substitution); result may change field."""
        comps = {i: fn(v) for i, v in self.comps.items()}
        field = next(iter(comps.values())).field if comps else self.field
        return Tensor(field, self.rank, self.dim, comps, self.symmetry, self.name, check=False)

    def permuted(self, perm):
        """Tensor T' with T'[i_0..i_{k-1}] = T[i_perm[0] .. i_perm[k-1]]."""
        inv = [0] * self.rank
        for pos, p in enumerate(perm):
            inv[p] = pos
        comps = {}
        for idx, v in self.comps.items():
            comps[tuple(idx[inv[a]] for a in range(self.rank))] = v
        return Tensor(self.field, self.rank, self.dim, comps, NONE, check=False)

    def all_indices(self):
        return itertools.product(range(self.dim), repeat=self.rank)

    # -- symmetry checks -------------------------------------------------
    def symmetry_violations(self):
        """List of human-readable violations of the declared symmetry class."""
        bad = []
        z = self.field.zero
        get = self.comps.get
        if self.symmetry == SYMMETRIC2:
            for (i, j), v in self.comps.items():
                if get((j, i), z) != v:
                    bad.append(f"[{i},{j}] != [{j},{i}]")
        elif self.symmetry in (RIEMANN_LIKE, GENERALIZED_CURVATURE):
            for (h, i, j, k), v in self.comps.items():
                if get((i, h, j, k), z) != -v:
                    bad.append(f"antisymmetry in first pair at {(h, i, j, k)}")
                if get((h, i, k, j), z) != -v:
                    bad.append(f"antisymmetry in second pair at {(h, i, j, k)}")
                if get((j, k, h, i), z) != v:
                    bad.append(f"pair interchange at {(h, i, j, k)}")
            if self.symmetry == RIEMANN_LIKE:
                for (h, i, j, k), v in self.comps.items():
                    if (v + get((h, j, k, i), z) + get((h, k, i, j), z)).is_zero():
                        continue
                    bad.append(f"first Bianchi at {(h, i, j, k)}")
        return bad

    def check_symmetry(self):
        bad = self.symmetry_violations()
        if bad:
            raise SymmetryError(f"{self.name or 'tensor'} violates {self.symmetry}: "
                                + "; ".join(bad[:5]))


def terms_dict():
    return defaultdict(list)
