"""Memoised lookup of curvature actions and Tachibana tensors by label.

Labels are ``"X.Z"`` for the action of X on Z and ``"Q(A,Z)"`` for the
Tachibana tensor, with X in R, C, P, W, K, A in g, S and Z in g, G, R, S,
C, P, W, K.
"""
from __future__ import annotations

import re
import threading

from .operators import action, tachibana

__all__ = ["Catalog", "parse_label"]

_ACTION = re.compile(r"^([RCPWKG])\s*[.·]\s*([gGRSCPWK])$")
_TACHIBANA = re.compile(r"^Q\(\s*([gS])\s*,\s*([gGRSCPWK])\s*\)$")


def parse_label(label):
    """Return ``("action", X, Z)`` or ``("Q", A, Z)``."""
    label = label.strip()
    m = _ACTION.match(label)
    if m:
        return ("action",) + m.groups()
    m = _TACHIBANA.match(label)
    if m:
        return ("Q",) + m.groups()
    raise KeyError(f"unrecognised tensor label {label!r}")


class Catalog:
    def __init__(self, bundle):
        self.bundle = bundle
        self._memo = {}
        self._lock = threading.RLock()

    def __getitem__(self, label):
        key = parse_label(label)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        kind, a, z = key
        b = self.bundle
        if kind == "action":
            value = action(b.tensor(a), b.tensor(z), b.metric.inverse_diagonal)
            value.name = f"{a}.{z}"
        else:
            value = tachibana(b.tensor(a), b.tensor(z))
            value.name = f"Q({a},{z})"
        with self._lock:
            return self._memo.setdefault(key, value)
