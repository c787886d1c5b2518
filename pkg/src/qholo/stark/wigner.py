"""Wigner 3j symbols and the spherical <-> parabolic change of basis."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt

import numpy as np


class ForbiddenLabelWarning(UserWarning):
    """A parabolic number outside the allowed ladder was requested."""


def _twice(x) -> int:
    d = 2 * float(x)
    k = int(round(d))
    if abs(d - k) > 1e-9:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return k


@lru_cache(maxsize=None)
def _threej2(a1, a2, a3, b1, b2, b3) -> float:
    # arguments are doubled; the Racah sum is done in exact integer arithmetic
    if b1 + b2 + b3 != 0:
        return 0.0
    for a, b in ((a1, b1), (a2, b2), (a3, b3)):
        if abs(b) > a or (a - b) % 2:
            return 0.0
    if (a1 + a2 + a3) % 2 or a3 < abs(a1 - a2) or a3 > a1 + a2:
        return 0.0
    j1p, j2p, j3p = (a2 + a3 - a1) // 2, (a1 + a3 - a2) // 2, (a1 + a2 - a3) // 2
    J = (a1 + a2 + a3) // 2
    delta = Fraction(factorial(j1p) * factorial(j2p) * factorial(j3p), factorial(J + 1))
    facs = 1
    for a, b in ((a1, b1), (a2, b2), (a3, b3)):
        facs *= factorial((a + b) // 2) * factorial((a - b) // 2)
    t1 = (a3 - a2 + b1) // 2
    t2 = (a3 - a1 - b2) // 2
    t3 = j3p
    t4 = (a1 - b1) // 2
    t5 = (a2 + b2) // 2
    s = Fraction(0)
    for k in range(max(0, -t1, -t2), min(t3, t4, t5) + 1):
        den = (factorial(k) * factorial(t1 + k) * factorial(t2 + k)
               * factorial(t3 - k) * factorial(t4 - k) * factorial(t5 - k))
        s += Fraction(-1 if k % 2 else 1, den)
    if s == 0:
        return 0.0
    sign = 1 if s > 0 else -1
    if ((a1 - a2 - b3) // 2) % 2:
        sign = -sign
    return sign * sqrt(float(delta * facs * s * s))


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol by the Racah formula.

    The factorial sum is accumulated exactly on integers, so the result is
    correctly rounded apart from the final square root. Selection-rule
    violations give exactly 0.0.
    """
    return _threej2(_twice(j1), _twice(j2), _twice(j3), _twice(m1), _twice(m2), _twice(m3))


def q_ladder(n: int, m: int) -> np.ndarray:
    """Allowed parabolic numbers q = n1 - n2, ascending."""
    top = n - 1 - abs(m)
    if top < 0:
        return np.zeros(0, int)
    return np.arange(-top, top + 1, 2)


def q_allowed(n: int, m: int, q: int) -> bool:
    top = n - 1 - abs(m)
    return top >= 0 and abs(q) <= top and (top - q) % 2 == 0


@dataclass(frozen=True)
class ParabolicState:
    n: int
    m: int
    q: int

    def __post_init__(self):
        if self.n < 1 or abs(self.m) > self.n - 1:
            raise ValueError(f"invalid parabolic labels n={self.n}, m={self.m}")
        if not q_allowed(self.n, self.m, self.q):
            raise ValueError(f"q={self.q} not in the ladder for n={self.n}, m={self.m}")


@dataclass(frozen=True)
class SphericalState:
    n: int
    l: int
    m: int

    def __post_init__(self):
        if not (0 <= self.l <= self.n - 1 and abs(self.m) <= self.l):
            raise ValueError(f"invalid spherical labels n={self.n}, l={self.l}, m={self.m}")


def parabolic_coefficient(n: int, l: int, m: int, q: int) -> float:
    """c(n,l,m,q) = <n,l,m|n,m,q>.

    A q outside the ladder returns 0.0 and emits ForbiddenLabelWarning.
    """
    SphericalState(n, l, m)
    if not q_allowed(n, m, q):
        warnings.warn(f"q={q} is not allowed for n={n}, m={m}", ForbiddenLabelWarning, stacklevel=2)
        return 0.0
    return _coef(n, l, m, q)


@lru_cache(maxsize=None)
def _coef(n, l, m, q) -> float:
    ph = (1 - n + m + q) // 2 + l
    w = _threej2(n - 1, n - 1, 2 * l, m + q, m - q, -2 * m)
    return (-1.0) ** ph * sqrt(2 * l + 1) * w


@lru_cache(maxsize=None)
def coefficient_matrix(n: int, m: int, l_max: int | None = None) -> np.ndarray:
    """[C^{nm}]_{ql}: rows ascending q, columns l = |m| .. min(n-1, l_max)."""
    top = n - 1 if l_max is None else min(n - 1, l_max)
    ls = range(abs(m), top + 1)
    c = np.array([[_coef(n, l, m, int(q)) for l in ls] for q in q_ladder(n, m)])
    c = c.reshape(len(q_ladder(n, m)), len(ls))
    c.setflags(write=False)
    return c
