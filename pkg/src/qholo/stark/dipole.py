"""Dipole-dipole matrix elements between hydrogen parabolic product states."""
from __future__ import annotations

from functools import lru_cache
from math import sqrt

import numpy as np

from .radial import hydrogen_radial_dipole
from .wigner import _threej2, coefficient_matrix, q_allowed, q_ladder


def angular_factor(l: int, m: int, lp: int, mp: int, k: int) -> float:
    """<l m| C^1_k |l' m'>, C^1_k = sqrt(4 pi / 3) Y_1k."""
    if m != mp + k or abs(l - lp) != 1:
        return 0.0
    return ((-1.0) ** m * sqrt((2 * l + 1) * (2 * lp + 1))
            * _threej2(2 * l, 2, 2 * lp, -2 * m, 2 * k, 2 * mp)
            * _threej2(2 * l, 2, 2 * lp, 0, 0, 0))


@lru_cache(maxsize=None)
def spherical_component(n: int, m: int, k: int, radial: str = "quadrature") -> np.ndarray:
    """<n,m,q| r_k |n,m-k,q'> within one manifold; rows/columns ascending q."""
    mp = m - k
    if abs(k) > 1 or abs(m) > n - 1 or abs(mp) > n - 1:
        raise ValueError("invalid m or spherical component")
    ls = range(abs(m), n)
    lps = range(abs(mp), n)
    t = np.array([[hydrogen_radial_dipole(n, l, lp, radial) * angular_factor(l, m, lp, mp, k)
                   for lp in lps] for l in ls]).reshape(len(ls), len(lps))
    out = coefficient_matrix(n, m) @ t @ coefficient_matrix(n, mp).T
    # r_k moves (n1, n2) by at most one unit: zero beyond |dq| = 1, z is diagonal
    qa, qb = q_ladder(n, m)[:, None], q_ladder(n, mp)[None, :]
    out[np.abs(qa - qb) > (1 if k else 0)] = 0.0
    out.setflags(write=False)
    return out


def single_atom_element(n: int, bra, ket, k: int) -> float:
    (m, q), (mp, qp) = bra, ket
    if m != mp + k or not (q_allowed(n, m, q) and q_allowed(n, mp, qp)):
        return 0.0
    ia = int(np.searchsorted(q_ladder(n, m), q))
    ib = int(np.searchsorted(q_ladder(n, mp), qp))
    return float(spherical_component(n, m, k)[ia, ib])


def dipdip_element(bra, ket, n) -> float:
    """<a|<b| r1.r2 |c>|d> with r1.r2 = z1 z2 - r1_{+1} r2_{-1} - r1_{-1} r2_{+1}.

    ``bra`` = ((m_a, q_a), (m_b, q_b)), ``ket`` likewise; ``n`` is the shared
    principal number or a pair (n1, n2). Units a_B^2; the geometric 1/R^3
    prefactor is left out.
    """
    n1, n2 = (n, n) if np.isscalar(n) else n
    (a, b), (c, d) = bra, ket
    k = a[0] - c[0]
    if abs(k) > 1 or b[0] - d[0] != -k:
        return 0.0
    e1 = single_atom_element(n1, a, c, k)
    if e1 == 0.0:
        return 0.0
    return (-1.0) ** k * e1 * single_atom_element(n2, b, d, -k)


def z_expectation_matrix(n: int, m: int = 0) -> np.ndarray:
    return spherical_component(n, m, 0)


# Table rows: (label, bra, ket) with q written as an offset from n
TABLE1_NS = (5, 10, 15, 20, 25)
TABLE1_ROWS = (
    ("|0,n-1>|0,n-1> -> |1,n-2>|-1,n-2>", ((0, -1), (0, -1)), ((1, -2), (-1, -2))),
    ("|0,n-1>|0,n-1> -> |0,n-1>|0,n-1>", ((0, -1), (0, -1)), ((0, -1), (0, -1))),
    ("|0,n-1>|0,n-1> -> |1,n-4>|-1,n-4>", ((0, -1), (0, -1)), ((1, -4), (-1, -4))),
    ("|0,n-3>|0,n-3> -> |1,n-2>|-1,n-4>", ((0, -3), (0, -3)), ((1, -2), (-1, -4))),
    ("|0,n-3>|0,n-3> -> |1,n-4>|-1,n-2>", ((0, -3), (0, -3)), ((1, -4), (-1, -2))),
    ("|0,n-3>|0,n-3> -> |1,n-4>|-1,n-4>", ((0, -3), (0, -3)), ((1, -4), (-1, -4))),
    ("|0,n-3>|0,n-3> -> |1,n-2>|-1,n-2>", ((0, -3), (0, -3)), ((1, -2), (-1, -2))),
    ("|0,n-3>|0,n-3> -> |0,n-3>|0,n-3>", ((0, -3), (0, -3)), ((0, -3), (0, -3))),
    ("|1,n-2>|1,n-2> -> |2,n-3>|0,n-3>", ((1, -2), (1, -2)), ((2, -3), (0, -3))),
    ("|1,n-2>|1,n-2> -> |1,n-2>|1,n-2>", ((1, -2), (1, -2)), ((1, -2), (1, -2))),
    ("|1,n-4>|1,n-4> -> |2,n-3>|0,n-5>", ((1, -4), (1, -4)), ((2, -3), (0, -5))),
    ("|1,n-4>|1,n-4> -> |2,n-5>|0,n-3>", ((1, -4), (1, -4)), ((2, -5), (0, -3))),
    ("|1,n-4>|1,n-4> -> |2,n-5>|0,n-5>", ((1, -4), (1, -4)), ((2, -5), (0, -5))),
    ("|1,n-4>|1,n-4> -> |2,n-3>|0,n-3>", ((1, -4), (1, -4)), ((2, -3), (0, -3))),
    ("|1,n-4>|1,n-4> -> |1,n-4>|1,n-4>", ((1, -4), (1, -4)), ((1, -4), (1, -4))),
)


def _at(n, pair):
    return tuple((m, n + dq) for m, dq in pair)


def table1(ns=TABLE1_NS):
    """Magnitudes of the listed elements: list of (label, n, value)."""
    out = []
    for label, bra, ket in TABLE1_ROWS:
        for n in ns:
            out.append((label, n, abs(dipdip_element(_at(n, bra), _at(n, ket), n))))
    return out
