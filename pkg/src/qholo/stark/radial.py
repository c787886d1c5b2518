"""Same-manifold hydrogen radial dipole integrals <n,l|r|n,l'>."""
from __future__ import annotations

from functools import lru_cache
from math import lgamma

import numpy as np
from scipy.special import eval_genlaguerre, roots_laguerre


def _check(n, l, lp):
    if n < 1 or not (0 <= l < n and 0 <= lp < n):
        raise ValueError(f"l, l' must lie in [0, {n - 1}]")


@lru_cache(maxsize=None)
def _quadrature(n: int, l: int, lp: int) -> float:
    # x = 2r/n turns R_nl R_nl' r^3 into poly(x) e^{-x}; Gauss-Laguerre with
    # n+2 nodes is exact for that degree (2n+1)
    x, w = roots_laguerre(n + 2)
    la = eval_genlaguerre(n - l - 1, 2 * l + 1, x)
    lb = eval_genlaguerre(n - lp - 1, 2 * lp + 1, x)
    # log of N_l N_l' (n/2)^4, with N_l^2 = (2/n)^3 (n-l-1)! / (2n (n+l)!)
    lnorm = 0.5 * (lgamma(n - l) - lgamma(n + l + 1) + lgamma(n - lp) - lgamma(n + lp + 1))
    lnorm += 3 * np.log(2.0 / n) - np.log(2.0 * n) + 4 * np.log(n / 2.0)
    # x^(l+l'+3) overflows for large n, so each node is assembled in log space
    with np.errstate(divide="ignore"):
        logt = (np.log(w) + np.log(np.abs(la)) + np.log(np.abs(lb))
                + (l + lp + 3) * np.log(x) + lnorm)
    return float(np.sum(np.sign(la * lb) * np.exp(logt)))


def radial_dipole_closed(n: int, l: int, lp: int) -> float:
    """-(3/2) n sqrt(n^2 - l_>^2) for |l - l'| = 1, else 0 (standard radial phase)."""
    _check(n, l, lp)
    if abs(l - lp) != 1:
        return 0.0
    lg = max(l, lp)
    return -1.5 * n * np.sqrt(n * n - lg * lg)


def hydrogen_radial_dipole(n: int, l: int, lp: int, method: str = "quadrature") -> float:
    """<n,l|r|n,l'> in Bohr radii, radial functions positive near the origin.

    Zero unless |l - l'| = 1.
    """
    _check(n, l, lp)
    if abs(l - lp) != 1:
        return 0.0
    if method == "closed":
        return radial_dipole_closed(n, l, lp)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    a, b = sorted((l, lp))
    return _quadrature(n, a, b)
