"""Large-n hydrogenic estimate of the Rydberg pair shift."""
from __future__ import annotations

from .. import units


def blockade_shift_hydrogenlike(n1: int, n2: int, R: float) -> tuple[float, float]:
    """Outermost-state z-z shift; returns (rad/us, hartree). ``R`` in bohr."""
    if n1 < 2 or n2 < 2:
        raise ValueError("principal numbers must be >= 2")
    if R == 0:
        raise ValueError("R must be non-zero")
    if R < 0:
        raise ValueError("R must be positive")
    u = -4.5 * n1 * n2 * (n1 - 1) * (n2 - 1) / R ** 3
    return units.hartree_to_rad_per_us(u), u
