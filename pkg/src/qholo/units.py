"""Unit conventions and the single conversion table.

Dynamics run in microseconds and rad/us with hbar = 1; every quoted "MHz"
coupling is read as an angular frequency in rad/us.  Atomic units
(hartree, bohr) are used only inside :mod:`qholo.stark`.
"""
import math

# CODATA 2018
HARTREE_HZ = 6.579683920502e15
BOHR_M = 5.29177210903e-11

# 1 hartree as a cyclic frequency (MHz) and as an angular frequency (rad/us)
HARTREE_TO_MHZ = HARTREE_HZ / 1e6
HARTREE_TO_RAD_PER_US = 2 * math.pi * HARTREE_HZ / 1e6


def um_to_bohr(x_um: float) -> float:
    return x_um * 1e-6 / BOHR_M


def bohr_to_um(x_bohr: float) -> float:
    return x_bohr * BOHR_M / 1e-6


def hartree_to_rad_per_us(e_au: float) -> float:
    return e_au * HARTREE_TO_RAD_PER_US


def hartree_to_mhz(e_au: float) -> float:
    return e_au * HARTREE_TO_MHZ
