"""Calibrated control paths used by the figure scenarios.

Amplitudes marked ``*_SCALE`` came out of ``calibrate_amplitude`` on the
uncalibrated shapes below; ``recalibrate_*`` reruns that root-find.
"""
from __future__ import annotations

import numpy as np

from ..pulses import ControlPath, calibrate_amplitude, constant, gaussian, loop_area_cos, loop_area_sin2

FIG4_WINDOW = (-1.0, 3.6)
FIG4_THETA_SCALE = 1.079893216603125     # sin^2 loop area = pi/8
FIG8_WINDOW = (-0.7, 2.9)
FIG8_THETA_SCALE = 0.9434938184370425    # cos loop area = pi/4
PUMP_WINDOW = (-1.5, 6.5)
CPHASE_WINDOW = (-1.6, 5.45)


def fig4_shape(window=FIG4_WINDOW) -> ControlPath:
    return ControlPath({"theta": gaussian(1.0, 1.0, 0.15), "phi": gaussian(1.0, 1.5917, 0.15)}, *window)


def fig4_path(scale: float = FIG4_THETA_SCALE, window=FIG4_WINDOW) -> ControlPath:
    return ControlPath({"theta": gaussian(scale, 1.0, 0.15), "phi": gaussian(1.0, 1.5917, 0.15)}, *window)


def recalibrate_fig4(target: float = np.pi / 8):
    return calibrate_amplitude(fig4_shape(), "theta", target, loop_area_sin2, (1.0, 1.5), xtol=1e-13)


def fig8_shape() -> ControlPath:
    return fig8_path(1.0)


def fig8_path(scale: float = FIG8_THETA_SCALE) -> ControlPath:
    phi = (constant(np.pi / 2), gaussian(np.pi, 0.9, 0.1))
    return ControlPath({"theta": gaussian(scale, 1.3, 0.1), "phi": phi}, *FIG8_WINDOW)


def recalibrate_fig8(target: float = np.pi / 4):
    return calibrate_amplitude(fig8_shape(), "theta", target, loop_area_cos, (0.2, 1.5), xtol=1e-13)


def pump_path(N: int = 1000, peak: float = 30.0) -> ControlPath:
    """Counter-intuitive order: p2 (m-r) before p1 (g-m, collective sqrt(N) taken out)."""
    return ControlPath({"p1": gaussian(peak / np.sqrt(N), 3.0, 0.5), "p2": gaussian(peak, 2.0, 0.5)},
                       *PUMP_WINDOW)


def cphase_path() -> ControlPath:
    return ControlPath({"theta": gaussian(np.pi / 4, 1.7, 0.5), "phi2": gaussian(np.pi / 4, 2.115, 0.5)},
                       *CPHASE_WINDOW)
