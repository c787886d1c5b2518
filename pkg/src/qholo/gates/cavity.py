"""Classical cavity-mode amplitude under a slowly varying detuned drive."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class AdiabaticDriveWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DriveAmplitude:
    times: np.ndarray
    exact: np.ndarray
    approx: np.ndarray

    def relative_error(self) -> float:
        scale = np.max(np.abs(self.exact))
        if scale == 0:
            return 0.0
        return float(np.max(np.abs(self.exact - self.approx)) / scale)


def cavity_drive_amplitude(envelope, delta: float, kappa: float, t_end: float,
                           n_steps: int = 20_000, timescale: float | None = None) -> DriveAmplitude:
    """alpha(t) = int_0^t eps(tau) exp[(-i delta - kappa/2)(t - tau)] dtau.

    ``envelope`` is any object with ``value(t)`` (e.g. an Envelope) or a
    callable.  The exact branch integrates the linear ODE with an
    exponential integrator that is exact for piecewise-linear input; the
    approximate branch is the quasi-static expression.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if timescale is not None and abs(delta) * timescale < 10:
        warnings.warn(f"delta*T = {abs(delta) * timescale:.3g} < 10; quasi-static approximation is poor",
                      AdiabaticDriveWarning, stacklevel=2)
    f = envelope.value if hasattr(envelope, "value") else envelope
    t = np.linspace(0.0, t_end, n_steps + 1)
    eps = np.asarray(f(t), dtype=complex)
    lam = -1j * delta - kappa / 2
    h = t[1] - t[0]
    z = lam * h
    e = np.exp(z)
    if abs(z) < 1e-6:
        # series for the ramp weights when lam*h is tiny
        w0 = h * (0.5 + z / 6)
        w1 = h * (0.5 + z / 3)
    else:
        w0 = h * (e - 1 - z) / z ** 2  # weight of eps at the new point
        w1 = h * (e * (z - 1) + 1) / z ** 2  # weight of eps at the old point
    alpha = np.zeros_like(eps)
    for k in range(n_steps):
        alpha[k + 1] = e * alpha[k] + w1 * eps[k] + w0 * eps[k + 1]
    approx = (eps - np.exp(lam * t) * eps[0]) / (1j * delta + kappa / 2)
    return DriveAmplitude(t, alpha, approx)
