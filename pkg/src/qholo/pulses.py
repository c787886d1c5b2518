"""Control loops in parameter space: envelopes, sampling, loop integrals.

Time is in microseconds, angles in radians.  A Gaussian envelope is
``A * exp(-(t - t0)**2 / w)`` (``w`` multiplies the square directly, the way
the pulse shapes are usually quoted).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import integrate, optimize

CLOSURE_TOL = 1e-9
DEFAULT_STEPS = 4000
KINDS = ("gaussian", "constant", "piecewise-linear")


class PathNotClosedError(ValueError):
    def __init__(self, residuals: Mapping[str, float]):
        self.residuals = dict(residuals)
        parts = ", ".join(f"{k}: {v:.3e}" for k, v in self.residuals.items())
        super().__init__(f"control path is not closed (closure residual per channel: {parts})")


@dataclass(frozen=True)
class Envelope:
    kind: str
    amplitude: float
    center: float = 0.0
    width: float = 1.0
    points: tuple = ()  # (t, value) knots for piecewise-linear, scaled by amplitude

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "gaussian" and not self.width > 0:
            raise ValueError("gaussian width must be positive")
        if not np.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.kind == "piecewise-linear":
            pts = tuple((float(t), float(v)) for t, v in self.points)
            if len(pts) < 2 or any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
                raise ValueError("piecewise-linear envelope needs >= 2 knots with increasing times")
            object.__setattr__(self, "points", pts)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            return self.amplitude * np.exp(-(t - self.center) ** 2 / self.width)
        if self.kind == "constant":
            return np.full_like(t, self.amplitude, dtype=float)
        tk, vk = np.array(self.points).T
        return self.amplitude * np.interp(t, tk, vk)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            return self.value(t) * (-2.0 * (t - self.center) / self.width)
        if self.kind == "constant":
            return np.zeros_like(t, dtype=float)
        tk, vk = np.array(self.points).T
        slopes = np.diff(vk) / np.diff(tk)
        seg = np.clip(np.searchsorted(tk, t, side="right") - 1, 0, len(slopes) - 1)
        inside = (t >= tk[0]) & (t <= tk[-1])
        return np.where(inside, self.amplitude * slopes[seg], 0.0)

    def scaled(self, factor: float) -> "Envelope":
        return Envelope(self.kind, self.amplitude * factor, self.center, self.width, self.points)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "amplitude": self.amplitude}
        if self.kind == "gaussian":
            d.update(center=self.center, width=self.width)
        if self.kind == "piecewise-linear":
            d["points"] = [list(p) for p in self.points]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Envelope":
        return cls(d["kind"], float(d["amplitude"]), float(d.get("center", 0.0)),
                   float(d.get("width", 1.0)), tuple(tuple(p) for p in d.get("points", ())))


def gaussian(amplitude: float, center: float, width: float) -> Envelope:
    return Envelope("gaussian", amplitude, center, width)


def constant(amplitude: float) -> Envelope:
    return Envelope("constant", amplitude)


@dataclass(frozen=True)
class ControlPath:
    """Named channels (each a sum of envelopes) on ``[t_start, t_end]``.

    Channels listed in ``angles`` are azimuths: they close modulo 2 pi.
    """

    channels: Mapping[str, tuple]
    t_start: float
    t_end: float
    angles: tuple = ()

    def __post_init__(self):
        chans = {}
        for name, envs in dict(self.channels).items():
            if isinstance(envs, Envelope):
                envs = (envs,)
            chans[name] = tuple(envs)
        object.__setattr__(self, "channels", chans)
        object.__setattr__(self, "angles", tuple(self.angles))
        unknown = set(self.angles) - set(chans)
        if unknown:
            raise ValueError(f"angle channels {sorted(unknown)} are not defined")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")

    def value(self, name: str, t):
        envs = self._channel(name)
        return sum((e.value(t) for e in envs), np.zeros_like(np.asarray(t, dtype=float)))

    def derivative(self, name: str, t):
        envs = self._channel(name)
        return sum((e.derivative(t) for e in envs), np.zeros_like(np.asarray(t, dtype=float)))

    def _channel(self, name):
        try:
            return self.channels[name]
        except KeyError:
            raise KeyError(f"control path has no channel {name!r} (has {sorted(self.channels)})") from None

    def closure_residuals(self) -> dict:
        out = {}
        for name in self.channels:
            d = float(self.value(name, self.t_end) - self.value(name, self.t_start))
            if name in self.angles:
                d -= 2 * np.pi * round(d / (2 * np.pi))
            out[name] = abs(d)
        return out

    def is_closed(self, tol: float = CLOSURE_TOL) -> bool:
        return all(r < tol for r in self.closure_residuals().values())

    def require_closed(self, tol: float = CLOSURE_TOL):
        res = self.closure_residuals()
        if any(r >= tol for r in res.values()):
            raise PathNotClosedError(res)

    def reversed(self) -> "ControlPath":
        """Same loop traversed backwards: t -> t_start + t_end - t."""
        s = self.t_start + self.t_end
        chans = {}
        for name, envs in self.channels.items():
            new = []
            for e in envs:
                if e.kind == "gaussian":
                    new.append(Envelope("gaussian", e.amplitude, s - e.center, e.width))
                elif e.kind == "piecewise-linear":
                    pts = tuple((s - t, v) for t, v in reversed(e.points))
                    new.append(Envelope("piecewise-linear", e.amplitude, points=pts))
                else:
                    new.append(e)
            chans[name] = tuple(new)
        return ControlPath(chans, self.t_start, self.t_end, self.angles)

    def with_channel(self, name: str, envs) -> "ControlPath":
        chans = dict(self.channels)
        chans[name] = (envs,) if isinstance(envs, Envelope) else tuple(envs)
        return ControlPath(chans, self.t_start, self.t_end, self.angles)

    def to_dict(self) -> dict:
        return {"t_start": self.t_start, "t_end": self.t_end, "angles": list(self.angles),
                "channels": {k: [e.to_dict() for e in v] for k, v in self.channels.items()}}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ControlPath":
        chans = {}
        for k, v in d["channels"].items():
            if isinstance(v, Mapping):
                v = [v]
            chans[k] = tuple(Envelope.from_dict(e) for e in v)
        return cls(chans, float(d["t_start"]), float(d["t_end"]), tuple(d.get("angles", ())))


@dataclass(frozen=True)
class SampledPath:
    times: np.ndarray
    values: dict
    derivatives: dict

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def sample(path: ControlPath, n_steps: int = DEFAULT_STEPS) -> SampledPath:
    """Uniform grid with both endpoints; derivatives are analytic."""
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    path.require_closed()
    t = np.linspace(path.t_start, path.t_end, n_steps + 1)
    vals = {k: path.value(k, t) for k in path.channels}
    ders = {k: path.derivative(k, t) for k in path.channels}
    return SampledPath(t, vals, ders)


def _line_integral(path: ControlPath, weight, theta: str, phi: str, n_steps: int) -> float:
    sp = sample(path, n_steps)
    for ch in (theta, phi):
        if ch not in sp.values:
            raise KeyError(f"control path has no channel {ch!r}")
    f = weight(sp.values[theta]) * sp.derivatives[phi]
    return float(integrate.trapezoid(f, sp.times))


def loop_area_sin2(path: ControlPath, n_steps: int = DEFAULT_STEPS,
                   theta: str = "theta", phi: str = "phi") -> float:
    """Closed-loop integral of sin^2(theta) dphi."""
    return _line_integral(path, lambda th: np.sin(th) ** 2, theta, phi, n_steps)


def loop_area_cos(path: ControlPath, n_steps: int = DEFAULT_STEPS,
                  theta: str = "theta", phi: str = "phi") -> float:
    """Closed-loop integral of cos(theta) dphi."""
    return _line_integral(path, np.cos, theta, phi, n_steps)


def scale_channel(path: ControlPath, channel: str, factor: float, index: int | None = None) -> ControlPath:
    """Scale every envelope of a channel, or only ``index`` when given."""
    envs = path.channels[channel]
    new = tuple(e.scaled(factor) if index is None or i == index else e for i, e in enumerate(envs))
    return path.with_channel(channel, new)


def calibrate_amplitude(path: ControlPath, channel: str, target: float, integral,
                        bracket: Sequence[float], index: int | None = None,
                        xtol: float = 1e-9) -> tuple[ControlPath, float]:
    """Bisect a scale factor on ``channel`` so that ``integral(path) == target``.

    ``bracket`` holds two scale factors whose integrals straddle the target.
    Returns the calibrated path and the factor found.
    """
    def resid(s):
        return integral(scale_channel(path, channel, s, index)) - target

    lo, hi = bracket
    if resid(lo) * resid(hi) > 0:
        raise ValueError(f"target {target} not bracketed by scale factors {tuple(bracket)}")
    s = optimize.bisect(resid, lo, hi, xtol=xtol, maxiter=200)
    return scale_channel(path, channel, s, index), float(s)
