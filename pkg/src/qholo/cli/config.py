"""Scenario configuration: JSON (or TOML) documents validated against a schema."""
from __future__ import annotations

import copy
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import jsonschema

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class ConfigError(ValueError):
    """Schema or invariant violation; message carries the field path."""


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}
_posint = {"type": "integer", "minimum": 1}
_numlist = {"type": "array", "items": _pos, "minItems": 1}


def _obj(props: dict) -> dict:
    return {"type": "object", "properties": props, "additionalProperties": False}


PARAM_SCHEMAS = {
    "fig4": _obj({"omega": _pos, "N": _posint, "sweep": _numlist, "theta_scale": _pos}),
    "fig7": _obj({"N": _posint, "peak": _pos, "u_mm": _nonneg, "u_rr": _nonneg, "u_ff": _nonneg,
                  "u_rm": _nonneg, "u_fm": _nonneg, "u_fr": _nonneg}),
    "fig8": _obj({"omega": _pos, "N": _posint, "phi2": _num, "theta_scale": _pos}),
    "fig10": _obj({"g1": _pos, "omega1": _pos, "omega2": _pos, "omega3": _pos, "g3": _pos,
                   "N": _posint}),
    "fig11": _obj({"g1": _pos, "omega1": _pos, "omega1_grid": _numlist, "omega2": _pos,
                   "omega3": _pos, "g3": _pos, "n_times": _posint}),
    "fig12": _obj({"kappa": _numlist, "g1": _numlist, "omega1": _pos, "omega2": _pos,
                   "omega3": _pos, "g3": _pos, "n_haar": {"type": "integer", "minimum": 0},
                   "dt_factor": _pos}),
    "fig14": _obj({"n_min": {"type": "integer", "minimum": 2}, "n_max": {"type": "integer", "minimum": 2},
                   "m": {"type": "integer"}, "defects": {"type": "array", "items": _nonneg,
                                                        "minItems": 4, "maxItems": 4},
                   "field_max": _pos, "n_fields": {"type": "integer", "minimum": 2},
                   "field": _nonneg}),
    "dipole-table": _obj({"ns": {"type": "array", "items": {"type": "integer", "minimum": 5},
                                 "minItems": 1}}),
    "calibrate": _obj({"target_fig4": _num, "target_fig8": _num}),
}

SCHEMA = {
    "type": "object",
    "required": ["scenario"],
    "additionalProperties": False,
    "properties": {
        "scenario": {"type": "string"},
        "params": {"type": "object"},
        "integrator": _obj({"dt": {"type": ["number", "null"], "exclusiveMinimum": 0},
                            "n_steps": {"type": ["integer", "null"], "minimum": 1}}),
        "trajectories": _obj({"n_traj": {"type": "integer", "minimum": 0},
                              "seed": {"type": "integer", "minimum": 0}}),
        "output": _obj({"dir": {"type": "string"},
                        "formats": {"type": "array", "items": {"enum": ["csv", "json"]}}}),
    },
}


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict
    dt: float | None = None
    n_steps: int | None = None
    n_traj: int = 15
    seed: int = 0
    out_dir: str = "."
    formats: tuple = ("csv", "json")

    def as_dict(self) -> dict:
        return {"scenario": self.scenario, "params": self.params,
                "integrator": {"dt": self.dt, "n_steps": self.n_steps},
                "trajectories": {"n_traj": self.n_traj, "seed": self.seed},
                "output": {"dir": self.out_dir, "formats": list(self.formats)}}

    def step(self, t_span):
        """Explicit dt, or one derived from n_steps, or None for the adaptive default."""
        if self.n_steps:
            return (t_span[1] - t_span[0]) / self.n_steps
        return self.dt


def _path(err) -> str:
    return ".".join(str(p) for p in err.absolute_path) or "<root>"


def validate_document(doc: dict, known=None) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"{_path(e)}: {e.message}") from None
    name = doc["scenario"]
    names = sorted(PARAM_SCHEMAS if known is None else known)
    if name not in names:
        raise ConfigError(f"scenario: unknown preset {name!r}; valid: {', '.join(names)}")
    try:
        jsonschema.validate(doc.get("params", {}), PARAM_SCHEMAS[name])
    except jsonschema.ValidationError as e:
        sub = ".".join(str(p) for p in e.absolute_path)
        raise ConfigError(f"params{'.' + sub if sub else ''}: {e.message}") from None


def load_document(path) -> dict:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(text)
        return json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"{path}: cannot parse ({e})") from None


def from_document(doc: dict, defaults: dict) -> ScenarioConfig:
    validate_document(doc)
    params = copy.deepcopy(defaults)
    params.update(doc.get("params", {}))
    integ = doc.get("integrator", {})
    traj = doc.get("trajectories", {})
    out = doc.get("output", {})
    cfg = ScenarioConfig(doc["scenario"], params, integ.get("dt"), integ.get("n_steps"),
                         traj.get("n_traj", 15), traj.get("seed", 0), out.get("dir", "."),
                         tuple(out.get("formats", ("csv", "json"))))
    validate_document(cfg.as_dict())
    return cfg
