"""Experiment configuration: JSON schema, validation and loading."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .classical import InitialData
from .errors import ConfigParseError, SchemaError
from .hamiltonian import POTENTIAL_KINDS, PhysicalParams, PotentialSpec
from .minimality import Tolerances
from .tcs_state import GridSpec

EXPERIMENTS = ("trajectory", "riccati", "minimality", "moments", "oracle_compare")

_positive = {"type": "number", "exclusiveMinimum": 0}
_real = {"type": "number"}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["experiment", "potential", "x0", "p0", "b_re", "b_im", "t_final", "dt"],
    "additionalProperties": False,
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "potential": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": list(POTENTIAL_KINDS)},
                "omega": _positive,
                "lambda": _real,
                "coeffs": {"type": "array", "items": _real, "minItems": 1},
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "harmonic"}}}, "then": {"required": ["omega"]}},
                {"if": {"properties": {"kind": {"const": "quartic"}}}, "then": {"required": ["omega", "lambda"]}},
                {"if": {"properties": {"kind": {"const": "polynomial"}}}, "then": {"required": ["coeffs"]}},
            ],
        },
        "mass": _positive,
        "hbar": _positive,
        "x0": _real,
        "p0": _real,
        "b_re": _real,
        "b_im": _positive,
        "t_final": _positive,
        "dt": _positive,
        "grid": {
            "type": "object",
            "required": ["x_min", "x_max", "n"],
            "additionalProperties": False,
            "properties": {"x_min": _real, "x_max": _real, "n": {"type": "integer", "minimum": 16}},
        },
        "output_dir": {"type": "string", "minLength": 1},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"tol_b": _positive, "tol_V": _positive, "tol_q1": _positive},
        },
        "snapshot_times": {"type": "array", "items": {"type": "number", "minimum": 0}},
    },
}

_INVARIANT_NOTES = {
    "$.b_im": " (Im b > 0 is required for a normalizable state)",
    "$.mass": " (mass > 0)",
    "$.hbar": " (hbar > 0)",
}


def _format_error(err: jsonschema.ValidationError) -> str:
    path = err.json_path
    if err.validator == "exclusiveMinimum":
        return f"{path}: must be > {err.validator_value}, got {err.instance!r}{_INVARIANT_NOTES.get(path, '')}"
    if err.validator == "enum":
        allowed = ", ".join(str(v) for v in err.validator_value)
        return f"{path}: {err.instance!r} is not allowed; expected one of: {allowed}"
    return f"{path}: {err.message}"


def diagnostics(raw) -> list[str]:
    """Every schema and cross-field violation in ``raw``, with JSON-path locators."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errs = sorted(validator.iter_errors(raw), key=lambda e: (e.json_path, e.message))
    out = [_format_error(e) for e in errs]
    if not isinstance(raw, dict):
        return out
    dt, tf = raw.get("dt"), raw.get("t_final")
    if _is_num(dt) and _is_num(tf) and dt >= tf:
        out.append(f"$.dt, $.t_final: dt ({dt!r}) must be smaller than t_final ({tf!r})")
    grid = raw.get("grid")
    if isinstance(grid, dict):
        n = grid.get("n")
        if isinstance(n, int) and not isinstance(n, bool) and n >= 16 and n & (n - 1):
            out.append(f"$.grid.n: must be a power of two, got {n}")
        lo, hi = grid.get("x_min"), grid.get("x_max")
        if _is_num(lo) and _is_num(hi) and hi <= lo:
            out.append(f"$.grid.x_min, $.grid.x_max: x_max ({hi!r}) must exceed x_min ({lo!r})")
    snaps = raw.get("snapshot_times")
    if isinstance(snaps, list) and _is_num(tf):
        for i, t in enumerate(snaps):
            if _is_num(t) and t > tf:
                out.append(f"$.snapshot_times[{i}]: {t!r} exceeds t_final ({tf!r})")
    return out


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    potential: PotentialSpec
    params: PhysicalParams
    init: InitialData
    t_final: float
    dt: float
    grid: GridSpec | None = None
    output_dir: Path | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    snapshot_times: tuple[float, ...] | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        problems = diagnostics(raw)
        if problems:
            raise SchemaError(problems)
        grid = raw.get("grid")
        out = raw.get("output_dir")
        if out is not None and base_dir is not None and not Path(out).is_absolute():
            out = base_dir / out
        snaps = raw.get("snapshot_times")
        return cls(
            experiment=raw["experiment"],
            potential=PotentialSpec.from_dict(raw["potential"]),
            params=PhysicalParams(float(raw.get("mass", 1.0)), float(raw.get("hbar", 1.0))),
            init=InitialData(float(raw["x0"]), float(raw["p0"]), complex(raw["b_re"], raw["b_im"])),
            t_final=float(raw["t_final"]),
            dt=float(raw["dt"]),
            grid=GridSpec(float(grid["x_min"]), float(grid["x_max"]), int(grid["n"])) if grid else None,
            output_dir=Path(out) if out is not None else None,
            tolerances=Tolerances(**raw.get("tolerances", {})),
            snapshot_times=tuple(float(t) for t in snaps) if snaps is not None else None,
            raw=raw,
        )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return ExperimentConfig.from_dict(read_json(path), base_dir=path.parent)
