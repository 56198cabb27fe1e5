"""JSON run-configuration schema and ExperimentSpec (de)serialization."""
from __future__ import annotations

import dataclasses
import json

import jsonschema

from .correlator import PRESETS, TERM_SELECTIONS, DetectorSpec, ExperimentSpec, GridSpec, ScanSpec
from .errors import ConfigurationError
from .spectra import BlockMask, EdgeMask, PulseSpec

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

_PULSE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["center_wavelength_nm", "fwhm_bandwidth_nm", "gdd_fs2"],
    "properties": {
        "center_wavelength_nm": _POS,
        "fwhm_bandwidth_nm": _POS,
        "gdd_fs2": _NUM,
        "amplitude": _NUM,
    },
}

_MASK = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["type", "center_nm", "width_nm"],
            "properties": {
                "type": {"const": "block"},
                "center_nm": _POS,
                "width_nm": _POS,
                "transition_nm": {"type": "number", "minimum": 0},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["type", "cutoff_nm", "keep"],
            "properties": {
                "type": {"const": "edge"},
                "cutoff_nm": _POS,
                "keep": {"enum": ["red-side", "blue-side"]},
                "transition_nm": {"type": "number", "minimum": 0},
            },
        },
    ]
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["preset", "chirped", "antichirped", "detector", "scan"],
    "properties": {
        "preset": {"enum": list(PRESETS)},
        "chirped": _PULSE,
        "antichirped": _PULSE,
        "masks_chirped": {"type": "array", "items": _MASK},
        "masks_antichirped": {"type": "array", "items": _MASK},
        "detector": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "center_wavelength_nm", "fwhm_nm"],
            "properties": {
                "mode": {"enum": ["sfg-narrowband", "fundamental-power"]},
                "center_wavelength_nm": _POS,
                "fwhm_nm": _POS,
                "shape": {"enum": ["gaussian", "rect"]},
            },
        },
        "scan": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start_um", "stop_um", "step_um"],
            "properties": {
                "start_um": _NUM,
                "stop_um": _NUM,
                "step_um": _POS,
                "mode": {"enum": ["fringe", "envelope"]},
            },
        },
        "term_selection": {"enum": list(TERM_SELECTIONS)},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 16},
                "span_rad_per_fs": _POS,
                "center_wavelength_nm": _POS,
            },
        },
        "arm_gdd_fs2": _NUM,
    },
}


def _mask_to_dict(m) -> dict:
    d = dataclasses.asdict(m)
    return {"type": "block" if isinstance(m, BlockMask) else "edge", **d}


def _mask_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("type")
    return BlockMask(**d) if kind == "block" else EdgeMask(**d)


def spec_to_dict(spec: ExperimentSpec) -> dict:
    return {
        "preset": spec.preset,
        "chirped": dataclasses.asdict(spec.chirped),
        "antichirped": dataclasses.asdict(spec.antichirped),
        "masks_chirped": [_mask_to_dict(m) for m in spec.masks_chirped],
        "masks_antichirped": [_mask_to_dict(m) for m in spec.masks_antichirped],
        "detector": dataclasses.asdict(spec.detector),
        "scan": dataclasses.asdict(spec.scan),
        "term_selection": spec.term_selection,
        "grid": dataclasses.asdict(spec.grid),
        "arm_gdd_fs2": spec.arm_gdd_fs2,
    }


def _error_message(err: jsonschema.ValidationError) -> str:
    path = ".".join(str(p) for p in err.absolute_path)
    return f"{path}: {err.message}" if path else err.message


def validate_config(doc: dict):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise ConfigurationError(_error_message(best))


def spec_from_dict(doc: dict) -> ExperimentSpec:
    validate_config(doc)
    return ExperimentSpec(
        preset=doc["preset"],
        chirped=PulseSpec(**doc["chirped"]),
        antichirped=PulseSpec(**doc["antichirped"]),
        detector=DetectorSpec(**doc["detector"]),
        scan=ScanSpec(**doc["scan"]),
        masks_chirped=tuple(_mask_from_dict(m) for m in doc.get("masks_chirped", [])),
        masks_antichirped=tuple(_mask_from_dict(m) for m in doc.get("masks_antichirped", [])),
        term_selection=doc.get("term_selection", "all"),
        grid=GridSpec(**doc.get("grid", {})),
        arm_gdd_fs2=doc.get("arm_gdd_fs2", 0.0),
    )


def load_config(path) -> ExperimentSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("config must be a JSON object")
    return spec_from_dict(doc)


def dump_config(spec: ExperimentSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"
