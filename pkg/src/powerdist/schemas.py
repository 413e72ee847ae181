"""JSON schemas for every report the command line emits."""
from __future__ import annotations

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_POINT = {"type": "array", "items": _NUM, "minItems": 2}
_CPLX = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

MANIFEST = {
    "type": "object",
    "required": ["command", "flags", "seeds", "version", "durationSeconds"],
    "properties": {
        "command": {"type": "string"},
        "flags": {"type": "object"},
        "seeds": {"type": "array", "items": {"type": "integer"}},
        "version": {"type": "string"},
        "durationSeconds": _NUM,
    },
}


def _report(props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "required": ["manifest", *required],
        "properties": {"manifest": MANIFEST, **props},
    }


GEN = _report({
    "family": {"type": "string"},
    "dim": {"type": "integer", "minimum": 2},
    "circumradius": _NUM,
    "center": _POINT,
    "vertices": {"type": "array", "items": _POINT, "minItems": 3},
}, ["family", "dim", "circumradius", "vertices"])

EVAL = _report({
    "value": _NUM,
    "curve": {"type": "array", "items": {"type": "array", "items": _NUM,
                                         "minItems": 2, "maxItems": 2}},
}, ["value"])

CONSTANCY_REPORT = {
    "type": "object",
    "required": ["lambda", "spreadAbs", "spreadRel", "isConstant", "status", "probeCount",
                 "seed", "exact", "proven"],
    "properties": {
        "lambda": _NUM, "h": _NUM, "spreadAbs": {"type": "number", "minimum": 0},
        "spreadRel": {"type": "number", "minimum": 0}, "isConstant": {"type": "boolean"},
        "status": {"enum": ["constant", "nonconstant", "indeterminate"]},
        "probeCount": {"type": "integer", "minimum": 1}, "seed": {"type": "integer"},
        "exact": {"type": "boolean"}, "proven": {"type": "boolean"},
    },
}

CONSTANCY = _report({
    "family": {"type": "string"},
    "sphereRadius": _NUM,
    "reports": {"type": "array", "items": CONSTANCY_REPORT},
    "detectedSet": {"type": "array", "items": {"type": "integer"}},
    "unproven": {"type": "array", "items": {"type": "integer"}},
    "bound": {"type": ["integer", "null"]},
}, ["family", "reports", "detectedSet"])

EXTREMUM_REPORT = {
    "type": "object",
    "required": ["lambda", "argmax", "maxValue", "argmin", "minValue", "maxLabel", "minLabel",
                 "unbounded", "converged"],
    "properties": {
        "lambda": _NUM, "h": _NUM, "argmax": _POINT, "maxValue": _NUM_OR_NULL,
        "argmin": _POINT, "minValue": _NUM, "maxLabel": {"type": "string"},
        "minLabel": {"type": "string"}, "maxAngularError": _NUM, "minAngularError": _NUM,
        "unbounded": {"type": "boolean"}, "starts": {"type": "integer"},
        "seed": {"type": "integer"}, "iterations": {"type": "integer"},
        "converged": {"type": "boolean"},
    },
}

EXTREMA = _report({
    "family": {"type": "string"},
    "sphereRadius": _NUM,
    "report": EXTREMUM_REPORT,
    "prediction": {"type": ["object", "null"]},
}, ["family", "report"])

ORACLE = _report({
    "family": {"type": "string"},
    "sphereRadius": _NUM,
    "report": {
        "type": "object",
        "required": ["minValue", "maxValue", "argmin", "argmax", "gridSize"],
        "properties": {"minValue": _NUM, "maxValue": _NUM, "argmin": _POINT, "argmax": _POINT,
                       "gridSize": {"type": "integer", "minimum": 1}},
    },
}, ["family", "report"])

MOMENTS = _report({
    "report": {
        "type": "object",
        "required": ["powerSums", "elementarySymmetric", "isRegular", "residual"],
        "properties": {
            "powerSums": {"type": "array", "items": _CPLX},
            "elementarySymmetric": {"type": "array", "items": _CPLX},
            "isRegular": {"type": "boolean"}, "residual": _NUM,
            "powerSumsVanish": {"type": "boolean"}, "equalModuli": {"type": "boolean"},
            "regularityResidual": _NUM,
        },
    },
    "constancy": {"type": "array", "items": {
        "type": "object", "required": ["k", "isConstant", "spread"],
        "properties": {"k": {"type": "integer"}, "isConstant": {"type": "boolean"},
                       "spread": _NUM}}},
}, ["report"])

CONJECTURE = _report({
    "n": {"type": "integer", "minimum": 3},
    "bestSpread": _NUM,
    "bestPoints": {"type": "array", "items": _CPLX},
    "regularityResidual": _NUM,
    "restartSpreads": {"type": "array", "items": _NUM},
    "seed": {"type": "integer"},
    "iterations": {"type": "integer"},
    "penalize": {"type": "boolean"},
    "schedule": {"type": "object"},
}, ["n", "bestSpread", "bestPoints", "restartSpreads"])

SCHEMAS = {
    "gen": GEN, "eval": EVAL, "constancy": CONSTANCY, "extrema": EXTREMA, "oracle": ORACLE,
    "moments": MOMENTS, "conjecture": CONJECTURE,
}
