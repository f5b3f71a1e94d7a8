"""JSON Schemas for CLI reports (draft 2020-12)."""

from __future__ import annotations

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_NULLABLE_FORM = {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/form"}]}

_DEFS = {
    "form": {
        "type": "object",
        "required": ["numerator", "denominator_exponents"],
        "properties": {
            "numerator": _INT_LIST,
            "denominator_exponents": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        },
    },
    "failure": {"type": "object", "required": ["failure"], "properties": {"failure": {"type": "string"}}},
    "quasi": {
        "type": "object",
        "required": ["period", "start", "residues"],
        "properties": {
            "period": {"type": "integer", "minimum": 1},
            "start": {"type": "integer", "minimum": 0},
            "residues": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        },
    },
    "growth": {
        "type": "object",
        "required": ["degree", "k", "flagged"],
        "properties": {"degree": {"type": ["integer", "null"]}, "k": {"type": ["integer", "null"]},
                       "leading": {"type": ["string", "null"]}, "flagged": {"type": "string"}},
    },
    "generation": {
        "type": "array",
        "items": {"type": "object", "required": ["n", "spanned", "dimension"],
                  "properties": {"n": {"type": "integer"}, "spanned": {"type": "integer"},
                                 "dimension": {"type": "integer"}}},
    },
}

RESULT_SCHEMAS = {
    "profile": {
        "type": "object",
        "required": ["source", "profile", "growth"],
        "properties": {"source": {"type": "string"}, "profile": _INT_LIST, "growth": {"$ref": "#/$defs/growth"}},
    },
    "decompose": {
        "type": "object",
        "required": ["source", "blocks", "dimension", "stabilized", "hereditary_minimal",
                     "finitely_generated", "reason", "kernel"],
        "properties": {
            "blocks": {"type": "array", "items": _INT_LIST},
            "infinite": {"type": "array", "items": {"type": "boolean"}},
            "dimension": {"type": "integer", "minimum": 0},
            "stabilized": {"type": "boolean"},
            "hereditary_minimal": {"type": "boolean"},
            "finitely_generated": {"type": "boolean"},
            "reason": {"type": "string"},
            "tournament_rule": {"type": ["string", "null"]},
            "kernel": {"type": "array", "items": _INT_LIST},
        },
    },
    "series": {
        "type": "object",
        "required": ["source", "prefix", "form", "quasi_polynomial", "n0", "nonneg_search"],
        "properties": {
            "prefix": _INT_LIST,
            "form": {"oneOf": [{"$ref": "#/$defs/form"}, {"$ref": "#/$defs/failure"}]},
            "quasi_polynomial": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/quasi"}]},
            "n0": {"type": ["integer", "null"]},
            "nonneg_search": {
                "oneOf": [{"type": "null"},
                          {"type": "object", "required": ["result", "found"],
                           "properties": {"result": {"type": "string"}, "found": _NULLABLE_FORM}}]},
            "bounded": {"type": "object", "required": ["bounded"]},
        },
    },
    "algebra": {
        "type": "object",
        "required": ["source", "dimensions", "e1_ranks", "structure_constants", "addlayer", "generation"],
        "properties": {
            "dimensions": _INT_LIST,
            "e1_ranks": _INT_LIST,
            "structure_constants": {
                "type": "array",
                "items": {"type": "object", "required": ["rho", "sigma", "tau", "c"],
                          "properties": {"rho": _INT_LIST, "sigma": _INT_LIST, "tau": _INT_LIST,
                                         "c": {"type": "integer", "minimum": 1}}},
            },
            "addlayer": {"type": "object", "required": ["checked", "violations", "passed"]},
            "generation": {"$ref": "#/$defs/generation"},
        },
    },
    "groupoid": {
        "type": "object",
        "required": ["source", "k", "size", "hilbert_prefix", "form", "nonneg_search", "generation_degree"],
        "properties": {
            "k": {"type": "integer", "minimum": 0},
            "size": {"type": "integer", "minimum": 1},
            "hilbert_prefix": _INT_LIST,
            "generation_degree": {"type": ["integer", "null"]},
            "wreath": {"oneOf": [{"type": "null"}, {"type": "object", "required": ["passed"]}]},
        },
    },
    "check": {
        "type": "object",
        "required": ["checks", "passed"],
        "properties": {
            "passed": {"type": "boolean"},
            "checks": {"type": "array",
                       "items": {"type": "object", "required": ["name", "passed", "detail"],
                                 "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"},
                                                "detail": {"type": "string"}}}},
        },
    },
}


def report_schema(command: str) -> dict:
    """Envelope schema with the result schema of ``command`` embedded."""
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["tool", "version", "command", "config", "seed", "timing", "result"],
        "properties": {
            "tool": {"const": "agealgebra"},
            "version": {"type": "string"},
            "command": {"const": command},
            "config": {"type": "object"},
            "seed": {"type": "integer"},
            "timing": {"type": "object", "required": ["seconds"], "properties": {"seconds": {"type": "number"}}},
            "result": RESULT_SCHEMAS[command],
        },
        "$defs": _DEFS,
    }


ERROR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["error", "exit_code"],
    "properties": {"error": {"type": "string"}, "exit_code": {"type": "integer"}},
}
