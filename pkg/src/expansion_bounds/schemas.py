"""JSON schemas for the machine-readable CLI outputs (draft 2020-12)."""

_NUM_OR_NULL = {"type": ["number", "null"]}

CELL_BOUND = {
    "type": "object",
    "required": ["alpha_lo", "alpha_hi", "gamma_lo", "gamma_hi", "g_bound",
                 "phi_bound", "phi_bar_bound", "total", "method"],
    "properties": {
        "alpha_lo": {"type": "number"}, "alpha_hi": {"type": "number"},
        "gamma_lo": {"type": "number"}, "gamma_hi": {"type": "number"},
        "g_bound": {"type": "number"}, "phi_bound": {"type": "number"},
        "phi_bar_bound": {"type": "number"}, "total": {"type": "number"},
        "method": {"enum": ["corner", "tangent"]},
    },
    "additionalProperties": False,
}

CERTIFICATE = {
    "type": "object",
    "required": ["delta", "nu", "nu_lower", "alpha_floor", "grid_m", "f_star_upper", "negative",
                 "worst_cell", "method", "corner_f_star_upper", "tangent_f_star_upper",
                 "sign_disagreements", "cell_errors"],
    "properties": {
        "delta": {"type": "integer", "minimum": 4},
        "nu": {"type": "number"},
        "nu_lower": {"type": "number"},
        "alpha_floor": {"type": "number"},
        "grid_m": {"type": "integer", "minimum": 1},
        "f_star_upper": _NUM_OR_NULL,
        "negative": {"type": "boolean"},
        "worst_cell": {"oneOf": [CELL_BOUND, {"type": "null"}]},
        "method": {"enum": ["corner", "tangent"]},
        "corner_f_star_upper": _NUM_OR_NULL,
        "tangent_f_star_upper": _NUM_OR_NULL,
        "sign_disagreements": {"type": "integer", "minimum": 0},
        "cell_errors": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

BASELINE = {
    "type": "object",
    "required": ["delta", "eta", "nu_lower", "small_set_alpha", "small_set_floor"],
    "properties": {
        "delta": {"type": "integer"}, "eta": {"type": "number"}, "nu_lower": {"type": "number"},
        "small_set_alpha": {"type": "number"}, "small_set_floor": {"type": "number"},
    },
    "additionalProperties": False,
}

BOUND_REPORT = {
    "type": "object",
    "required": ["delta", "nu_star", "baseline", "certificate", "tolerances",
                 "runtime_ms", "tool_version", "seed"],
    "properties": {
        "delta": {"type": "integer"},
        "nu_star": {"type": "number"},
        "baseline": BASELINE,
        "certificate": CERTIFICATE,
        "tolerances": {"type": "object", "additionalProperties": {"type": "number"}},
        "runtime_ms": {"type": "integer", "minimum": 0},
        "tool_version": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

NU_STAR = {
    "type": "object",
    "required": ["delta", "nu_star", "nu_star_truncated", "tol", "verified"],
    "properties": {
        "delta": {"type": "integer"}, "nu_star": {"type": "number"},
        "nu_star_truncated": {"type": "number"}, "tol": {"type": "number"},
        "verified": {"type": "boolean"},
    },
    "additionalProperties": False,
}

SAMPLE = {
    "type": "object",
    "required": ["n", "delta", "seed", "method", "iota", "witness", "configuration_vector", "emitted"],
    "properties": {
        "n": {"type": "integer"}, "delta": {"type": "integer"}, "seed": {"type": "integer"},
        "method": {"enum": ["exact", "local_search"]},
        "iota": {"type": "number", "minimum": 0},
        "witness": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "configuration_vector": {
            "type": "object",
            "required": ["k", "c", "s", "s_bar"],
            "properties": {
                "k": {"type": "integer"}, "c": {"type": "integer"},
                "s": {"type": "array", "items": {"type": "integer"}},
                "s_bar": {"type": "array", "items": {"type": "integer"}},
            },
            "additionalProperties": False,
        },
        "emitted": {"type": ["string", "null"]},
    },
    "additionalProperties": False,
}

SCHEMAS = {"bound_report": BOUND_REPORT, "certificate": CERTIFICATE, "baseline": BASELINE,
           "nu_star": NU_STAR, "sample": SAMPLE}
