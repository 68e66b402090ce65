use serde_json::{json, Value};

fn series() -> Value {
    json!({
        "type": "array",
        "description": "monomials [a, b, re, im] of sum c_ab S^a xi0^b",
        "items": {"type": "array", "prefixItems": [
            {"type": "integer", "minimum": 0}, {"type": "integer", "minimum": 0},
            {"type": "number"}, {"type": "number"}
        ], "minItems": 4, "maxItems": 4}
    })
}

fn pair() -> Value {
    json!({"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2})
}

fn angle() -> Value {
    json!({"oneOf": [
        {"type": "object", "properties": {"theta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}},
         "required": ["theta"], "additionalProperties": false},
        {"type": "object", "properties": {"cf": {"type": "array", "items": {"type": "integer", "minimum": 1}},
         "periodic": {"type": "boolean"}}, "required": ["cf"], "additionalProperties": false},
        {"type": "object", "properties": {"t": pair()}, "required": ["t"], "additionalProperties": false}
    ]})
}

fn object(props: Value, required: &[&str]) -> Value {
    json!({"type": "object", "properties": props, "required": required, "additionalProperties": false})
}

/// JSON schema of a `cyclenf run` job file.
pub fn job_schema() -> Value {
    let normalize = json!({"oneOf": [
        object(json!({"model": {"const": "node"}, "t": angle(), "G": series()}), &["model", "t", "G"]),
        object(json!({"model": {"const": "cycle"}, "t_edge": {"type": "array", "items": angle(), "minItems": 2},
            "G_edge": {"type": "array", "items": series(), "minItems": 2}}), &["model", "t_edge", "G_edge"]),
        object(json!({"model": {"const": "standard"}, "t": angle(), "n_components": {"type": "integer", "minimum": 1}}),
            &["model", "t", "n_components"]),
    ]});
    let majorant = object(
        json!({"angle": angle(), "K": {"type": "number", "minimum": 0}, "trials": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0}, "instances": {"type": "integer", "minimum": 0},
            "eps": {"type": "number"}, "delta": {"type": "number"}}),
        &["angle"],
    );
    let diophantine = object(
        json!({"angle": angle(), "A": {"type": "number"}, "alpha": {"type": "number"},
            "n_max": {"type": "integer", "minimum": 1, "maximum": 1_000_000}, "depth": {"type": "integer", "minimum": 1}}),
        &["angle", "A", "alpha", "n_max"],
    );
    let ninepoints = json!({"oneOf": [
        object(json!({"mode": {"const": "product"}, "n_components": {"enum": [1, 2, 3]},
            "params": {"type": "array", "items": pair(), "minItems": 9, "maxItems": 9},
            "degree_split": {"type": "array", "items": {"type": "integer"}}}), &["mode", "n_components", "params", "degree_split"]),
        object(json!({"mode": {"const": "complete"}, "target": pair(),
            "eight": {"type": "array", "items": pair(), "minItems": 8, "maxItems": 8}}), &["mode", "target", "eight"]),
    ]});
    let homology = json!({"oneOf": [
        object(json!({"n": {"type": "integer", "minimum": 1}}), &["n"]),
        object(json!({"monodromy": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}, "minItems": 2, "maxItems": 2}}), &["monodromy"]),
    ]});
    let density = object(
        json!({"t": angle(), "eps": {"type": "number", "exclusiveMinimum": 0}, "max_iter": {"type": "integer", "minimum": 0}}),
        &["t", "eps", "max_iter"],
    );
    let twoform = object(json!({"t": angle(), "G": series()}), &["t", "G"]);
    let variants: Vec<Value> = [
        ("normalize", normalize),
        ("majorant", majorant),
        ("diophantine", diophantine),
        ("ninepoints", ninepoints),
        ("homology", homology),
        ("density", density),
        ("twoform", twoform),
    ]
    .into_iter()
    .map(|(name, input)| {
        object(
            json!({
                "command": {"const": name},
                "input": input,
                "order": {"type": "integer", "minimum": 1},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "output": {"type": "string"}
            }),
            &["command", "input"],
        )
    })
    .collect();
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "cyclenf job",
        "oneOf": variants
    })
}
