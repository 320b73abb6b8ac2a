"""JSON command line: classify, aut, twist, h1, equiv-check, specialize-check.

Every run prints one envelope ``{"ok", "result", "error"}`` with sorted keys.
Exit status is 0 on success, 1 when the payload fails its schema, 2 on a
domain error and 3 when an enumeration exceeds the bound.
"""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from .autgrp import enumerate_aut_points, neutral_subgroup
from .descent import (GaloisExtension, check_band_and_equivalence, cocycle_from_json, h1_classes,
                      twist_algebra)
from .errors import AzumayaError
from .exactring import bound_override, ring_from_json
from .invalg import ClassicalType, algebra_from_json, classify_kind, classical_type
from .specialize import check_specialization_bijection

_DEFS = {
    "ring": {
        "type": "object",
        "required": ["kind"],
        "properties": {
            "kind": {"enum": ["prime", "ext", "product", "chain"]},
            "p": {"type": "integer", "minimum": 2},
            "deg": {"type": "integer", "minimum": 1},
            "m": {"type": "integer", "minimum": 1},
            "modulus": {"type": "array", "items": {"type": "integer"}},
            "parts": {"type": "array", "items": {"$ref": "#/$defs/ring"}, "minItems": 1, "maxItems": 2},
        },
        "allOf": [
            {"if": {"properties": {"kind": {"const": "prime"}}}, "then": {"required": ["p"]}},
            {"if": {"properties": {"kind": {"const": "ext"}}}, "then": {"required": ["p", "deg"]}},
            {"if": {"properties": {"kind": {"const": "product"}}},
             "then": {"required": ["parts"], "properties": {"parts": {"minItems": 2}}}},
            {"if": {"properties": {"kind": {"const": "chain"}}},
             "then": {"required": ["m", "parts"], "properties": {"parts": {"maxItems": 1}}}},
        ],
    },
    "element": {"anyOf": [{"type": "integer"}, {"type": "array", "items": {"$ref": "#/$defs/element"}}]},
    "matrix": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1,
                                                         "items": {"$ref": "#/$defs/element"}}},
    "center": {"anyOf": [
        {"const": "trivial"},
        {"type": "object", "required": ["kind", "base"],
         "properties": {"kind": {"enum": ["split", "field"]}, "base": {"$ref": "#/$defs/ring"},
                        "total": {"$ref": "#/$defs/ring"}}},
    ]},
    "involution": {
        "type": "object",
        "required": ["kind"],
        "properties": {"kind": {"enum": ["gram", "hermitian", "exchange"]}, "g": {"$ref": "#/$defs/matrix"},
                       "eps": {"enum": [1, -1]}},
        "if": {"properties": {"kind": {"enum": ["gram", "hermitian"]}}},
        "then": {"required": ["g"]},
    },
    "algebra": {
        "type": "object",
        "required": ["ring", "center", "degree", "involution"],
        "properties": {"ring": {"$ref": "#/$defs/ring"}, "center": {"$ref": "#/$defs/center"},
                       "degree": {"type": "integer", "minimum": 1},
                       "involution": {"$ref": "#/$defs/involution"}},
    },
    "extension": {
        "type": "object",
        "required": ["q", "d"],
        "properties": {"q": {"type": "integer", "minimum": 3}, "d": {"type": "integer", "minimum": 1}},
    },
    "point": {
        "type": "object",
        "required": ["c"],
        "properties": {"c": {"$ref": "#/$defs/matrix"},
                       "centerAction": {"enum": ["identity", "exchange", "conj"]},
                       "multiplier": {"$ref": "#/$defs/element"}},
    },
    "cocycle": {
        "type": "object",
        "required": ["extension", "values"],
        "properties": {"extension": {"$ref": "#/$defs/extension"},
                       "values": {"type": "object", "required": ["phi"],
                                  "properties": {"phi": {"$ref": "#/$defs/point"}}}},
    },
}


def _schema(body):
    return {"$schema": "https://json-schema.org/draft/2020-12/schema", "$defs": _DEFS, **body}


PAYLOAD_SCHEMAS = {
    "classify": _schema({"type": "object", "required": ["algebra"],
                         "properties": {"algebra": {"$ref": "#/$defs/algebra"}}}),
    "aut": _schema({"type": "object", "required": ["algebra"],
                    "properties": {"algebra": {"$ref": "#/$defs/algebra"}}}),
    "twist": _schema({"type": "object", "required": ["split", "cocycle"],
                      "properties": {"split": {"$ref": "#/$defs/algebra"}, "cocycle": {"$ref": "#/$defs/cocycle"}}}),
    "h1": _schema({"type": "object", "required": ["split", "extension"],
                   "properties": {"split": {"$ref": "#/$defs/algebra"},
                                  "extension": {"$ref": "#/$defs/extension"}}}),
    "equiv-check": _schema({"type": "object", "required": ["type", "q", "d"],
                            "properties": {"type": {"type": "object", "required": ["letter", "rank"],
                                                    "properties": {"letter": {"enum": ["A", "B", "C", "D"]},
                                                                   "rank": {"type": "integer", "minimum": 1}}},
                                           "q": {"type": "integer", "minimum": 3},
                                           "d": {"type": "integer", "minimum": 1}}}),
    "specialize-check": _schema({"type": "object", "required": ["kind", "degree", "ring"],
                                 "properties": {"kind": {"enum": ["orthogonal", "symplectic", "unitary"]},
                                                "degree": {"type": "integer", "minimum": 1},
                                                "ring": {"$ref": "#/$defs/ring"},
                                                "center": {"enum": ["split", "field"]}}}),
}

_HIST = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}}

RESULT_SCHEMAS = {
    "classify": _schema({"type": "object", "required": ["kind", "type", "rank"], "additionalProperties": False,
                         "properties": {"kind": {"enum": ["orthogonal", "symplectic", "unitary"]},
                                        "type": {"enum": ["A", "B", "C", "D"]},
                                        "rank": {"type": "integer"}}}),
    "aut": _schema({"type": "object", "required": ["order", "neutral_order", "elements", "neutral_indices"],
                    "properties": {"order": {"type": "integer"}, "neutral_order": {"type": "integer"},
                                   "order_histogram": _HIST,
                                   "elements": {"type": "array", "items": {"$ref": "#/$defs/point"}},
                                   "neutral_indices": {"type": "array", "items": {"type": "integer"}}}}),
    "twist": _schema({"type": "object", "required": ["result", "witness", "verified"],
                      "properties": {"result": {"$ref": "#/$defs/algebra"}, "verified": {"type": "boolean"},
                                     "fixed_dimension": {"type": "integer"},
                                     "witness": {"type": "object", "required": ["c", "outer", "multiplier"]}}}),
    "h1": _schema({"type": "object", "required": ["count", "classes", "twisted_forms"],
                   "properties": {"count": {"type": "integer"},
                                  "classes": {"type": "array", "items": {"$ref": "#/$defs/cocycle"}},
                                  "twisted_forms": {"type": "array", "items": {"$ref": "#/$defs/algebra"}}}}),
    "equiv-check": _schema({"type": "object", "required": ["passed", "band_injective", "classes",
                                                           "algebra_classes", "group_classes", "failures"]}),
    "specialize-check": _schema({"type": "object",
                                 "required": ["bijective", "classesOverR", "classesOverK", "matching"],
                                 "properties": {
                                     "classesOverR": {"type": "array", "items": {"$ref": "#/$defs/algebra"}},
                                     "classesOverK": {"type": "array", "items": {"$ref": "#/$defs/algebra"}},
                                     "matching": {"type": "array", "items": {"type": "array",
                                                                             "items": {"type": "integer"}}}}}),
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["ok", "result", "error"],
    "additionalProperties": False,
    "properties": {"ok": {"type": "boolean"},
                   "result": {"type": ["object", "null"]},
                   "error": {"anyOf": [{"type": "null"},
                                       {"type": "object", "required": ["code", "detail"],
                                        "properties": {"code": {"type": "string"}, "detail": {"type": "string"}}}]}},
}


class SchemaError(Exception):
    exit_status = 1

    def __init__(self, err):
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        super().__init__(f"{path}: {err.message}")


def validate(schema, doc):
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise SchemaError(errors[0])


def cmd_classify(payload):
    A = algebra_from_json(payload["algebra"])
    kind = classify_kind(A)
    t = classical_type(A)
    return {"kind": kind.value, "type": t.letter, "rank": t.rank}


def cmd_aut(payload):
    A = algebra_from_json(payload["algebra"])
    G = enumerate_aut_points(A)
    N = neutral_subgroup(G)
    out = G.to_json(N)
    out["neutral_order"] = N.order
    out["order_histogram"] = [list(x) for x in G.order_histogram.items()]
    return out


def cmd_twist(payload):
    A = algebra_from_json(payload["split"])
    c = cocycle_from_json(A, payload["cocycle"])
    form = twist_algebra(A, c)
    out = form.to_json()
    out["verified"] = bool(form.verify())
    return out


def cmd_h1(payload):
    A = algebra_from_json(payload["split"])
    ext = payload["extension"]
    E = GaloisExtension.of(ext["q"], ext["d"])
    reps = h1_classes(A, E)
    return {"count": len(reps), "classes": [c.to_json() for c in reps],
            "twisted_forms": [twist_algebra(A, c, E).result.to_json() for c in reps]}


def cmd_equiv_check(payload):
    t = payload["type"]
    letter, rank = t["letter"], int(t["rank"])
    degree = {"A": rank + 1, "B": 2 * rank + 1, "C": 2 * rank, "D": 2 * rank}[letter]
    E = GaloisExtension.of(payload["q"], payload["d"])
    return check_band_and_equivalence(ClassicalType(letter, rank, degree), E.k, E).to_json()


def cmd_specialize_check(payload):
    R = ring_from_json(payload["ring"])
    return check_specialization_bijection(payload["kind"], int(payload["degree"]), R,
                                          payload.get("center")).to_json()


COMMANDS = {
    "classify": cmd_classify,
    "aut": cmd_aut,
    "twist": cmd_twist,
    "h1": cmd_h1,
    "equiv-check": cmd_equiv_check,
    "specialize-check": cmd_specialize_check,
}


def run(subcommand, payload, bound=None):
    """Execute one request; returns ``(exit status, envelope dict)``."""
    try:
        validate(PAYLOAD_SCHEMAS[subcommand], payload)
        if bound is not None:
            with bound_override(bound):
                result = COMMANDS[subcommand](payload)
        else:
            result = COMMANDS[subcommand](payload)
        result = json.loads(json.dumps(result))
        validate(RESULT_SCHEMAS[subcommand], result)
        return 0, {"ok": True, "result": result, "error": None}
    except SchemaError as e:
        return 1, {"ok": False, "result": None, "error": {"code": "SchemaError", "detail": str(e)}}
    except AzumayaError as e:
        return e.exit_status, {"ok": False, "result": None, "error": {"code": e.code, "detail": str(e)}}
    except (KeyError, ValueError, TypeError, IndexError) as e:
        # payload passed the schema but is malformed in a way only parsing sees
        return 2, {"ok": False, "result": None, "error": {"code": "InvalidInput", "detail": repr(e)}}


def dumps(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(prog="azumaya", description="Algebras with involution over finite rings.")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--payload", help="payload as a JSON string")
        src.add_argument("--input", help="file holding the JSON payload (default: stdin)")
        p.add_argument("--bound", type=int, help="override the enumeration bound")
        p.add_argument("--output", help="write the JSON document here instead of stdout")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.payload is not None:
            raw = args.payload
        elif args.input:
            with open(args.input) as fh:
                raw = fh.read()
        else:
            raw = sys.stdin.read()
        payload = json.loads(raw)
    except (OSError, json.JSONDecodeError) as e:
        status, doc = 1, {"ok": False, "result": None, "error": {"code": "SchemaError", "detail": str(e)}}
    else:
        status, doc = run(args.subcommand, payload, args.bound)
    text = dumps(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
