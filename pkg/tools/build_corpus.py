"""Write the bundled 50-schema mini-corpus and its metadata.

Each entry carries a tier label assigned by hand from the schema text; the
script refuses to write anything if a label disagrees with the tiering rule,
so the committed metadata doubles as an independent check of assign_tier.

    python3 tools/build_corpus.py [--out src/jsoncd/data/corpus]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from jsoncd.schema.ingest import assign_tier, count_fields  # noqa: E402


def fn(name: str, desc: str, props: dict, required: list[str]) -> dict:
    """GlaiveAI-style function-calling parameter schema."""
    return {
        "type": "object",
        "title": name,
        "description": desc,
        "properties": props,
        "required": required,
        "additionalProperties": False,
    }


S = {"type": "string"}
I = {"type": "integer"}
N = {"type": "number"}
B = {"type": "boolean"}

# (source id, dataset, hand-labeled tier, schema)
ENTRIES: list[tuple[str, str, str, object]] = []


def add(sid: str, dataset: str, tier: str, schema: object) -> None:
    ENTRIES.append((sid, dataset, tier, schema))


# ---- GlaiveAI: function-call argument objects --------------------------------
# 21 fields: type, title, description, properties, required, additionalProperties
# (6) + 5 property names (5) + their 10 inner keys (10)
add("glaive_weather", "GlaiveAI", "Easy", fn(
    "get_weather", "Look up the weather for a city",
    {
        "city": {"type": "string", "maxLength": 20},
        "unit": {"enum": ["c", "f"], "default": "c"},
        "days": {"type": "integer", "minimum": 1},
        "hourly": {"type": "boolean", "default": False},
        "lang": {"type": "string", "pattern": "^[a-z]{2}$"},
    },
    ["city", "unit"],
))
add("glaive_email", "GlaiveAI", "Easy", fn(
    "send_email", "Send an email",
    {
        "to": {"type": "string", "format": "email", "maxLength": 24},
        "subject": {"type": "string", "maxLength": 16},
        "urgent": B,
    },
    ["to", "subject", "urgent"],
))
add("glaive_bmi", "GlaiveAI", "Easy", fn(
    "calculate_bmi", "Body mass index",
    {"weight_kg": {"type": "integer", "minimum": 1, "maximum": 400}, "height_cm": {"type": "integer", "minimum": 30, "maximum": 250}},
    ["weight_kg", "height_cm"],
))
add("glaive_convert", "GlaiveAI", "Easy", fn(
    "convert_currency", "Convert between currencies",
    {
        "amount": N,
        "from": {"type": "string", "pattern": "^[A-Z]{3}$"},
        "to": {"type": "string", "pattern": "^[A-Z]{3}$"},
    },
    ["amount", "from", "to"],
))
add("glaive_search", "GlaiveAI", "Easy", fn(
    "search_movies", "Search a movie catalogue",
    {
        "query": {"type": "string", "maxLength": 12},
        "year": {"type": "integer", "minimum": 1900, "maximum": 2030},
        "genres": {"type": "array", "items": {"enum": ["drama", "comedy", "horror"]}, "maxItems": 3},
    },
    ["query"],
))
add("glaive_todo", "GlaiveAI", "Easy", fn(
    "create_todo", "Add a todo item",
    {"title": {"type": "string", "maxLength": 10}, "due": {"type": "string", "format": "date"}, "priority": {"enum": [1, 2, 3]}},
    ["title", "due"],
))
add("glaive_random", "GlaiveAI", "Easy", fn(
    "random_number", "Draw a random integer",
    {"min": I, "max": I},
    ["min", "max"],
))
add("glaive_translate", "GlaiveAI", "Easy", fn(
    "translate", "Translate text",
    {"text": {"type": "string", "maxLength": 16}, "target": {"enum": ["en", "fr", "de", "es"]}},
    ["text", "target"],
))
add("glaive_stock", "GlaiveAI", "Trivial", fn(
    "stock_price", "Latest price for a ticker",
    {"symbol": {"type": "string", "pattern": "^[A-Z]{1,5}$"}},
    ["symbol"],
))
add("glaive_booking", "GlaiveAI", "Medium", fn(
    "book_flight", "Book a flight",
    {
        "origin": {"type": "string", "pattern": "^[A-Z]{3}$"},
        "destination": {"type": "string", "pattern": "^[A-Z]{3}$"},
        "date": {"type": "string", "format": "date"},
        "passengers": {
            "type": "array",
            "minItems": 1,
            "maxItems": 2,
            "items": {
                "type": "object",
                "properties": {"name": {"type": "string", "maxLength": 8}, "age": {"type": "integer", "minimum": 0, "maximum": 120}},
                "required": ["name", "age"],
                "additionalProperties": False,
            },
        },
        "class": {"enum": ["economy", "business"]},
    },
    ["origin", "destination", "date", "passengers", "class"],
))

# ---- Github: assorted repository schemas ---------------------------------------
add("gh_bool", "Github", "Trivial", {"type": "boolean"})
add("gh_int_range", "Github", "Trivial", {"type": "integer", "minimum": -5, "maximum": 99})
add("gh_enum", "Github", "Trivial", {"enum": ["red", "green", "blue", None, 7]})
add("gh_string_len", "Github", "Trivial", {"type": "string", "minLength": 2, "maxLength": 8})
add("gh_array_bool", "Github", "Trivial", {"type": "array", "items": B, "maxItems": 4})
add("gh_tuple", "Github", "Trivial", {
    "type": "array",
    "prefixItems": [{"type": "string", "maxLength": 4}, {"type": "integer"}, {"const": True}],
    "items": False,
    "minItems": 3,
})
add("gh_package", "Github", "Easy", {
    "type": "object",
    "properties": {
        "name": {"type": "string", "pattern": "^[a-z][a-z0-9-]{0,10}$"},
        "version": {"type": "string", "pattern": "^[0-9]+\\.[0-9]+\\.[0-9]+$"},
        "private": B,
    },
    "required": ["name", "version"],
    "additionalProperties": False,
})
add("gh_point", "Github", "Easy", {
    "type": "object",
    "properties": {"x": I, "y": I, "label": {"type": "string", "maxLength": 6}},
    "required": ["x", "y"],
    "additionalProperties": False,
})
add("gh_tags", "Github", "Trivial", {"type": "array", "items": {"type": "string", "pattern": "^#[a-z]+$", "maxLength": 6}, "maxItems": 3})
add("gh_linked_list", "Github", "Easy", {
    "$defs": {"node": {"type": "object", "properties": {"v": I, "next": {"anyOf": [{"type": "null"}, {"$ref": "#/$defs/node"}]}}, "required": ["v", "next"], "additionalProperties": False}},
    "$ref": "#/$defs/node",
})
add("gh_config", "Github", "Easy", {
    "type": "object",
    "properties": {
        "debug": B,
        "port": {"type": "integer", "minimum": 1, "maximum": 65535},
        "host": {"type": "string", "format": "ipv4"},
        "mode": {"enum": ["dev", "prod"]},
    },
    "required": ["port", "mode"],
    "additionalProperties": False,
})
add("gh_allof", "Github", "Easy", {
    "allOf": [
        {"type": "object", "properties": {"id": {"type": "integer", "minimum": 0}}, "required": ["id"]},
        {"properties": {"name": {"type": "string", "maxLength": 5}}, "required": ["name"]},
    ],
    "additionalProperties": False,
    "properties": {"id": True, "name": True},
})
add("gh_matrix", "Github", "Easy", {
    "type": "array",
    "minItems": 1,
    "maxItems": 3,
    "items": {"type": "array", "items": {"type": "integer", "minimum": 0, "maximum": 9}, "minItems": 2, "maxItems": 2},
})
add("gh_workflow", "Github", "Medium", {
    "type": "object",
    "properties": {
        "name": {"type": "string", "maxLength": 10},
        "on": {"type": "array", "items": {"enum": ["push", "pull_request", "schedule"]}, "minItems": 1, "maxItems": 2},
        "jobs": {
            "type": "object",
            "patternProperties": {"^[a-z]{1,6}$": {"$ref": "#/$defs/job"}},
            "additionalProperties": False,
            "minProperties": 1,
            "maxProperties": 2,
        },
    },
    "required": ["on", "jobs"],
    "additionalProperties": False,
    "$defs": {
        "job": {
            "type": "object",
            "properties": {
                "runs-on": {"enum": ["ubuntu-latest", "macos-latest"]},
                "steps": {
                    "type": "array",
                    "maxItems": 2,
                    "items": {
                        "type": "object",
                        "properties": {"run": {"type": "string", "maxLength": 12}, "uses": {"type": "string", "pattern": "^[a-z]+/[a-z]+@v[0-9]$"}},
                        "minProperties": 1,
                        "maxProperties": 1,
                        "additionalProperties": False,
                    },
                },
                "timeout-minutes": {"type": "integer", "minimum": 1, "maximum": 360},
            },
            "required": ["runs-on", "steps"],
            "additionalProperties": False,
        }
    },
})

# ---- Kubernetes: API object fragments --------------------------------------------
_K8S_META = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "pattern": "^[a-z0-9]([-a-z0-9]{0,8}[a-z0-9])?$"},
        "namespace": {"type": "string", "maxLength": 10},
        "labels": {"type": "object", "additionalProperties": {"type": "string", "maxLength": 8}, "maxProperties": 2},
    },
    "required": ["name"],
    "additionalProperties": False,
}
add("k8s_namespace", "Kubernetes", "Easy", {
    "type": "object",
    "properties": {"apiVersion": {"const": "v1"}, "kind": {"const": "Namespace"}, "metadata": _K8S_META},
    "required": ["apiVersion", "kind", "metadata"],
    "additionalProperties": False,
})
add("k8s_port", "Kubernetes", "Easy", {
    "type": "object",
    "properties": {
        "containerPort": {"type": "integer", "minimum": 1, "maximum": 65535},
        "protocol": {"enum": ["TCP", "UDP", "SCTP"]},
        "name": {"type": "string", "maxLength": 15},
    },
    "required": ["containerPort", "protocol"],
    "additionalProperties": False,
})
add("k8s_quantity", "Kubernetes", "Trivial", {"type": "string", "pattern": "^[0-9]+(m|Mi|Gi)?$", "maxLength": 8})
add("k8s_env", "Kubernetes", "Easy", {
    "type": "array",
    "maxItems": 3,
    "items": {
        "type": "object",
        "properties": {"name": {"type": "string", "pattern": "^[A-Z_]{1,8}$"}, "value": {"type": "string", "maxLength": 8}},
        "required": ["name", "value"],
        "additionalProperties": False,
    },
})
_CONTAINER_FIELDS = {
    f"field{i:02d}": ({"type": "integer", "minimum": 0, "maximum": i} if i % 3 == 0 else {"type": "boolean"} if i % 3 == 1 else {"type": "string", "maxLength": 4})
    for i in range(40)
}
# 40 generated properties push this object into the Hard tier
add("k8s_container_wide", "Kubernetes", "Hard", {
    "type": "object",
    "properties": {"name": {"type": "string", "maxLength": 6}, "image": {"type": "string", "pattern": "^[a-z]+:[0-9]+$"}, **_CONTAINER_FIELDS},
    "required": ["name", "image"],
    "additionalProperties": False,
})
add("k8s_probe", "Kubernetes", "Easy", {
    "type": "object",
    "properties": {
        "httpGet": {
            "type": "object",
            "properties": {"path": {"type": "string", "pattern": "^/[a-z]{0,8}$"}, "port": {"type": "integer", "minimum": 1, "maximum": 65535}, "scheme": {"enum": ["HTTP", "HTTPS"]}},
            "required": ["path", "port"],
            "additionalProperties": False,
        },
        "initialDelaySeconds": {"type": "integer", "minimum": 0, "maximum": 600},
        "periodSeconds": {"type": "integer", "minimum": 1, "maximum": 600},
        "failureThreshold": {"type": "integer", "minimum": 1, "maximum": 10},
    },
    "required": ["httpGet"],
    "additionalProperties": False,
})

# ---- Snowplow: self-describing event schemas ---------------------------------------
add("sp_page_view", "Snowplow", "Easy", {
    "type": "object",
    "properties": {"url": {"type": "string", "format": "uri", "maxLength": 24}, "title": {"type": ["string", "null"], "maxLength": 12}},
    "required": ["url"],
    "additionalProperties": False,
})
add("sp_link_click", "Snowplow", "Easy", {
    "type": "object",
    "properties": {
        "targetUrl": {"type": "string", "maxLength": 20, "minLength": 1},
        "elementId": {"type": "string", "maxLength": 8},
        "elementClasses": {"type": "array", "items": {"type": "string", "maxLength": 6}, "maxItems": 2},
    },
    "required": ["targetUrl"],
    "additionalProperties": False,
})
add("sp_geo", "Snowplow", "Easy", {
    "type": "object",
    "properties": {
        "latitude": {"type": "number"},
        "longitude": {"type": "number"},
        "altitude": {"type": ["number", "null"]},
        "speed": {"type": ["number", "null"]},
    },
    "required": ["latitude", "longitude"],
    "additionalProperties": False,
})
add("sp_session", "Snowplow", "Easy", {
    "type": "object",
    "properties": {
        "userId": {"type": "string", "format": "uuid"},
        "sessionIndex": {"type": "integer", "minimum": 0, "maximum": 2147483647},
        "storageMechanism": {"enum": ["SQLITE", "COOKIE_1", "COOKIE_3", "LOCAL_STORAGE"]},
    },
    "required": ["userId", "sessionIndex", "storageMechanism"],
    "additionalProperties": False,
})
add("sp_timing", "Snowplow", "Easy", {
    "type": "object",
    "properties": {"category": {"type": "string", "maxLength": 8}, "variable": {"type": "string", "maxLength": 8}, "timing": {"type": "integer", "minimum": 0}},
    "required": ["category", "variable", "timing"],
    "additionalProperties": False,
})
add("sp_consent", "Snowplow", "Easy", {
    "type": "object",
    "properties": {
        "basisForProcessing": {"enum": ["consent", "contract", "legal_obligation"]},
        "consentScopes": {"type": "array", "items": {"type": "string", "maxLength": 8}, "minItems": 1, "maxItems": 2},
        "expiry": {"type": ["string", "null"], "format": "date-time"},
    },
    "required": ["basisForProcessing", "consentScopes"],
    "additionalProperties": False,
})
add("sp_screen", "Snowplow", "Easy", {
    "type": "object",
    "properties": {"name": {"type": "string", "maxLength": 10}, "id": {"type": "string", "format": "uuid"}, "type": {"type": "string", "maxLength": 6}},
    "required": ["name", "id"],
    "additionalProperties": False,
})

# ---- WashingtonPost: content objects ------------------------------------------------
add("wp_byline", "WashingtonPost", "Easy", {
    "type": "object",
    "properties": {
        "type": {"const": "author"},
        "name": {"type": "string", "maxLength": 12},
        "org": {"type": "string", "maxLength": 10},
    },
    "required": ["type", "name"],
    "additionalProperties": False,
})
add("wp_image", "WashingtonPost", "Easy", {
    "type": "object",
    "properties": {
        "type": {"const": "image"},
        "url": {"type": "string", "format": "uri", "maxLength": 24},
        "width": {"type": "integer", "minimum": 1, "maximum": 4096},
        "height": {"type": "integer", "minimum": 1, "maximum": 4096},
        "caption": {"type": "string", "maxLength": 16},
    },
    "required": ["type", "url", "width", "height"],
    "additionalProperties": False,
})
add("wp_story", "WashingtonPost", "Medium", {
    "type": "object",
    "properties": {
        "type": {"const": "story"},
        "headlines": {"type": "object", "properties": {"basic": {"type": "string", "maxLength": 16}}, "required": ["basic"], "additionalProperties": False},
        "credits": {"type": "array", "items": {"$ref": "#/$defs/credit"}, "maxItems": 2},
        "taxonomy": {
            "type": "object",
            "properties": {"tags": {"type": "array", "items": {"type": "string", "maxLength": 8}, "maxItems": 3}, "primary_section": {"type": "string", "maxLength": 10}},
            "additionalProperties": False,
        },
        "publish_date": {"type": "string", "format": "date-time"},
    },
    "required": ["type", "headlines"],
    "additionalProperties": False,
    "$defs": {"credit": {"type": "object", "properties": {"name": {"type": "string", "maxLength": 8}, "role": {"enum": ["author", "photographer"]}}, "required": ["name"], "additionalProperties": False}},
})
add("wp_locale", "WashingtonPost", "Trivial", {"type": "string", "pattern": "^[a-z]{2}-[A-Z]{2}$"})

# ---- JsonSchemaStore: tool configuration files ---------------------------------------
add("ss_editorconfig", "JsonSchemaStore", "Easy", {
    "type": "object",
    "properties": {
        "indent_style": {"enum": ["tab", "space"]},
        "indent_size": {"type": "integer", "minimum": 1, "maximum": 8},
        "end_of_line": {"enum": ["lf", "crlf", "cr"]},
        "charset": {"enum": ["utf-8", "latin1"]},
    },
    "additionalProperties": False,
})
add("ss_prettier", "JsonSchemaStore", "Easy", {
    "type": "object",
    "properties": {
        "semi": B,
        "singleQuote": B,
        "tabWidth": {"type": "integer", "minimum": 0, "maximum": 8},
        "trailingComma": {"enum": ["none", "es5", "all"]},
        "printWidth": {"type": "integer", "minimum": 40, "maximum": 200},
    },
    "additionalProperties": False,
    "minProperties": 1,
})
add("ss_tsconfig", "JsonSchemaStore", "Medium", {
    "type": "object",
    "properties": {
        "compilerOptions": {
            "type": "object",
            "properties": {
                "target": {"enum": ["es5", "es2015", "es2020", "esnext"]},
                "module": {"enum": ["commonjs", "esnext", "nodenext"]},
                "strict": B,
                "outDir": {"type": "string", "pattern": "^\\./[a-z]{1,6}$"},
                "lib": {"type": "array", "items": {"enum": ["dom", "es2020"]}, "maxItems": 2},
            },
            "additionalProperties": False,
        },
        "include": {"type": "array", "items": {"type": "string", "maxLength": 10}, "maxItems": 2},
        "exclude": {"type": "array", "items": {"type": "string", "maxLength": 10}, "maxItems": 2},
    },
    "required": ["compilerOptions"],
    "additionalProperties": False,
})
add("ss_lerna", "JsonSchemaStore", "Easy", {
    "type": "object",
    "properties": {
        "version": {"type": "string", "pattern": "^([0-9]+\\.[0-9]+\\.[0-9]+|independent)$"},
        "npmClient": {"enum": ["npm", "yarn", "pnpm"]},
        "packages": {"type": "array", "items": {"type": "string", "maxLength": 10}, "maxItems": 2},
    },
    "required": ["version"],
    "additionalProperties": False,
})
add("ss_dependabot", "JsonSchemaStore", "Easy", {
    "type": "object",
    "properties": {
        "version": {"const": 2},
        "updates": {
            "type": "array",
            "minItems": 1,
            "maxItems": 2,
            "items": {
                "type": "object",
                "properties": {
                    "package-ecosystem": {"enum": ["npm", "pip", "cargo", "github-actions"]},
                    "directory": {"type": "string", "pattern": "^/[a-z]{0,6}$"},
                    "schedule": {
                        "type": "object",
                        "properties": {"interval": {"enum": ["daily", "weekly", "monthly"]}},
                        "required": ["interval"],
                        "additionalProperties": False,
                    },
                },
                "required": ["package-ecosystem", "directory", "schedule"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["version", "updates"],
    "additionalProperties": False,
})

# ---- fixed-key objects: every key is forced, exercising fast-forward --------------
add("ff_fixed_pair", "Fixed", "Easy", {
    "type": "object",
    "properties": {"first_name": {"type": "string", "maxLength": 6}, "last_name": {"type": "string", "maxLength": 6}},
    "required": ["first_name", "last_name"],
    "additionalProperties": False,
})
add("ff_fixed_record", "Fixed", "Easy", {
    "type": "object",
    "properties": {
        "identifier": {"type": "integer", "minimum": 0, "maximum": 999},
        "is_active": B,
        "category": {"const": "customer"},
    },
    "required": ["identifier", "is_active", "category"],
    "additionalProperties": False,
})
add("ff_fixed_nested", "Fixed", "Easy", {
    "type": "object",
    "properties": {
        "location": {
            "type": "object",
            "properties": {"latitude": I, "longitude": I},
            "required": ["latitude", "longitude"],
            "additionalProperties": False,
        },
        "accuracy_meters": {"type": "integer", "minimum": 0, "maximum": 100},
    },
    "required": ["location", "accuracy_meters"],
    "additionalProperties": False,
})
add("ff_fixed_status", "Fixed", "Easy", {
    "type": "object",
    "properties": {"status_code": {"enum": ["ok", "error"]}, "retry_after_seconds": {"type": "integer", "minimum": 0, "maximum": 60}},
    "required": ["status_code", "retry_after_seconds"],
    "additionalProperties": False,
})


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "src" / "jsoncd" / "data" / "corpus")
    args = ap.parse_args(argv)
    bad = [(sid, tier, count_fields(s), assign_tier(count_fields(s)).value) for sid, _, tier, s in ENTRIES if assign_tier(count_fields(s)).value != tier]
    if bad:
        for row in bad:
            print("label mismatch:", row, file=sys.stderr)
        return 1
    if len({sid for sid, *_ in ENTRIES}) != len(ENTRIES):
        print("duplicate source id", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    for old in args.out.glob("*.json"):
        old.unlink()
    meta = {}
    for sid, dataset, tier, schema in ENTRIES:
        (args.out / f"{sid}.json").write_text(json.dumps(schema, indent=2) + "\n", "utf-8")
        meta[sid] = {"dataset": dataset, "tier": tier}
    (args.out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {len(ENTRIES)} schemas to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
