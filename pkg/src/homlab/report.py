"""Check results and the JSON verification report."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import jsonschema

SCHEMA_VERSION = "1"
PASS, FAIL, SKIPPED = "pass", "fail", "skipped-budget"
MAX_WITNESSES = 10


@dataclass
class Check:
    name: str
    status: str
    expected: Any
    actual: Any
    certification: str = "exact"
    millis: int = 0
    primes: list[int] = field(default_factory=list)
    #: number of exact coefficient certificates re-verified by multiplication
    certificates: int = 0
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return asdict(self)


def make_check(name: str, expected, actual, certification: str = "exact", primes=(), certificates: int = 0,
               witnesses=(), ok: bool | None = None) -> Check:
    """Build a check whose status is ``expected == actual`` unless ``ok`` is given."""
    ok = (expected == actual) if ok is None else ok
    return Check(name, PASS if ok else FAIL, _jsonable(expected), _jsonable(actual), certification,
                 0, list(primes), certificates, [str(w) for w in list(witnesses)[:MAX_WITNESSES]])


def skipped(name: str, reason: str) -> Check:
    return Check(name, SKIPPED, None, reason, "exact")


def count_check(name: str, total: int, failures: list, certification: str = "exact", primes=(),
                certificates: int = 0) -> Check:
    """Pass iff no failures among ``total`` instances."""
    return make_check(name, {"instances": total, "failures": 0},
                      {"instances": total, "failures": len(failures)}, certification, primes,
                      certificates, failures)


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "config", "checks", "summary"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "status", "expected", "actual", "certification", "millis"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": [PASS, FAIL, SKIPPED]},
                    "expected": {},
                    "actual": {},
                    "certification": {"enum": ["exact", "modular"]},
                    "millis": {"type": "integer", "minimum": 0},
                    "primes": {"type": "array", "items": {"type": "integer"}},
                    "certificates": {"type": "integer", "minimum": 0},
                    "witnesses": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "summary": {
            "type": "object",
            "additionalProperties": False,
            "required": ["total", "passed", "failed", "skipped"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed", "skipped")},
        },
    },
}


@dataclass
class Report:
    config: dict
    checks: list[Check]

    @property
    def summary(self) -> dict:
        return {
            "total": len(self.checks),
            "passed": sum(c.status == PASS for c in self.checks),
            "failed": sum(c.status == FAIL for c in self.checks),
            "skipped": sum(c.status == SKIPPED for c in self.checks),
        }

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_json(self) -> dict:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary,
        }
        jsonschema.validate(doc, REPORT_SCHEMA)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def strip_timing(doc: dict) -> dict:
    """Copy of a report document with all millis fields zeroed."""
    out = json.loads(json.dumps(doc))
    for c in out["checks"]:
        c["millis"] = 0
    return out
