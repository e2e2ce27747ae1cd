"""Scenario configuration, report serialization, and report diffing.

Configs are flat key = value text (documented key list below); reports are
JSON with a stable schema.  Two runs of the same config produce identical
reports except for the meta.timings subtree, which the differ ignores.

Config keys:
    group   group label, e.g. B2, G2, (Z/2)^2, B2xA1
    m       multiplicities: a constant ("1"), per-class list ("1,0"),
            or labeled ("short=1,long=0")
    cap     degree cap (optional; defaults to d + max invariant degree)
    checks  comma-separated check ids (see `qmcli list-checks`)
    out     report output path (optional)
    arrangement    semicolon-separated covectors for arrangement checks,
                   e.g. "1,0 ; 1,1"
    arrangement_m  per-hyperplane multiplicities, e.g. "1,1"
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1
TOOL_NAME = "quasiinv"
TOOL_VERSION = "0.1.0"


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    group: str | None = None
    multiplicities: str = "1"
    degree_cap: int | None = None
    checks: list[str] = field(default_factory=list)
    output: str | None = None
    arrangement: list[list[int]] | None = None
    arrangement_multiplicities: list[int] | None = None

    def echo(self) -> dict:
        out: dict[str, Any] = {
            "group": self.group,
            "m": self.multiplicities,
            "cap": self.degree_cap,
            "checks": list(self.checks),
        }
        if self.arrangement is not None:
            out["arrangement"] = [list(c) for c in self.arrangement]
            out["arrangement_m"] = list(self.arrangement_multiplicities or [])
        return out


def parse_config_text(text: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "group":
            cfg.group = value
        elif key == "m":
            cfg.multiplicities = value
        elif key == "cap":
            cfg.degree_cap = int(value)
        elif key == "checks":
            cfg.checks = [c.strip() for c in value.split(",") if c.strip()]
        elif key == "out":
            cfg.output = value
        elif key == "arrangement":
            cfg.arrangement = [
                [int(v) for v in part.split(",")]
                for part in value.split(";") if part.strip()]
        elif key == "arrangement_m":
            cfg.arrangement_multiplicities = [int(v) for v in value.split(",")]
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if not cfg.checks:
        raise ConfigError("config must request at least one check")
    return cfg


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def jsonable(value):
    """Recursively convert report values to JSON-stable primitives."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str, float)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


@dataclass
class Report:
    config: dict
    results: list[dict]
    poincare: dict
    timings: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "config": jsonable(self.config),
            "results": jsonable(self.results),
            "poincare": jsonable(self.poincare),
            "meta": {"timings": {k: round(v, 6) for k, v in self.timings.items()}},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def verdicts(self) -> list[str]:
        return [r.get("verdict", "ERROR") for r in self.results]

    def exit_code(self) -> int:
        verdicts = self.verdicts()
        if any(v == "ERROR" for v in verdicts):
            return 2
        if any(v in ("FAIL", "FINDING") for v in verdicts):
            return 1
        return 0

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(
                f"schema version mismatch: {data.get('schema_version')}")
        return cls(config=data.get("config", {}),
                   results=data.get("results", []),
                   poincare=data.get("poincare", {}),
                   timings=data.get("meta", {}).get("timings", {}))


def load_report(path: str) -> Report:
    with open(path, "r", encoding="utf-8") as fh:
        return Report.from_dict(json.load(fh))


_IGNORED_PATHS = (("meta", "timings"),)


def _diff_into(a, b, path: tuple, out: list[dict]) -> None:
    if path in _IGNORED_PATHS:
        return
    if isinstance(a, dict) and isinstance(b, dict):
        for key in sorted(set(a) | set(b)):
            _diff_into(a.get(key), b.get(key), path + (key,), out)
        return
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append({"path": "/".join(map(str, path)),
                        "a": f"list[{len(a)}]", "b": f"list[{len(b)}]"})
            return
        for i, (av, bv) in enumerate(zip(a, b)):
            _diff_into(av, bv, path + (i,), out)
        return
    if a != b:
        out.append({"path": "/".join(map(str, path)), "a": a, "b": b})


def diff_reports(a: Report, b: Report) -> list[dict]:
    """Field-level differences, ignoring timing fields; empty if identical."""
    out: list[dict] = []
    _diff_into(a.to_dict(), b.to_dict(), (), out)
    return out
