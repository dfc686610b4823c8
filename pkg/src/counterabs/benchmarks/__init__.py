"""Shipped benchmark corpus: DSL files, properties and expected outputs."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import UnknownBenchmark

ROOT = Path(__file__).resolve().parent
NAMES = ("ot", "ot_buggy", "srbp", "srbp_buggy", "bbp", "bbp_buggy")
_MACRO = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class Property:
    name: str
    display: str
    spec_file: Path
    bad: str
    init: str | None
    expected: str  # Horn verdict: "sat" (safe) or "unsat"


@dataclass
class BenchmarkFixture:
    name: str
    spec_file: Path
    properties: list = field(default_factory=list)
    expected: dict | None = None
    verified_reference: bool = False

    def get_property(self, name):
        for p in self.properties:
            if p.name == name:
                return p
        raise KeyError(f"{self.name} has no property {name!r} (known: {', '.join(self.property_names)})")

    @property
    def property_names(self):
        return [p.name for p in self.properties]

    def spec_files(self):
        """Every DSL file used by the fixture, main file first."""
        out = [self.spec_file]
        for p in self.properties:
            if p.spec_file not in out:
                out.append(p.spec_file)
        return out

    def expected_texts(self):
        """Expected ``(phi0, iota0, tau0)`` as formula texts with macros expanded.

        ``tau0`` is a list of disjunct texts, each conjoined with the common part.
        """
        if not self.expected or "iota0" not in self.expected:
            return None
        macros = self.expected.get("macros", {})

        def expand(text, depth=0):
            if depth > 20:
                raise ValueError("macro expansion does not terminate")
            out = _MACRO.sub(lambda m: "(" + macros[m.group(1)] + ")", text)
            return out if out == text else expand(out, depth + 1)

        common = expand(self.expected.get("tau0_common", "true"))
        tau = [f"({common}) & ({expand(d)})" for d in self.expected["tau0"]]
        return expand(self.expected.get("phi0", "true")), expand(self.expected["iota0"]), tau


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_fixture(name):
    if name not in NAMES:
        raise UnknownBenchmark(f"unknown benchmark {name!r} (known: {', '.join(NAMES)})")
    d = ROOT / name
    expected = _read_json(d / "expected.json") if (d / "expected.json").exists() else None
    props = [
        Property(p["name"], p.get("display", p["name"]), d / p.get("spec", "spec.cf"), p["bad"], p.get("init"), p["expected"])
        for p in _read_json(d / "properties.json")["properties"]
    ]
    verified = bool(expected and expected.get("verified_reference"))
    return BenchmarkFixture(name, d / "spec.cf", props, expected, verified)


def corpus():
    return [load_fixture(n) for n in NAMES]


__all__ = ["NAMES", "BenchmarkFixture", "Property", "corpus", "load_fixture"]
