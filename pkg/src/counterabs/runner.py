"""Shared plumbing for the command line: targets, builds and benchmark rows."""
from __future__ import annotations

import json
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .benchmarks import NAMES, load_fixture
from .chc import emit_horn
from .errors import SolverError, SolverTimeout
from .frontend import load_spec_file, resolve_formula
from .pipeline.system import BuildOptions, build_counter_system
from .solver import run_solver


@dataclass
class Target:
    spec_file: Path
    property: str | None = None
    bad: str | None = None  # None: the spec's own unsafe section
    init: str | None = None
    expected: str | None = None
    note: str | None = None


def _properties_near(spec_file):
    path = Path(spec_file).parent / "properties.json"
    if not path.exists():
        return []
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)["properties"]


def resolve_target(source, prop=None, unsafe=None, init=None):
    """Locate the spec file and safety goal named on the command line.

    ``source`` is a ``.cf`` path or a shipped benchmark name.  A property
    comes from the ``properties.json`` next to the spec and may redirect to a
    variant spec file (e.g. one carrying an extra switch variable).
    """
    path = Path(source)
    if not path.exists() and source in NAMES:
        path = load_fixture(source).spec_file
    if not path.exists():
        raise FileNotFoundError(f"no such spec file: {source}")
    target = Target(path, bad=unsafe, init=init)
    if prop is not None:
        props = {p["name"]: p for p in _properties_near(path)}
        if prop not in props:
            known = ", ".join(sorted(props)) or "none"
            raise KeyError(f"unknown property {prop!r} for {path} (known: {known})")
        p = props[prop]
        variant = path.parent / p.get("spec", "spec.cf")
        if variant.resolve() != path.resolve() and path.name == "spec.cf":
            target.note = f"property {prop} uses {variant.name}"
            target.spec_file = variant
        target.property = prop
        target.bad = unsafe if unsafe is not None else p["bad"]
        target.init = init if init is not None else p.get("init")
        target.expected = p.get("expected") if unsafe is None and init is None else None
    return target


@dataclass
class Built:
    spec: object
    system: object
    bad: object
    init: object
    build_ms: float


def build_target(target, options=None):
    t0 = time.perf_counter()
    spec = load_spec_file(target.spec_file)
    cs = build_counter_system(spec, options or BuildOptions())
    bad = resolve_formula(spec, target.bad) if target.bad is not None else spec.unsafe
    init = resolve_formula(spec, target.init) if target.init else None
    return Built(spec, cs, bad, init, (time.perf_counter() - t0) * 1000)


def horn_comments(target):
    out = [("spec", target.spec_file.name)]
    if target.property:
        out.append(("property", target.property))
    if target.bad is not None:
        out.append(("bad", target.bad))
    if target.init:
        out.append(("init", target.init))
    return out


# --------------------------------------------------------------- bench rows


@dataclass
class BenchRow:
    benchmark: str
    property: str
    display: str
    build_ms: float = 0.0
    solve_ms: float | None = None
    verdict: str = "n/a"
    expected: str | None = None
    exact: bool | None = None
    error: str | None = None

    @property
    def total_ms(self):
        return self.build_ms + (self.solve_ms or 0.0)

    @property
    def matches(self):
        if self.error:
            return False
        if self.verdict in ("n/a",) or self.expected is None:
            return True
        return self.verdict == self.expected

    def csv_fields(self):
        solve = "" if self.solve_ms is None else f"{self.solve_ms:.3f}"
        exact = "" if self.exact is None else str(self.exact).lower()
        return [self.benchmark, self.property, f"{self.build_ms:.3f}", solve, f"{self.total_ms:.3f}",
                self.verdict if not self.error else "error", exact]


CSV_HEADER = ["benchmark", "property", "build_ms", "solve_ms", "total_ms", "verdict", "exact"]


def bench_row(benchmark, prop, solve=True, solver=None, timeout=60.0, options=None):
    """Build (and optionally solve) one corpus row; failures are recorded, not raised."""
    fx = load_fixture(benchmark)
    p = fx.get_property(prop)
    row = BenchRow(benchmark, prop, p.display, expected=p.expected)
    target = Target(p.spec_file, prop, p.bad, p.init, p.expected)
    try:
        t0 = time.perf_counter()
        built = build_target(target, options)
        horn = emit_horn(built.system, built.bad, built.init, comments=horn_comments(target))
        row.build_ms = (time.perf_counter() - t0) * 1000
        row.exact = built.system.exact
    except Exception as e:  # noqa: BLE001 - the row records it
        row.error = f"{type(e).__name__}: {e}"
        return row
    if not solve:
        return row
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / f"{benchmark}_{prop}.smt2"
        path.write_text(horn.text, encoding="utf-8")
        try:
            res = run_solver(path, solver, timeout)
            row.verdict, row.solve_ms = res.verdict, res.elapsed_ms
        except SolverTimeout:
            row.verdict, row.solve_ms = "timeout", timeout * 1000
        except SolverError as e:
            row.error = f"{type(e).__name__}: {e}"
    return row


TABLE_ORDER = ("srbp", "bbp", "ot")
BUGGY = ("srbp_buggy", "bbp_buggy", "ot_buggy")


def corpus_rows(buggy=False):
    """``(benchmark, property)`` pairs: the twelve safe rows, then optionally the mutants."""
    names = TABLE_ORDER + (BUGGY if buggy else ())
    return [(name, p.name) for name in names for p in load_fixture(name).properties]
