"""DSL parsing, validation and floor-division desugaring."""
from .desugar import definition_atoms, derived_constraints, desugar_floor_div
from .model import ArrayId, Case, CounterDef, Derived, Sort, SystemSpec, spec_hash
from .parser import ParsedSpec, parse_formula, parse_spec, print_spec
from .validate import resolve_formula, validate


def load_spec(text, desugar=True):
    """Parse, validate and (by default) desugar DSL source."""
    spec = validate(parse_spec(text))
    spec = spec.with_(source_hash=spec_hash(text))
    return desugar_floor_div(spec) if desugar else spec


def load_spec_file(path, desugar=True):
    with open(path, encoding="utf-8") as fh:
        return load_spec(fh.read(), desugar)
