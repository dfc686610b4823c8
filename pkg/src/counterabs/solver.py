"""Running an external SMT/Horn solver as a subprocess."""
from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import time
from dataclasses import dataclass

from .errors import SolverNotFound, SolverTimeout, UnparseableVerdict

SOLVER_ENV = "COUNTERABS_SOLVER"
DEFAULT_SOLVER = "z3 {file}"


@dataclass
class SolverResult:
    verdict: str  # "sat", "unsat" or "unknown"
    elapsed_ms: float
    stdout: str

    @property
    def label(self):
        return describe_verdict(self.verdict)


def describe_verdict(verdict):
    return {
        "sat": "SAFE (invariant found)",
        "unsat": "POSSIBLY UNSAFE (abstraction reaches bad)",
        "unknown": "UNKNOWN",
        "timeout": "TIMEOUT",
    }.get(verdict, verdict.upper())


def solver_command(template=None):
    return template or os.environ.get(SOLVER_ENV) or DEFAULT_SOLVER


def solver_available(template=None):
    argv = shlex.split(solver_command(template).replace("{file}", "x"))
    return bool(argv) and shutil.which(argv[0]) is not None


def run_solver(path, template=None, timeout=60.0):
    """Run the solver on ``path``; ``{file}`` in the template is replaced by the path."""
    cmd = solver_command(template)
    argv = [a.replace("{file}", str(path)) for a in shlex.split(cmd)]
    if "{file}" not in cmd:
        argv.append(str(path))
    t0 = time.perf_counter()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError:
        raise SolverNotFound(f"solver not found: {argv[0]}") from None
    except subprocess.TimeoutExpired:
        raise SolverTimeout(f"solver exceeded {timeout} s") from None
    elapsed = (time.perf_counter() - t0) * 1000
    for line in proc.stdout.splitlines():
        word = line.strip()
        if word in ("sat", "unsat", "unknown"):
            return SolverResult(word, elapsed, proc.stdout)
        if word:
            break
    raise UnparseableVerdict(f"no verdict in solver output: {(proc.stdout + proc.stderr).strip()[:200]!r}")
