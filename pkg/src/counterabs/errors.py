"""Exception hierarchy.

Every error raised on purpose by the package derives from ``CounterAbsError``
so the CLI can map it to an exit code.
"""


class CounterAbsError(Exception):
    """Base class for all classified errors."""

    exit_code = 2


class SpecSyntaxError(CounterAbsError):
    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class DuplicateDeclaration(CounterAbsError):
    pass


class FragmentViolation(CounterAbsError):
    pass


class UnknownSymbol(CounterAbsError):
    pass


class SortMismatch(CounterAbsError):
    pass


class MultipleInitCases(CounterAbsError):
    pass


class NonConstantDivisor(CounterAbsError):
    pass


class UnboundSymbol(CounterAbsError):
    pass


class UnboundedExistential(CounterAbsError):
    pass


class BudgetExceeded(CounterAbsError):
    pass


class AtomBudgetExceeded(BudgetExceeded):
    pass


class CellBudgetExceeded(BudgetExceeded):
    pass


class StateBudgetExceeded(BudgetExceeded):
    pass


class SymbolClash(CounterAbsError):
    pass


class UnknownBenchmark(CounterAbsError):
    pass


class SolverError(CounterAbsError):
    exit_code = 3


class SolverNotFound(SolverError):
    pass


class SolverTimeout(SolverError):
    pass


class UnparseableVerdict(SolverError):
    pass
