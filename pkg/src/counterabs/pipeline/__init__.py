"""From a validated spec to its counter abstraction."""
from .assign import split_assignments
from .cells import INIT_SCOPE, TRANS_SCOPE, build_cells, counters_as_cell_sums, encode_forall_data
from .project import project_out_cells
from .skolem import CounterMatcher, replace_counters, reverse_skolemize_case
from .system import BuildOptions, CounterSystem, build_counter_system
