"""Streaming register transducers over linear groups.

Machines read data words (label, value) one letter at a time, compare the
value with their registers, update the registers and emit one letter per
input. The package covers execution, closure constructions, the trail
abstraction, and decision procedures for functionality, inclusion and
reactivity, cross-checked by a brute-force oracle.
"""
__version__ = "0.1.0"

from .closure import compose, compose_add_free, intersection, union
from .constraints import (
    CgWeight,
    ConstraintGraph,
    Term,
    build_constraint_graph,
    find_negative_cycle,
    has_negative_cycle,
    solve_assignment,
)
from .decide import (
    UnsupportedMachine,
    Witness,
    WitnessReport,
    check_functionality,
    check_inclusion,
    check_reactivity,
    extension_machine,
    witness_bound,
)
from .domain import (
    EQ,
    GT,
    INTEGERS,
    LT,
    RATIONALS,
    GroupDescriptor,
    IncompatibleGroups,
    compare,
    data_word,
    lex,
    project_positions,
    unzip,
    zip_words,
)
from .execution import Configuration, Run, Stream, Stuck, complete_runs, enabled, run_word, stream
from .fixtures import (
    fixture_counter_machine,
    fixture_dfa_complement,
    fixture_filtering,
    fixture_relabeler,
    fixture_sampling,
    fixture_sum,
)
from .machine import (
    ADD,
    NEW,
    OLD,
    SILENT,
    InvalidMachine,
    Srt,
    SubclassReport,
    Transition,
    classify,
    make_srt,
    validate,
)
from .oracle import (
    OracleCapExceeded,
    OracleConfig,
    enumerate_semantics,
    oracle_compose,
    oracle_functional,
    oracle_included,
    oracle_reactive,
)
from .trails import (
    TrailAutomaton,
    build_trail_automaton,
    corresponding_trail,
    is_dead,
    ordered_bell,
    p_set,
    reconstruct_register,
    weak_orderings,
)
