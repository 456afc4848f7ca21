"""One-catalyst membrane systems: model, derivation engine, compilers, explorer."""

from catpsys.multiset import Alphabet, Multiset, MultisetUnderflow, Symbol, parikh
from catpsys.model import (
    Configuration,
    Controlled,
    HERE,
    IN,
    LabelSelection,
    MembraneNode,
    OUT,
    PSystem,
    Plain,
    Target,
    TargetSelection,
    canonicalize,
    membrane_count,
    region_lookup,
    validate_system,
)
from catpsys.engine import (
    RuleInstance,
    StepChoice,
    applicable_rules,
    apply_step,
    enumerate_step_choices,
    is_halting,
    result_of,
)
from catpsys.explore import Bounds, ExplorationReport, compare_sets, explore, sample_run
from catpsys.regmachine import RegisterMachine, rm_explore, rm_step, rm_validate

__version__ = "0.1.0"
