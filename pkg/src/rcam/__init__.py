"""Reversible evaluation of closed weak call-by-value lambda terms.

The pipeline: parse a term, crumble it into a flat environment, run the
machine forward (every step logged as an O(1) history record), and run the
history backward to restore the initial state exactly.
"""

from .crumble import (
    Binder,
    Bite,
    BoundVar,
    Crumble,
    Entry,
    EnvRef,
    IdGen,
    LamGen,
    LamId,
    Name,
    VarApp,
    check_well_named,
    cr_step,
    crumble_translate,
    env_measures,
    fv_env,
    max_body_length,
    read_back,
    render_crumble,
)
from .gen import identity_chain, random_closed_term, random_closed_terms
from .machine import (
    MachineState,
    OpenCrumbleError,
    StepCounters,
    check_forward_deterministic,
    init,
    read_back_state,
    run_backward,
    run_forward,
    step_backward,
    step_forward,
    structural_image,
)
from .parser import ParseError, parse, print_term
from .serialize import state_from_snapshot, state_snapshot
from .terms import (
    App,
    FuelExhausted,
    Lam,
    OpenTermError,
    Term,
    Var,
    alpha_eq,
    free_vars,
    normalize_beta_v,
    size_term,
    step_beta_v,
)

__all__ = [name for name in dir() if not name.startswith("_")]
