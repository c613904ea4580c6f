"""Boolean clones: membership, identification, thresholds."""

from ._clonelab import (
    CapacityError,
    Clone,
    InputError,
    LogicError,
    basis_clone,
    choose_depth,
    classify,
    clone_of,
    convert,
    identify_restricted,
    member,
    pick_N,
    random_threshold,
    sigma,
    synthesize,
    table,
    threshold_clone,
)

__all__ = [
    "CapacityError",
    "Clone",
    "InputError",
    "LogicError",
    "basis_clone",
    "choose_depth",
    "classify",
    "clone_of",
    "convert",
    "identify_restricted",
    "member",
    "pick_N",
    "random_threshold",
    "sigma",
    "synthesize",
    "table",
    "threshold_clone",
]
