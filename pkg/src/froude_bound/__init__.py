"""Computer-checked upper bound for the Froude number of solitary gravity water waves."""

__version__ = "0.1.0"

from .case_close import close_bound, close_params, feasibility, jbar
from .case_far import far_case_bound
from .case_moderate import dj_dhat, j1, j2, j_total, moderate_bound, verify_chain, verify_monotone
from .core import (
    CaseBound,
    ConjugatePair,
    StreamState,
    bernoulli_from_depth,
    conjugate_depths,
    flow_force,
    froude,
    script_S,
    starr_check,
    verify_lemma_constants,
)
from .numerics import GridCertificate, GridSpec, RootResult, certify_negative, find_root, integrate_adaptive

__all__ = [
    "CaseBound",
    "ConjugatePair",
    "GridCertificate",
    "GridSpec",
    "RootResult",
    "StreamState",
    "bernoulli_from_depth",
    "certify_negative",
    "close_bound",
    "close_params",
    "conjugate_depths",
    "dj_dhat",
    "far_case_bound",
    "feasibility",
    "find_root",
    "flow_force",
    "froude",
    "integrate_adaptive",
    "j1",
    "j2",
    "j_total",
    "jbar",
    "moderate_bound",
    "script_S",
    "starr_check",
    "verify_chain",
    "verify_lemma_constants",
    "verify_monotone",
]
