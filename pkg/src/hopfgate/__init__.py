"""Structural exclusion of Hopf bifurcation via DSR and DSR² graphs."""

__version__ = "0.1.0"

from .compounds import (
    additive_compound_2,
    build_factors,
    det_compound_via_cb,
    lbar,
    lunder,
    multiplicative_compound,
)
from .dsr import (
    DsrGraph,
    HypothesisError,
    build_dsr,
    build_sr,
    classify_graph,
    enumerate_cycles,
    odd_intersection,
)
from .dsr2 import (
    Dsr2Graph,
    Kind,
    build_dsr2,
    liftings_of,
    project_cycle,
    prune_acyclic,
    remove_pendant_r,
)
from .linalg import (
    DimensionError,
    LinalgError,
    RationalMatrix,
    SignPattern,
    SizeLimitError,
    check_c7_c8,
    det,
    is_p,
    is_p0,
    minor,
    sign_class,
)
from .oracle import Claim, SampleSpec, exhaustive_small, sample_member, verify_claim
from .theorems import (
    BSpec,
    Level,
    Status,
    analyze,
    check_3species,
    check_acyclic,
    check_low_degree,
    connected_family_stability,
    evaluate_conditions,
    spectral_conclusions,
)

__all__ = [
    "BSpec", "Claim", "DimensionError", "Dsr2Graph", "DsrGraph", "HypothesisError", "Kind",
    "Level", "LinalgError", "RationalMatrix", "SampleSpec", "SignPattern", "SizeLimitError",
    "Status", "additive_compound_2", "analyze", "build_dsr", "build_dsr2", "build_factors",
    "build_sr", "check_3species", "check_acyclic", "check_c7_c8", "check_low_degree",
    "classify_graph", "connected_family_stability", "det", "det_compound_via_cb",
    "enumerate_cycles", "evaluate_conditions", "exhaustive_small", "is_p", "is_p0", "lbar",
    "liftings_of", "lunder", "minor", "multiplicative_compound", "odd_intersection",
    "project_cycle", "prune_acyclic", "remove_pendant_r", "sample_member", "sign_class",
    "spectral_conclusions", "verify_claim",
]
