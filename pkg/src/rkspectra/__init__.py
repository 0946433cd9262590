"""Rudin-Keisler lattices and countable-model counts for quite o-minimal Ehrenfeucht theories."""

from .catalog import (
    CountReport,
    DecompositionReport,
    InconsistentReport,
    LimitTerm,
    NodeCoord,
    TheorySignature,
    build_t1,
    build_t2,
    build_theory,
    closed_form_counts,
    compose_counts,
    counts_from_preorder,
    decomposition_report,
    format_identity,
    identify,
    il_closed_form,
    total_limit_count,
    validate_count,
)
from .oracle import (
    EnumerationBudgetExceeded,
    Kind,
    ModelDescriptor,
    T1Pattern,
    T2Pattern,
    classify,
    enumerate_models,
    node_of,
    oracle_counts,
)
from .poset import (
    IsoWitness,
    LabeledPreorder,
    PreorderError,
    are_isomorphic,
    hasse_edges,
    make_preorder,
    pareto_product,
    quotient_rk,
    verify_witness,
)

__version__ = "0.1.0"
