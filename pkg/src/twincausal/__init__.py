"""Causal effects two ways: the simplified do-calculus with plug-in
estimands, and Bayesian inference on twin (pre/post-intervention) PGMs."""

from .bayes import (
    CausalContrast,
    CptPosterior,
    FrontDoorPosterior,
    abc_nonidentifiable,
    estimate_cpts,
    fit_frontdoor,
    fit_posteriors,
    forward_sample,
    frontdoor_predictive,
    posterior_predictive,
    predictive_distribution,
    truncated_product,
)
from .causal_graph import (
    CausalGraph,
    Mutilation,
    RemoveIncoming,
    RemoveOutgoing,
    VariableDecl,
    d_separated,
    mutilate,
    validate_dag,
)
from .convergence_lab import ConvergenceRow, compare_on_table, run_convergence
from .data_io import CountsTable, EmpiricalJoint, empirical_joint, load_counts, serialize_counts
from .datasets import frontdoor_cpts, load_graph, simpson_table
from .do_engine import (
    DoQuery,
    Estimand,
    Identified,
    NotIdentified,
    evaluate_estimand,
    identify,
    rule_applies,
)
from .graph_dsl import emit_graph, parse_graph
from .twin_builder import TwinPgm, causal_bayes_construct

__version__ = "0.1.0"
