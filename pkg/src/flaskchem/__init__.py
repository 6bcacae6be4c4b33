"""Stochastic reactors built from algebras and protocols."""

from .algebra import Algebra, Homomorphism, check_hom_property, eval_protocol, eval_term
from .dist import Distribution, join, sample, tv_distance, unit
from .flask import (
    BudgetExceeded,
    FlaskProcess,
    MarkovMorphism,
    ProtocolMismatch,
    check_naturality,
    check_output_order_invariance,
    markov_morphism,
    run_trajectory,
    step_exact,
    step_exact_single,
    step_sample,
)
from .multiset import Multiset, pick, pushforward, surgery
from .rng import Stream
from .signature import App, OpSymbol, Protocol, Signature, Var, protocol_vars_used, validate_protocol

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "App",
    "BudgetExceeded",
    "Distribution",
    "FlaskProcess",
    "Homomorphism",
    "MarkovMorphism",
    "Multiset",
    "OpSymbol",
    "Protocol",
    "ProtocolMismatch",
    "Signature",
    "Stream",
    "Var",
    "check_hom_property",
    "check_naturality",
    "check_output_order_invariance",
    "eval_protocol",
    "eval_term",
    "join",
    "markov_morphism",
    "pick",
    "protocol_vars_used",
    "pushforward",
    "run_trajectory",
    "sample",
    "step_exact",
    "step_exact_single",
    "step_sample",
    "surgery",
    "tv_distance",
    "unit",
    "validate_protocol",
]
