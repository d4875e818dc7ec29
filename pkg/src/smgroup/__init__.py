"""S-machines, the groups G_N(S) and H_N(S), and word problems by relator insertion."""

from __future__ import annotations

__version__ = "0.1.0"

from .words import Alphabet, CyclicWord, Letter, Word, concat_reduce, cyclic_canonical, free_reduce, invert
from .search import BudgetHit, SearchBudget
from .smachine import (
    AdmissibleWord,
    Computation,
    Hardware,
    RulePart,
    SMachine,
    SRule,
    apply_rule,
    invert_rule,
    parse_admissible,
    run_history,
    search_reachable,
    validate_hardware,
    validate_rule,
)
from .presentation import GroupPresentation, relation_census
from .gn import KappaParams, compile_gn, kappa_word
from .hn import EmbeddingProfile, compile_hn, gb_presentation, sigma_word, validate_sigma_shape
from .wordproblem import (
    Derivation,
    decide_trivial,
    derive_from_computation,
    dehn_profile,
    disc_relator,
    geodesic_length,
    min_area,
    verify_derivation,
)
from .metrics import WeightScheme, compute_constants, distortion_trial, preceq_check, weighted_length

__all__ = [
    "AdmissibleWord",
    "Alphabet",
    "BudgetHit",
    "Computation",
    "CyclicWord",
    "Derivation",
    "EmbeddingProfile",
    "GroupPresentation",
    "Hardware",
    "KappaParams",
    "Letter",
    "RulePart",
    "SMachine",
    "SRule",
    "SearchBudget",
    "WeightScheme",
    "Word",
    "apply_rule",
    "compile_gn",
    "compile_hn",
    "compute_constants",
    "concat_reduce",
    "cyclic_canonical",
    "decide_trivial",
    "dehn_profile",
    "derive_from_computation",
    "disc_relator",
    "distortion_trial",
    "free_reduce",
    "gb_presentation",
    "geodesic_length",
    "invert",
    "invert_rule",
    "kappa_word",
    "min_area",
    "parse_admissible",
    "preceq_check",
    "relation_census",
    "run_history",
    "search_reachable",
    "sigma_word",
    "validate_hardware",
    "validate_rule",
    "validate_sigma_shape",
    "verify_derivation",
    "weighted_length",
]
