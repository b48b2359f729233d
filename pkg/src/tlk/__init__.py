"""Team logic toolkit: first-order team semantics over finite structures.

The package exposes four layers:

* :mod:`tlk.syntax` / :mod:`tlk.structures` - formulas, vocabularies,
  teams, finite structures and Kripke models;
* :mod:`tlk.evaluator` - direct model checking by the semantic clauses;
* :mod:`tlk.so_bridge` / :mod:`tlk.mtl_bridge` - the compilation into
  (sparse) second-order logic with its independent evaluator, and the
  standard translation of modal team logic with its reductions;
* :mod:`tlk.normal_form` / :mod:`tlk.solver` - disjunctive normal form,
  the nine rewrite laws, and bounded satisfiability/validity search.
"""

from .evaluator import (
    Budget,
    BudgetExceeded,
    EvalStats,
    eval_fo,
    eval_hook,
    eval_ml,
    eval_mtl,
    eval_team,
)
from .mtl_bridge import (
    ReducedInstance,
    interpret_kripke,
    kripke_vocabulary,
    lift_team,
    reduce_ptl_mc_to_fo_mc,
    reduce_ptl_sat_to_mc,
    reverse_interpret,
    standard_translation,
)
from .normal_form import (
    DNF,
    Disjunct,
    LAWS,
    apply_law,
    build_gamma,
    dnf_expand,
    reconstruct,
)
from .so_bridge import (
    EMPTY_SO_ASSIGNMENT,
    FunValue,
    RelValue,
    SOAssignment,
    eval_so,
    parse_so_assignment,
    sufficient_bound,
    team_relation,
    to_nnf,
    translate_eta,
    translate_zeta,
)
from .solver import (
    Counterexample,
    ResourceExhausted,
    Satisfiable,
    UnsatUpTo,
    ValidUpTo,
    sat_bounded,
    sat_fo2,
    valid_bounded,
)
from .structures import (
    Assignment,
    EMPTY_ASSIGNMENT,
    KripkeStructure,
    ModelFile,
    Structure,
    Team,
    duplicate,
    eval_term,
    parse_model_file,
    single_predicate_structure,
    successor_teams,
    supplement,
    team_image,
    team_restrict,
)
from .syntax import (
    DependencyRegistry,
    DependencySignature,
    Formula,
    ParseError,
    SparseBound,
    UnknownDependencyError,
    Vocabulary,
    format_formula,
    free_vars,
    modal_depth,
    parse,
    parse_vocabulary,
    pred_names,
    prop_names,
    quantifier_rank,
    size,
    width,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Budget",
    "BudgetExceeded",
    "Counterexample",
    "DNF",
    "DependencyRegistry",
    "DependencySignature",
    "Disjunct",
    "EMPTY_ASSIGNMENT",
    "EMPTY_SO_ASSIGNMENT",
    "EvalStats",
    "Formula",
    "FunValue",
    "KripkeStructure",
    "LAWS",
    "ModelFile",
    "ParseError",
    "ReducedInstance",
    "RelValue",
    "ResourceExhausted",
    "SOAssignment",
    "Satisfiable",
    "SparseBound",
    "Structure",
    "Team",
    "UnknownDependencyError",
    "UnsatUpTo",
    "ValidUpTo",
    "Vocabulary",
    "apply_law",
    "build_gamma",
    "dnf_expand",
    "duplicate",
    "eval_fo",
    "eval_hook",
    "eval_ml",
    "eval_mtl",
    "eval_so",
    "eval_team",
    "eval_term",
    "format_formula",
    "free_vars",
    "interpret_kripke",
    "kripke_vocabulary",
    "lift_team",
    "modal_depth",
    "parse",
    "parse_model_file",
    "parse_so_assignment",
    "parse_vocabulary",
    "pred_names",
    "prop_names",
    "quantifier_rank",
    "reconstruct",
    "reduce_ptl_mc_to_fo_mc",
    "reduce_ptl_sat_to_mc",
    "reverse_interpret",
    "sat_bounded",
    "sat_fo2",
    "single_predicate_structure",
    "size",
    "standard_translation",
    "successor_teams",
    "sufficient_bound",
    "supplement",
    "team_image",
    "team_relation",
    "team_restrict",
    "to_nnf",
    "translate_eta",
    "translate_zeta",
    "valid_bounded",
    "width",
]
