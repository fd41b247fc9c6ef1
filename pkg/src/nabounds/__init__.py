"""Exact adversary and minimax lower bounds for nonadaptive quantum query
complexity of finite black-box promise problems."""

from .adversary import (BoundReport, WeightFunction, WeightScheme, c_epsilon,
                        eval_direct_nonadaptive, eval_probabilistic, eval_weighted_adversary,
                        lift_for_comparison, scheme_from_function, unweighted_bound,
                        validate_weight_function, validate_weight_scheme, weight_stats)
from .blackbox import (PairRelation, Problem, RelationStats, differ_indices, generate,
                       relation_stats)
from .lp import LinearProgram, LPSolution, solve, verify
from .minimax import (AdaptiveQueryProfile, DualityReport, QueryDistribution, compute_DL,
                      compute_L, compute_PL_with_certificate, eval_adaptive_minimax,
                      eval_DL_given_p, eval_PL_given_w, verify_duality)
from .superquery import (LiftedWeight, SuperProblem, build_super_problem, check_facteurk,
                         coarsen_outputs, lift_weight)

__version__ = "0.1.0"
