"""mvfix: exact tooling for set-valued fixed-point problems on the rational line.

The package computes Hausdorff-metric hyperspace distances exactly, checks
admissibility of alpha-gated set-valued maps, certifies contraction
inequalities built from simulation-style control functions with exact
counterexamples, runs the constructive orbit iteration, and parses a small
scenario language that bundles all of the above (two example scenarios are
built in).
"""

from .admissibility import (AlphaFn, Branch, MultiMap, alpha_star, apply_map,
                            default_probe, is_alpha_admissible_mv,
                            is_triangular_alpha_admissible_mv,
                            is_triangular_alpha_star_admissible, orbit_chain)
from .certifier import (CertificationReport, PairSource, ViolationRecord,
                        certify_generalized, certify_plain, compute_m)
from .contraction import (ContractionFamily, Grid, SequencePair, builtin_family,
                          check_c_class, check_property_cg, check_zeta_condition_a,
                          check_zeta_condition_b, default_grid, eval_g, eval_zeta,
                          standard_sequence_pairs)
from .errors import (DomainError, EvaluationError, InputError, MvfixError,
                     ParseError, UnsupportedCombinationError)
from .expressions import evaluate, parse_expression, parse_rational, unparse
from .graphspace import (GraphSpace, certify_eg, eg_completeness, eg_continuity,
                         indicator_alpha, is_triangular_edge_preserving)
from .hyperspace import (Piece, Point, PointSet, Space, Witnessed, dist,
                         directed_hausdorff, hausdorff, point_to_set, set_to_set)
from .reports import CheckReport, Witness
from .scenario import (Scenario, builtin_example, emit_scenario, parse_scenario,
                       run_certify, run_check_classes, run_enumerate,
                       run_paper_example, run_solve)
from .solver import (Orbit, analytic_fixed_points, enumerate_fixed_points,
                     iterate, select_next)

__version__ = "0.1.0"
