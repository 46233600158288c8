"""Thin irregular gasket approximations: geometry, energies, scales, walks.

The package builds finite-depth approximations of planar gaskets obtained
by keeping only the boundary cells of repeated l-fold triangle subdivision,
and computes the discrete objects attached to them: graph metrics and cell
measures, Dirichlet energies and harmonic extensions, effective
resistances, energy measures with their singularity statistics, piecewise
space-time scale functions, realization of prescribed scales, and random
walk diagnostics.
"""

from .errors import (BudgetError, DomainError, GasketError, RealizationError,
                     SequenceError, SolveError)
from .forms import (DiscreteForm, HarmonicMatrix, HarmonicSpec, base_energy,
                    discrete_form, extension_ratio_check, harmonic_extend,
                    harmonic_matrix, matrix_stack, matrix_stack_exact,
                    one_subdivision_trace)
from .geometry import (ApproximationGraph, BallMass, CellMeasure, LatticePoint,
                       apply_contraction, ball_mass, boundary_cells,
                       build_graph, cell_neighborhood, corner, euclidean_sq,
                       geodesic_distance, geodesic_hops, graph_to_json,
                       index_to_word, interior_letters, is_cell_index,
                       metric_ratio_bounds_ok, neighborhood_vertex_ids,
                       render_svg, uniform_mass, word_to_index, words)
from .measures import (AddressSample, CertificateReport, DivergenceReport,
                       SINGULARITY_GAP, bhattacharyya_children,
                       children_sum_ceiling, divergence_statistic,
                       energy_measure, singularity_certificate)
from .realization import (CriterionParams, EtaFunction, RealizationResult,
                          comparability_report, compose_params,
                          elementary_params, eta_doubling_check,
                          growth_criterion_check, realize_sequence,
                          slow_decay_eta, summability_report)
from .resistance import (ResistanceResult, ResistanceSolver, corner_resistance,
                         corner_trace, effective_resistance, ring_reduce)
from .scales import (BetaBundle, PiecewiseScale, beta_bundle, build_scale,
                     comparison_checks, doubling_check, knot_continuity_check,
                     mass_exponent, product_identity_check,
                     quadratic_envelope_check, resistance_exponent,
                     same_segment_check, scale_triple)
from .sequence import (LevelSequence, cell_count, harmonic_weight,
                       resistance_ratio, time_factor, walk_exponent)
from .walks import (HittingStats, WalkConfig, commute_time_check,
                    exit_time_profile, hitting_time)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
