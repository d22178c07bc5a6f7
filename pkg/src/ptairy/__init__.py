"""Spectral locus of the complex Airy operator -y''/eps + i x y on [-1, 1]."""

from .airyfn import airy_all, eval_airy, eval_solution, eval_u, eval_v
from .bounds import compute_constants, similarity_threshold, turning_bounds
from .criticals import asymptotic_table, build_table, eigenfunction_residual
from .detcore import KNOT, det, det_jet, det_on_knot, xi_map
from .locus import export_real_locus, find_turning, gamma_to_locus, trace_branch, trace_gamma
from .oracle import DiscretizationConfig, Scheme, cross_check, oracle_spectrum
from .roots import newton_complex, ray_zero, solve_critical

__version__ = "0.1.0"
