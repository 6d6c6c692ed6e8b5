"""Curvature of warped-product immersions: hyper-dual differentiation,
metric curvature, second fundamental forms and the Laplacian bounds for
the warping function."""

from .adscalar import Scalar2, DomainError
from .exprlang import parse, evaluate, compile_expr, ExprError
from .geometry import (MetricField, CurvatureAtPoint, block_metric, christoffel, curvature, riemann,
                       sectional, scalar_curvature, ricci, laplacian_paper, gram_schmidt)
from .warped import WarpedProduct, build as warped_product, delta_f_over_f, warp_connection_check
from .ambient import AmbientSpace, ExtremalK, make_ambient, clifford_extrinsic, extremal_sectional, ricci_bound_check
from .immersion import (ImmersionMap, evaluate as evaluate_immersion, second_ff, adapted_frame,
                        mean_curvature, sff_norms, mixed_tg, gauss_residual)
from .chen import (SlackReport, evaluate_point, upper_slack, lower_slack, equality_diagnostics,
                   lemma_check, corollary_slacks, nonexistence_witness)
from . import catalog

__version__ = "0.1.0"
