"""Tolerance ladder shared by every module.

All thresholds used to accept or reject a numerical result live here so
that a reviewer can audit them in one place.
"""

#: Plain floating-point arithmetic (metric symmetry, exact zero checks).
ARITHMETIC = 1e-12
#: Geometric residuals: curvature symmetries, connection identities, isometry.
GEOMETRIC = 1e-8
#: Slack of an inequality that is a theorem; below ``-SLACK`` is a violation.
SLACK = 1e-7
#: Detection of equality cases (mixed totally geodesic, equal traces, ...).
EQUALITY = 1e-5

#: Orthonormality of constructed frames.
ORTHONORMAL = 1e-10
#: Pullback metric vs. domain metric.
ISOMETRY = 1e-8
#: Gram determinant below which two vectors do not span a plane.
DEGENERATE_PLANE = 1e-12
#: Norm of the mean curvature vector below which no normal rotation happens.
MEAN_DIRECTION = 1e-10
#: H^2 below which a scenario counts as minimal.
MINIMAL_H2 = 1e-10
