"""
The warping function and the mixed sectional curvatures
=======================================================

On B x_f F the Laplacian of f (with the geometer's sign) divided by f
equals the sum of sectional curvatures K(e_i ^ e_s) over base directions
e_i, for every unit fiber vector e_s. We check it on the round sphere,
on the flat plane in polar coordinates and on a random-looking product.
"""

import numpy as np

from warpcurv import geometry as geo
from warpcurv import warped

line = geo.MetricField.from_exprs

s2 = warped.build(line(["th"], ["1"], [(0.2, 2.9)]), line(["ph"], ["1"], [(0.1, 6.0)]), "sin(th)")
plane = warped.build(line(["r"], ["1"], [(0.3, 3.0)]), line(["th"], ["1"], [(0.1, 6.0)]), "r")

base = line(["t", "u"], [["1.2 + 0.3 * sin(t * u)", "0.1 * cos(t)"], ["0.1 * cos(t)", "1 + 0.2 * u^2"]],
            [(-1, 1), (-1, 1)])
fiber = line(["s", "w"], ["1", "1 + 0.5 * sin(s)^2"], [(-1, 1), (-1, 1)])
odd = warped.build(base, fiber, "exp(0.4 * cos(t + 2 * u))")

for name, wp, p in [("S^2", s2, [1.0, 2.0]), ("polar plane", plane, [1.5, 0.3]),
                    ("product", odd, [0.3, -0.4, 0.1, 0.7])]:
    print(f"{name:12s} Lf/f = {warped.delta_f_over_f(wp, p): .12f}   mixed sums =",
          np.round(warped.mixed_plane_sums(wp, p), 12))

# the connection rule: nabla_X V = (X f / f) V for X on the base and V on the fiber
X = np.array([0.6, -0.8, 0.0, 0.0])
V = np.array([0.0, 0.0, 1.0, 2.0])
print("\nconnection residual:", warped.warp_connection_check(odd, [0.3, -0.4, 0.1, 0.7], X, V))
