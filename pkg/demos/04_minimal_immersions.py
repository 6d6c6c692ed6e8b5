"""
Minimal warped products and the curvature envelope
==================================================

For a minimal immersion the upper bound reduces to Lf/f <= n1 * sup K.
Replacing sup K by a global constant c-bar gives a test that can rule
immersions out: if Lf/f > n1 c-bar somewhere, no minimal immersion
exists. Here every catalog example passes, and the non-minimal torus is
refused.
"""

import itertools

import numpy as np

from warpcurv import catalog, chen


def grid(imm, k=2):
    axes = [lo + (np.arange(k) + 0.5) * (hi - lo) / k for lo, hi in imm.domain.total.box]
    return [np.array(p) for p in itertools.product(*axes)]


for imm in [catalog.clifford_identity(2, 2), catalog.clifford_embedded(2, 3),
            catalog.clifford_subtorus(3, 2, 2, 1), catalog.equator(3),
            catalog.product_space_forms_identity((2, 2), (1.0, -1.0))]:
    rep = chen.nonexistence_witness(imm, grid(imm))
    print(f"{imm.name:30s} n1={rep.n1}  c_bar={rep.c_bar:4.1f}  max Lf/f={rep.max_delta: .2e}  ok={rep.consistent}")

# corollary slacks use the envelope in place of the restricted extremes
imm = catalog.clifford_identity(2, 2)
r = chen.evaluate_point(imm, grid(imm)[0])
cs = chen.corollary_slacks(imm, r)
print("\nclifford (2,2): theorem slacks", round(r.upper_slack, 9), round(r.lower_slack, 9),
      "| corollary slacks", cs.upper, cs.lower)

try:
    chen.nonexistence_witness(catalog.product_torus(), grid(catalog.product_torus()))
except chen.NotMinimal as exc:
    print("\nproduct torus refused:", exc)
