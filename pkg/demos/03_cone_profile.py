"""
Smoothed cone profiles
======================

The enclosure argument replaces the cone by a surface of revolution with
a rounded apex: a quartic cap matched C^2 to the straight cone branch at
t_eps.  As the rounding parameter eps shrinks, the minimum mean
curvature of the cap grows like 1/eps, which is what makes the barrier
comparison work for any bounded field.
"""

import numpy as np

import conesurf as cs

beta = np.pi / 4

# largest delta keeping the growth constant below the comparison
# threshold for the widened cone
delta = cs.select_delta(beta)
print("beta =", beta, " selected delta =", delta)
print("growth constant c_beta(beta - delta) =", cs.c_beta(beta - delta))

for eps in (0.1, 0.05, 0.025, 0.0125):
    profile = cs.make_profile(beta, delta, eps)
    jumps = cs.junction_jumps(profile)
    m = cs.min_cap_curvature(profile, 256)
    print(f"eps = {eps:7.4f}  t_eps = {profile.t_eps:.5f}  "
          f"min cap curvature = {m:9.4f}  "
          f"junction jumps = ({jumps['value']:.1e}, {jumps['first']:.1e}, "
          f"{jumps['second']:.1e})")

# the product eps * min curvature is (asymptotically) constant: the 1/eps law
print()
for eps in (0.1, 0.05, 0.025, 0.0125):
    profile = cs.make_profile(beta, delta, eps)
    print("eps * min cap curvature =", eps * cs.min_cap_curvature(profile, 256))

# a bounded field is dominated by the profile curvature near the apex
field = cs.CurvatureField("constant", h0=2.0)
profile = cs.make_profile(beta, delta, 0.01)
report = cs.check_enclosure_curvature(profile, field, t_max=profile.t_eps)
print()
print("enclosure margin for |H| = 2 near the apex:", report["margin"])
