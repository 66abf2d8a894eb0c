"""Certify the symmetry generators of the modified shallow-water system.

The system is

    u_t + u u_x + g (1 + H/h) h_x = 0,
    h_t + u h_x + h u_x = 0.

A vector field generates a symmetry exactly when its first prolongation
annihilates both residuals on the solution manifold.  Instead of deriving
that condition symbolically, we *measure* it: draw jets that satisfy the
system exactly, prolong each candidate generator numerically, and report
the worst defect.  A true generator scores at roundoff; anything else
fails loudly.
"""

import numpy as np

from symflow import vfield
from symflow.model import FluidParams, sample_manifold_jet
from symflow.solutions import simple_pair

rng = np.random.default_rng(7)

for H in (0.5, 1.0, 2.0):
    params = FluidParams(H=H)
    jets = [sample_manifold_jet(rng, params) for _ in range(200)]

    candidates = [
        vfield.gen_time_translation(),
        vfield.gen_space_translation(),
        vfield.gen_scaling(),
        vfield.gen_boost(),
        vfield.gen_hodograph(simple_pair(c2=1.0, params=params)),
        vfield.gen_hodograph(simple_pair(c3=1.0, params=params)),
    ]

    print(f"\n== H = {H} ==")
    for gen in candidates:
        worst = max(max(map(abs, vfield.invariance_defect(gen, j, params)))
                    for j in jets)
        print(f"  {gen.label:<22} max defect {worst:.2e}")

# contrast: a field that is NOT a symmetry. Velocity translation p_u
# leaves the defect (u_x, h_x), which any generic jet exposes.
params = FluidParams(H=1.0)
z = lambda t, x, u, h: 0.0
zg = lambda t, x, u, h: (0.0, 0.0, 0.0, 0.0)
not_a_symmetry = vfield.VectorFieldSpec(
    z, z, lambda t, x, u, h: 1.0, z, grads=(zg,) * 4, label="d_u")
jet = sample_manifold_jet(rng, params)
d1, d2 = vfield.invariance_defect(not_a_symmetry, jet, params)
print(f"\nvelocity translation (not a symmetry): defect = "
      f"({d1:.3f}, {d2:.3f})  [equals (u_x, h_x) = "
      f"({jet.u_x:.3f}, {jet.h_x:.3f})]")

# the determining-equation route gives the same verdicts point by point
print("\ndetermining-equation defects at a random point:")
point = (1.3, 0.2, -0.4, 1.7)
for gen in (vfield.gen_scaling(), vfield.gen_boost(), not_a_symmetry):
    vec = vfield.determining_defect(gen, point, params)
    print(f"  {gen.label:<22} max |defect| {np.max(np.abs(vec)):.2e}")

# the H = 0 branch has two extra generators; the projective-type one is
# printed with an ambiguous symbol, so it is measured rather than assumed
params0 = FluidParams(H=0.0)
jets0 = [sample_manifold_jet(rng, params0) for _ in range(200)]
print("\nH = 0 branch extras:")
for gen in (vfield.gen_swe_second_scaling(),
            vfield.gen_swe_projective(params0.gravity)):
    worst = max(max(map(abs, vfield.invariance_defect(gen, j, params0)))
                for j in jets0)
    print(f"  {gen.label:<22} max defect {worst:.2e}")
print("  (the projective generator certifies once its height coefficient "
      "is read as the gravity constant)")
