"""Reduce the system along one-dimensional subalgebras and lift back.

Class (i), scaling + a*boost, closes into a 2x2 linear system for the
profile derivatives with an explicit sonic discriminant; we integrate it
adaptively, lift the profile to a (t, x) field, and verify the lift is an
exact solution.  Class (ii) integrates in closed form.  Class (iii)
(pure pair reductions) admits only constant profiles for constant pairs.
The general four-parameter ansatz is audited for its log-term sign.
"""

from symflow import reduction
from symflow.hodograph import verify_field
from symflow.model import FluidParams
from symflow.solutions import simple_pair

params = FluidParams(H=1.0)

# -- class (i): integrate and lift ----------------------------------------
traj = reduction.integrate_case_i(a=1.0, params=params, p0=0.0,
                                  state0=(0.0, 1.0), p_end=0.5)
print(f"class (i) trajectory: status={traj.status}, "
      f"p range {traj.p_range}, {len(traj.p)} nodes")
rows = traj.samples(5)
print("  p        U(p)      H(p)")
for p, u, h in rows:
    print(f"  {p:<8.4f} {u:<9.5f} {h:<9.5f}")

fld = reduction.lift_case_i(traj, a=1.0)
rep = verify_field(fld, params, samples=80, seed=0)
print(f"lifted field residual: {rep.max_abs:.2e} on {fld.domain}")

# pushing toward the characteristic degeneracy halts with a partial
# trajectory instead of integrating through garbage
far = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 6.0)
print(f"pushed to p = 6: halted with status={far.status!r} "
      f"at p = {far.p_range[1]:.4f}")

# -- class (ii): exact closed form ----------------------------------------
fld2 = reduction.case_ii_field(0.7, 1.3)
t, x = 1.5, 0.4
print(f"\nclass (ii) closed form at (t, x) = ({t}, {x}): "
      f"(u, h) = {fld2(t, x)}  [(x + c1)/t, c2/t]")

# -- class (iii): constant pairs force constant profiles -------------------
pair = simple_pair(c4=1.0, c5=0.5, params=params)     # (f, g) = (1, const)
s = reduction.ReducedState(p=0.3, u=0.8, h=1.2)
print(f"class (iii) traveling-wave residual for constant profile: "
      f"{reduction.case_iii_residual(pair, s, 0.0, 0.0, params)}")
print(f"          ... and for a non-constant candidate: "
      f"{tuple(round(r, 4) for r in reduction.case_iii_residual(pair, s, 0.3, -0.2, params))}")

# -- the general four-parameter ansatz: log-sign audit ---------------------
audit = reduction.general_ansatz_sign_audit(1.0, params, 0.0, (0.0, 1.0),
                                            0.5, seed=0)
print("\ngeneral-ansatz log-sign audit (a1, a2, a3, a4) = (1, a, 0, 0):")
print(f"  lift with the sign as displayed:   residual "
      f"{audit['printed_sign_residual']:.2e}  (not a reduction)")
print(f"  plain class-(i) lift:              residual "
      f"{audit['plain_lift_residual']:.2e}")
print(f"  sign flipped + constant p-shift:   matches the plain lift to "
      f"{audit['flipped_sign_match_gap']:.2e}")
