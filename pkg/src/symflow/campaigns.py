"""Verification campaigns: named suites of checks over the whole package.

Each campaign function consumes a validated Campaign configuration and
returns a Report.  Campaigns never raise on a failing measurement; every
outcome lands in the report (crashes become failed checks, audits of
formulas-as-printed become flags).
"""

import numpy as np

from . import __version__, algebra, fvsolver, reduction, vfield
from .errors import ConfigurationError
from .hodograph import (field_from_pair, forward_window, pair_from_f,
                        verify_field)
from .model import (FluidParams, TXDomain, UHFunction,
                    sample_manifold_jet, single_f_residual)
from .report import Report, run_check
from .solutions import (bessel_f, bessel_f_box, bessel_order,
                        bessel_wronskian_error, catalog, galilean_solution,
                        printed_c316_g, simple_pair)

__all__ = ["run_campaign", "COMMANDS"]

# stable anchor slugs naming the piece of theory each check certifies
A_INVARIANCE = "invariance-criterion"
A_DETERMINING = "determining-equations"
A_SWE_BRANCH = "swe-branch-generators"
A_COMMUTATORS = "commutator-table"
A_ADJOINT = "adjoint-actions"
A_OPTIMAL_LIST = "one-dim-subalgebra-list"
A_G1_LIST = "four-dim-subalgebra-list"
A_LINEARIZED = "hodograph-linearized-system"
A_COMPAT = "single-f-compatibility"
A_GALILEAN = "boost-invariant-solution"
A_BESSEL = "separable-bessel-family"
A_REDUCTION_I = "scaling-boost-reduction"
A_REDUCTION_III = "pair-reduction"
A_GENERAL_ANSATZ = "general-four-parameter-ansatz"
A_FV = "finite-volume-oracle"
A_DISCRETE = "discrete-reflections"


def _params(cfg, H=None):
    return FluidParams(H=cfg.H if H is None else H, gravity=cfg.gravity)


def _pairs(cfg, params):
    wanted = cfg.catalog or [e.id for e in catalog(params)]
    built = []
    for entry in catalog(params):
        if entry.id in wanted and entry.kind in ("hodograph_pair", "separable_f"):
            built.append((entry.id, entry.build()))
    return built


def _max_defect(gen, params, n_jets, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_jets):
        jet = sample_manifold_jet(rng, params)
        d1, d2 = vfield.invariance_defect(gen, jet, params)
        worst = max(worst, abs(d1), abs(d2))
    return worst


# ---------------------------------------------------------------------------
# verify-symmetries
# ---------------------------------------------------------------------------

def campaign_verify_symmetries(cfg) -> Report:
    rep = Report()
    tol = cfg.tolerances["defect"]
    n_jets = cfg.n_jets
    for H in cfg.h_values:
        params = _params(cfg, H)
        gens = [("scaling", vfield.gen_scaling()),
                ("boost", vfield.gen_boost()),
                ("dt", vfield.gen_time_translation()),
                ("dx", vfield.gen_space_translation())]
        if H == 0.0:
            gens.append(("swe-second-scaling", vfield.gen_swe_second_scaling()))
        for name, gen in gens:
            run_check(rep, f"defect:{name}@H={H:g}", A_INVARIANCE, tol,
                      lambda g=gen, p=params: _max_defect(g, p, n_jets, cfg.seed))
        for pid, pair in _pairs(cfg, params):
            gen = vfield.gen_hodograph(pair)
            run_check(rep, f"defect:{pid}@H={H:g}", A_INVARIANCE, tol,
                      lambda g=gen, p=params: _max_defect(g, p, n_jets, cfg.seed))
            run_check(rep, f"determining:family+{pid}@H={H:g}", A_DETERMINING,
                      tol, lambda pr=pair, p=params: _max_determining(
                          cfg, pr, p))
        if H == 0.0:
            run_check(rep, "defect:swe-projective@H=0", A_SWE_BRANCH, tol,
                      lambda p=params: _max_defect(
                          vfield.gen_swe_projective(p.gravity), p, n_jets,
                          cfg.seed),
                      flag=True,
                      note="reading the printed height coefficient as the "
                           "gravity constant; measured, not asserted")

    params = _params(cfg)

    def commutator_table():
        table = algebra.commutator_table_check(samples=50, seed=cfg.seed,
                                               params=params)
        return max(table["max_relation_deviation"],
                   table["max_membership_residual"])

    run_check(rep, "commutator-table", A_COMMUTATORS, tol, commutator_table)

    def adjoint_series():
        pts = [(1.2, 0.3, -0.4, 1.1), (0.7, -0.6, 0.8, 0.9)]
        pc1 = simple_pair(c1=1.0, params=params)
        pc3 = simple_pair(c3=1.0, params=params)
        eps = 0.1
        gap = 0.0
        for flow, target in (("scaling", algebra.AlgebraElement(0, 0, pc1)),
                             ("boost", algebra.AlgebraElement(0, 0, pc1)),
                             (pc3, algebra.AlgebraElement(1, 0, None)),
                             (pc3, algebra.AlgebraElement(0, 1, None))):
            gap = max(gap, algebra.adjoint_series_gap(flow, eps, target, pts))
        return gap

    run_check(rep, "adjoint-vs-lie-series@eps=0.1", A_ADJOINT, 1e-3,
              adjoint_series, note="closed forms against the truncated "
                                   "series through the numerical bracket")

    def reflections():
        from .model import apply_discrete_symmetry
        from .solutions import constant_solution
        worst = 0.0
        for fld in (galilean_solution(0.0, 1.0), constant_solution(0.3, 1.0)):
            for which in ("S1", "S2"):
                out = apply_discrete_symmetry(fld, which)
                worst = max(worst, verify_field(
                    out, params, samples=50, seed=cfg.seed).max_abs)
        return worst

    run_check(rep, "discrete-reflections", A_DISCRETE,
              cfg.tolerances["residual"], reflections)
    rep.repro = _repro(cfg)
    return rep


def _max_determining(cfg, pair, params, n_points=100):
    rng = np.random.default_rng(cfg.seed + 1)
    c1, c2 = rng.uniform(-1.0, 1.0, 2)
    gen = vfield.general_symmetry_family(float(c1), float(c2), pair)
    worst = 0.0
    for _ in range(n_points):
        point = (rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0),
                 rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0))
        worst = max(worst, float(np.max(np.abs(
            vfield.determining_defect(gen, point, params)))))
    return worst


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def campaign_classify(cfg) -> Report:
    rep = Report()
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_classify

    def orbit_mismatches():
        bad = 0
        for _ in range(n):
            v = algebra.G1Element.from_array(rng.normal(size=4))
            word = algebra.g1_random_word(rng)
            if algebra.normalize_g1(algebra.g1_apply_word(word, v)) \
                    != algebra.normalize_g1(v):
                bad += 1
        return bad

    def idempotence_mismatches():
        bad = 0
        for _ in range(n):
            v = algebra.G1Element.from_array(rng.normal(size=4))
            cls = algebra.normalize_g1(v)
            if algebra.normalize_g1(cls.representative_g1()) != cls:
                bad += 1
        return bad

    def span_mismatches():
        bad = 0
        for _ in range(n):
            v = algebra.G1Element.from_array(rng.normal(size=4))
            lam = float(rng.uniform(0.1, 5.0)) * float(rng.choice([-1.0, 1.0]))
            if algebra.normalize_g1(
                    algebra.G1Element.from_array(lam * v.as_array())) \
                    != algebra.normalize_g1(v):
                bad += 1
        return bad

    run_check(rep, "orbit-invariance", A_G1_LIST, 0.0, orbit_mismatches,
              note=f"{n} random (element, adjoint word) draws")
    run_check(rep, "normalizer-idempotence", A_G1_LIST, 0.0,
              idempotence_mismatches)
    run_check(rep, "span-invariance", A_G1_LIST, 0.0, span_mismatches)

    def full_algebra_idempotence():
        params = _params(cfg)
        pair = simple_pair(c3=1.0, params=params)
        bad = 0
        for _ in range(50):
            a, b = rng.normal(size=2)
            elem = algebra.AlgebraElement(float(a), float(b), pair)
            cls = algebra.normalize_g(elem)
            if algebra.normalize_g(cls.representative_g()) != cls:
                bad += 1
        pure = algebra.AlgebraElement(0.0, 0.0, pair)
        cls = algebra.normalize_g(pure)
        if algebra.normalize_g(cls.representative_g()) != cls:
            bad += 1
        return bad

    run_check(rep, "full-normalizer-idempotence", A_OPTIMAL_LIST, 0.0,
              full_algebra_idempotence)

    def delta_redundancy():
        witness = algebra.orbit_equivalent_g1(
            algebra.G1Element(0.0, 0.0, 1.0, 1.0),
            algebra.G1Element(0.0, 0.0, 0.0, 1.0),
            trials=cfg.n_orbit_trials, seed=cfg.seed)
        return 1.0 if witness.found else 0.0

    run_check(rep, "audit:dt+dx-delta-removable", A_G1_LIST, 0.0,
              delta_redundancy, flag=True,
              note="1.0 means the boost flow removes the p_x part of "
                   "p_t + p_x, a finer equivalence than the printed list")
    rep.repro = _repro(cfg)
    return rep


# ---------------------------------------------------------------------------
# invert
# ---------------------------------------------------------------------------

def campaign_invert(cfg) -> Report:
    from .hodograph import invert_point

    rep = Report()
    params = _params(cfg)
    newton_tol = cfg.tolerances["newton"]

    for pid, pair in _pairs(cfg, params):
        def roundtrip(pair=pair):
            rng = np.random.default_rng(cfg.seed)
            worst = 0.0
            for u, h in pair.box.samples(rng, 100, margin=0.1):
                t, x = pair.forward(u, h)
                u2, h2 = invert_point(pair, t, x, (u + 0.02, h * 1.02),
                                      tol=newton_tol)
                worst = max(worst, abs(u2 - u), abs(h2 - h))
            return worst

        run_check(rep, f"roundtrip:{pid}", A_LINEARIZED, 1e-9, roundtrip)

    def c2_matches_closed_form():
        pair = simple_pair(c2=1.0, params=params,
                           box=_pairs_box_c2())
        window = TXDomain(1.0, 2.0, 0.0, 1.0)
        fld = field_from_pair(pair, window, resolution=(21, 21))
        exact = galilean_solution(0.0, 1.0)
        rng = np.random.default_rng(cfg.seed)
        worst = 0.0
        for t, x in window.interior_samples(rng, 60):
            ue, he = exact(t, x)
            un, hn = fld(t, x)
            worst = max(worst, abs(un - ue), abs(hn - he))
        return worst

    run_check(rep, "inversion-matches-closed-form", A_GALILEAN, 1e-9,
              c2_matches_closed_form)

    def bessel_field_residual():
        pair = dict(_pairs(cfg, params)).get("bessel-c316")
        if pair is None:
            raise ConfigurationError("bessel-c316 not in the campaign catalog")
        window = forward_window(pair)
        fld = field_from_pair(pair, window, resolution=(21, 21))
        return verify_field(fld, params, samples=60, seed=cfg.seed).max_abs

    run_check(rep, "inverted-field-residual:bessel-c316", A_BESSEL,
              cfg.tolerances["residual"], bessel_field_residual)
    rep.repro = _repro(cfg)
    return rep


def _pairs_box_c2():
    from .model import UHBox
    return UHBox(-1.0, 1.0, 0.25, 2.0)


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------

def campaign_reduce(cfg) -> Report:
    rep = Report()
    params = _params(cfg)
    rc = cfg.reduce
    res_tol = cfg.tolerances["residual"]

    def lifted_residual():
        traj = reduction.integrate_case_i(
            rc["a"], params, rc["p0"], rc["state0"], rc["p_end"])
        rep.attach_artifact("trajectory.csv", ("p", "u", "h"),
                            traj.samples(200))
        fld = reduction.lift_case_i(traj, rc["a"])
        return verify_field(fld, params, samples=80, seed=cfg.seed).max_abs

    run_check(rep, "lifted-field-residual:case-i", A_REDUCTION_I, res_tol,
              lifted_residual)

    def case_ii_identity():
        fld = reduction.case_ii_field(0.7, 1.3)
        rng = np.random.default_rng(cfg.seed)
        worst = 0.0
        for t, x in fld.domain.interior_samples(rng, 50):
            u, h = fld(t, x)
            worst = max(worst, abs(u - (x + 0.7) / t), abs(h - 1.3 / t))
        return worst

    run_check(rep, "closed-form-match:case-ii", A_GALILEAN, 0.0,
              case_ii_identity)

    def case_iii_constants():
        pair = simple_pair(c4=1.0, c5=0.5, params=params)  # f=1, g=const
        s = reduction.ReducedState(0.3, 0.8, 1.2)
        r1, r2 = reduction.case_iii_residual(pair, s, 0.0, 0.0, params)
        return max(abs(r1), abs(r2))

    run_check(rep, "constant-profiles:case-iii", A_REDUCTION_III, 1e-14,
              case_iii_constants)

    audit = {}

    def sign_audit(key):
        if not audit:
            audit.update(reduction.general_ansatz_sign_audit(
                rc["a"], params, rc["p0"], rc["state0"], rc["p_end"],
                seed=cfg.seed))
        return audit[key]

    run_check(rep, "audit:general-ansatz-log-sign-printed", A_GENERAL_ANSATZ,
              res_tol, lambda: sign_audit("printed_sign_residual"), flag=True,
              note="lift residual with the log term as displayed")
    run_check(rep, "audit:general-ansatz-log-sign-flipped", A_GENERAL_ANSATZ,
              res_tol, lambda: sign_audit("flipped_sign_match_gap"), flag=True,
              note="pointwise gap to the plain lift after flipping the sign "
                   "and absorbing the constant similarity shift")
    rep.repro = _repro(cfg)
    return rep


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def campaign_simulate(cfg) -> Report:
    rep = Report()
    params = _params(cfg)
    g = cfg.grid
    window = TXDomain(g["t0"], g["t1"], g["x0"], g["x1"])
    resolutions = g.get("resolutions", [100, 200, 400])

    def galilean_orders():
        exact = galilean_solution(0.0, 1.0)
        gs = fvsolver.simulate(exact, params, window.t0, window.t1,
                               g["nx"], cfl=g["cfl"], window=window)
        rep.attach_artifact("grid_final.csv", ("x", "u", "h"),
                            fvsolver.snapshot_rows(gs))
        r = fvsolver.convergence_order(exact, params, window, resolutions,
                                       cfl=g["cfl"])
        if r.degenerate:
            return -1.0
        return min(r.orders.values())

    run_check(rep, "convergence-order:galilean", A_FV, 1.3, galilean_orders,
              band=(0.8, 1.3), note="least-squares L1 order, both variables")

    def mass_drift():
        rng = np.random.default_rng(cfg.seed)
        nx = 128
        xs = np.linspace(0.0, 1.0, nx, endpoint=False)
        gs = fvsolver.GridState(
            nx=nx, dx=1.0 / nx, x0=0.0,
            u=0.2 * np.sin(2 * np.pi * xs) + 0.05 * rng.normal(size=nx) * 0.0,
            h=1.0 + 0.3 * np.cos(2 * np.pi * xs), time=0.0)
        worst = 0.0
        for _ in range(50):
            before = gs.mass
            gs = fvsolver.step(gs, params, cfl=0.4, bc="periodic")
            worst = max(worst, abs(gs.mass - before))
        return worst

    run_check(rep, "mass-conservation:periodic", A_FV, 1e-12, mass_drift)

    def hodograph_orders():
        pairs = dict(_pairs(cfg, params))
        pair = pairs.get("bessel-c316")
        if pair is None:
            raise ConfigurationError("bessel-c316 not in the campaign catalog")
        fwin = forward_window(pair)
        fld = field_from_pair(pair, fwin, resolution=(21, 21))
        r = fvsolver.convergence_order(fld, params, fwin, resolutions,
                                       cfl=g["cfl"])
        if r.degenerate:
            return -1.0
        return min(r.orders.values())

    run_check(rep, "convergence-order:bessel-c316", A_FV, 1.3,
              hodograph_orders, band=(0.8, 1.3))
    rep.repro = _repro(cfg)
    return rep


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def campaign_audit(cfg) -> Report:
    rep = Report()
    params = _params(cfg)

    run_check(rep, "audit:swe-projective-defect", A_SWE_BRANCH,
              cfg.tolerances["defect"],
              lambda: _max_defect(
                  vfield.gen_swe_projective(params.gravity),
                  FluidParams(H=0.0, gravity=params.gravity),
                  cfg.n_jets, cfg.seed),
              flag=True,
              note="H=0 branch; printed coefficient read as the gravity constant")

    def printed_g_residual():
        f = bessel_f(3.0 / 16.0, params=params)
        g_printed = printed_c316_g(params=params)
        pair = _loose_pair(f, g_printed, params)
        return pair.max_linearized_residual(n=100, seed=cfg.seed)

    run_check(rep, "audit:printed-g-residual:c316", A_BESSEL,
              cfg.tolerances["defect"], printed_g_residual, flag=True,
              note="companion g transcribed as displayed; compare with the "
                   "reconstruction below")

    def reconstructed_g_residual():
        f = bessel_f(3.0 / 16.0, params=params)
        box = bessel_f_box()
        pair = pair_from_f(f, base=box.center, g0=0.0, params=params, box=box)
        # measure through FD partials of the integrated values, an
        # independent route from the defining relations
        g_fd = UHFunction(pair.g._fn, analytic=False, label="g-fd")
        loose = _loose_pair(pair.f, g_fd, params)
        return loose.max_linearized_residual(n=40, seed=cfg.seed)

    run_check(rep, "reconstructed-g-residual:c316", A_BESSEL, 1e-7,
              reconstructed_g_residual)

    def bessel_order_residual():
        c = 3.0 / 16.0
        f = bessel_f(c, params=params)
        rng = np.random.default_rng(cfg.seed)
        box = bessel_f_box()
        return max(abs(single_f_residual(f, u, h, params))
                   for u, h in box.samples(rng, 100))

    run_check(rep, "audit:bessel-order-sqrt(1-4c)", A_COMPAT, 1e-7,
              bessel_order_residual, flag=True,
              note="compatibility residual with the order as printed; "
                   "small residual confirms the printed order")

    def delta_redundancy():
        witness = algebra.orbit_equivalent_g1(
            algebra.G1Element(0.0, 0.0, 1.0, 1.0),
            algebra.G1Element(0.0, 0.0, 0.0, 1.0),
            trials=cfg.n_orbit_trials, seed=cfg.seed)
        return 1.0 if witness.found else 0.0

    run_check(rep, "audit:dt+dx-delta-removable", A_G1_LIST, 0.0,
              delta_redundancy, flag=True)

    rc = cfg.reduce
    audit = {}

    def sign_audit(key):
        if not audit:
            audit.update(reduction.general_ansatz_sign_audit(
                rc["a"], params, rc["p0"], rc["state0"], rc["p_end"],
                seed=cfg.seed))
        return audit[key]

    run_check(rep, "audit:general-ansatz-log-sign-printed", A_GENERAL_ANSATZ,
              cfg.tolerances["residual"],
              lambda: sign_audit("printed_sign_residual"), flag=True)
    run_check(rep, "audit:general-ansatz-log-sign-flipped", A_GENERAL_ANSATZ,
              cfg.tolerances["residual"],
              lambda: sign_audit("flipped_sign_match_gap"), flag=True)

    run_check(rep, "bessel-wronskian", A_BESSEL, 1e-10,
              lambda: bessel_wronskian_error(
                  bessel_order(3.0 / 16.0), np.linspace(0.1, 20.0, 80)))
    rep.repro = _repro(cfg)
    return rep


def _loose_pair(f, g, params):
    """Wrap (f, g) for residual measurement without pair validation."""
    from .hodograph import HodographPair
    return HodographPair(f, g, bessel_f_box(), params, label="audit-pair")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

COMMANDS = {
    "verify-symmetries": campaign_verify_symmetries,
    "classify": campaign_classify,
    "invert": campaign_invert,
    "reduce": campaign_reduce,
    "simulate": campaign_simulate,
    "audit": campaign_audit,
}


def run_campaign(cfg) -> Report:
    try:
        fn = COMMANDS[cfg.command]
    except KeyError:
        raise ConfigurationError(f"unknown command {cfg.command!r}") from None
    report = fn(cfg)
    report.repro = _repro(cfg)
    return report


def _repro(cfg):
    return {
        "seed": cfg.seed,
        "params": {"H": cfg.H, "gravity": cfg.gravity,
                   "H_values": list(cfg.h_values)},
        "version": __version__,
    }
