"""Hodograph pairs: reconstruction, Newton inversion, and field building.

A pair (f, g) of functions of (u, h) solving the linearized system plays
two roles: it labels a symmetry generator f p_t + g p_x, and the level
equations f(u, h) = t, g(u, h) = x define an implicit exact solution of
the nonlinear system wherever the 2x2 map (u, h) -> (f, g) can be
inverted.  Global inversion is impossible in general (the Jacobian
degenerates along characteristics), so inversion is pointwise Newton
with continuation across a grid.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import (CompatibilityError, ConstructionError, DegenerateMapError,
                     DomainError, NewtonDivergenceError)
from .model import (FluidParams, SolutionField, TXDomain, UHBox, UHFunction,
                    linearized_residual, mswe_residual, single_f_residual,
                    uh_combine)

__all__ = [
    "HodographPair",
    "pair_from_f",
    "invert_point",
    "field_from_pair",
    "forward_window",
    "verify_field",
    "ResidualReport",
]

QUAD_TOL = 1e-10          # adaptive quadrature tolerance for g reconstruction
COMPAT_TOL = 1e-7         # admissible compatibility residual for f
JACOBIAN_FLOOR = 1e-12    # |det| below this counts as a degenerate map


@dataclass(frozen=True)
class HodographPair:
    """Solution pair (f, g) of the linearized system on a validity box."""

    f: UHFunction
    g: UHFunction
    box: UHBox
    params: FluidParams
    label: str = ""
    meta: dict = field(default_factory=dict)

    def forward(self, u, h):
        """(t, x) = (f, g)(u, h)."""
        return self.f(u, h), self.g(u, h)

    def jacobian(self, u, h):
        return np.array([[self.f.du(u, h), self.f.dh(u, h)],
                         [self.g.du(u, h), self.g.dh(u, h)]])

    def scaled(self, c):
        return HodographPair(
            uh_combine([(c, self.f)], label=f"{c:g}*f"),
            uh_combine([(c, self.g)], label=f"{c:g}*g"),
            self.box, self.params, label=f"{c:g}*({self.label})", meta=dict(self.meta))

    def plus(self, other, c=1.0):
        return HodographPair(
            uh_combine([(1.0, self.f), (c, other.f)]),
            uh_combine([(1.0, self.g), (c, other.g)]),
            self.box, self.params,
            label=f"({self.label})+{c:g}*({other.label})")

    def boosted(self, eps):
        """Image under the boost flow: (f, g) -> (f(u-e, h), g(u-e, h) + e f(u-e, h))."""
        fs = self.f.shifted_u(eps)
        gs = uh_combine([(1.0, self.g.shifted_u(eps)), (eps, fs)],
                        label=f"boosted-g({self.label})")
        return HodographPair(fs, gs, self.box, self.params,
                             label=f"boost({eps:g})({self.label})",
                             meta=dict(self.meta))

    def u_derived(self):
        """The bracket image of the pair under the boost: (f_u, g_u - f).

        Stays a solution of the linearized system whenever (f, g) is one.
        """
        f, g = self.f, self.g
        fu = UHFunction(lambda u, h: f.du(u, h),
                        du=lambda u, h: f.duu(u, h),
                        dh=lambda u, h: f.duh(u, h),
                        analytic=f.analytic, label=f"d_u({f.label})")
        gu_minus_f = UHFunction(
            lambda u, h: g.du(u, h) - f(u, h),
            du=lambda u, h: g.duu(u, h) - f.du(u, h),
            dh=lambda u, h: g.duh(u, h) - f.dh(u, h),
            analytic=g.analytic and f.analytic,
            label=f"d_u({g.label})-({f.label})")
        return HodographPair(fu, gu_minus_f, self.box, self.params,
                             label=f"u-derived({self.label})",
                             meta=dict(self.meta))

    def max_linearized_residual(self, n=100, seed=0, params=None):
        """Max |rho1|, |rho2| of the linearized system over box samples."""
        params = params or self.params
        rng = np.random.default_rng(seed)
        pts = self.box.samples(rng, n)
        worst = 0.0
        for u, h in pts:
            r1, r2 = linearized_residual(self, u, h, params)
            worst = max(worst, abs(r1), abs(r2))
        return worst


# ---------------------------------------------------------------------------
# reconstruction of g from f
# ---------------------------------------------------------------------------

def _g_gradient(f, params):
    """The gradient (g_u, g_h) forced on g by the linearized system."""
    def g_u(u, h):
        return u * f.du(u, h) - h * f.dh(u, h)

    def g_h(u, h):
        return u * f.dh(u, h) - params.pressure_coeff(h) * f.du(u, h)

    return g_u, g_h


def pair_from_f(f: UHFunction, base, g0: float, params: FluidParams,
                box: UHBox = None, label: str = "", compat_samples: int = 49,
                compat_tol: float = COMPAT_TOL) -> HodographPair:
    """Rebuild the companion g of a compatible f by path integration.

    The linearized system determines the gradient of g from f:

        g_u = u f_u - h f_h,
        g_h = u f_h - gravity (1 + H/h) f_u,

    which is integrable exactly when f satisfies the second-order
    compatibility equation.  That residual is measured on a box grid
    first and f is rejected if it exceeds `compat_tol`.  g is then
    integrated along the L-shaped path (u0, h0) -> (u, h0) -> (u, h)
    with adaptive Gauss-Kronrod quadrature and anchored at g(u0, h0) = g0.
    Path independence to quadrature tolerance follows from compatibility.
    """
    box = box or getattr(f, "box", None)
    if box is None:
        raise DomainError("pair_from_f needs a validity box")
    u0, h0 = base
    if not box.contains(u0, h0):
        raise DomainError(f"base point {base} outside the box {box}")

    us, hs = box.grid(int(math.isqrt(compat_samples)) + 1,
                      int(math.isqrt(compat_samples)) + 1)
    worst = max(abs(single_f_residual(f, u, h, params)) for u in us for h in hs)
    if worst > compat_tol:
        raise CompatibilityError(
            f"f fails the compatibility equation: max residual {worst:.3e} "
            f"exceeds {compat_tol:.1e}", residual=worst)

    g_u, g_h = _g_gradient(f, params)

    def g_value(u, h):
        leg1 = 0.0
        if u != u0:
            leg1, _ = quad(lambda s: g_u(s, h0), u0, u,
                           epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
        leg2 = 0.0
        if h != h0:
            if h <= 0.0:
                raise DomainError(f"integration path leaves h > 0 (h={h})")
            leg2, _ = quad(lambda s: g_h(u, s), h0, h,
                           epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
        return g0 + leg1 + leg2

    # second partials of g follow from differentiating the forced gradient
    def g_uu(u, h):
        return f.du(u, h) + u * f.duu(u, h) - h * f.duh(u, h)

    def g_uh(u, h):
        return u * f.duh(u, h) - f.dh(u, h) - h * f.dhh(u, h)

    def g_hh(u, h):
        p = params.pressure_coeff(h)
        dp = -params.gravity * params.H / (h * h)
        return u * f.dhh(u, h) - dp * f.du(u, h) - p * f.duh(u, h)

    g = UHFunction(g_value, du=g_u, dh=g_h, duu=g_uu, duh=g_uh, dhh=g_hh,
                   analytic=f.analytic, label=f"g[{label or f.label}]")
    return HodographPair(f, g, box, params, label=label or f"from-f({f.label})",
                         meta={"base": tuple(base), "g0": g0,
                               "compat_residual": worst})


# ---------------------------------------------------------------------------
# pointwise inversion
# ---------------------------------------------------------------------------

MAX_NEWTON_ITERATIONS = 50
MAX_HALVINGS = 20


def invert_point(pair: HodographPair, t: float, x: float, guess,
                 tol: float = 1e-12):
    """Solve f(u, h) = t, g(u, h) = x by damped Newton from `guess`.

    Steps are halved (up to 20 times) whenever the residual norm fails to
    decrease; iteration stops when |f - t| + |g - x| < tol.  A Jacobian
    with |det| < 1e-12 raises DegenerateMapError; running out of
    iterations raises NewtonDivergenceError carrying the last iterate.
    """
    u, h = float(guess[0]), float(guess[1])
    if not pair.box.contains(u, h, pad=0.0):
        raise DomainError(f"guess {guess} outside the validity box")

    def residual(u, h):
        ft, gx = pair.forward(u, h)
        return ft - t, gx - x

    ru, rx = residual(u, h)
    norm = abs(ru) + abs(rx)
    for _ in range(MAX_NEWTON_ITERATIONS):
        if norm < tol:
            return u, h
        jac = pair.jacobian(u, h)
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        if abs(det) < JACOBIAN_FLOOR:
            raise DegenerateMapError(
                f"hodograph Jacobian singular near (u, h)=({u:.6g}, {h:.6g}), "
                f"|det|={abs(det):.3e}")
        du = (-ru * jac[1, 1] + rx * jac[0, 1]) / det
        dh = (ru * jac[1, 0] - rx * jac[0, 0]) / det
        step = 1.0
        for _ in range(MAX_HALVINGS):
            u_new, h_new = u + step * du, h + step * dh
            if h_new > 0.0 and pair.box.contains(u_new, h_new, pad=0.25):
                ru_new, rx_new = residual(u_new, h_new)
                norm_new = abs(ru_new) + abs(rx_new)
                if norm_new < norm:
                    break
            step *= 0.5
        else:
            raise NewtonDivergenceError(
                f"damping stalled at (u, h)=({u:.6g}, {h:.6g}), "
                f"residual {norm:.3e}", last_iterate=(u, h))
        u, h, ru, rx, norm = u_new, h_new, ru_new, rx_new, norm_new
    if norm < tol:
        return u, h
    raise NewtonDivergenceError(
        f"no convergence in {MAX_NEWTON_ITERATIONS} iterations, "
        f"residual {norm:.3e}", last_iterate=(u, h))


# ---------------------------------------------------------------------------
# field construction by grid continuation
# ---------------------------------------------------------------------------

def field_from_pair(pair: HodographPair, grid: TXDomain, resolution=(25, 25),
                    guess=None, tol: float = 1e-12) -> SolutionField:
    """Invert the pair over a (t, x) grid and wrap the result as a field.

    The sweep is row-major with continuation: each cell's Newton solve is
    seeded from its nearest already-converged neighbor (left, else the
    cell below), which keeps iterates on a single branch of the
    multivalued inverse.  Cells that fail are marked (NaN) and excluded.
    Point queries interpolate a seed from the converged grid and polish
    it with a fresh Newton solve.
    """
    nt, nx = resolution
    if nt < 2 or nx < 2:
        raise ConstructionError("resolution must be at least 2x2")
    ts = np.linspace(grid.t0, grid.t1, nt)
    xs = np.linspace(grid.x0, grid.x1, nx)
    ug = np.full((nt, nx), np.nan)
    hg = np.full((nt, nx), np.nan)
    start = tuple(guess) if guess is not None else pair.box.center

    for i in range(nt):
        for j in range(nx):
            seeds = []
            if j > 0 and np.isfinite(ug[i, j - 1]):
                seeds.append((ug[i, j - 1], hg[i, j - 1]))
            if i > 0 and np.isfinite(ug[i - 1, j]):
                seeds.append((ug[i - 1, j], hg[i - 1, j]))
            seeds.append(start)
            for seed in seeds:
                try:
                    u, h = invert_point(pair, ts[i], xs[j], seed, tol=tol)
                except (DegenerateMapError, NewtonDivergenceError, DomainError):
                    continue
                ug[i, j], hg[i, j] = u, h
                break

    converged = np.isfinite(ug)
    n_ok = int(converged.sum())
    if n_ok == 0:
        raise ConstructionError(
            f"no grid point of {grid} could be inverted from guess {start}")

    def nearest_seed(t, x):
        i = int(np.clip(np.searchsorted(ts, t), 1, nt - 1))
        j = int(np.clip(np.searchsorted(xs, x), 1, nx - 1))
        candidates = [(i - 1, j - 1), (i - 1, j), (i, j - 1), (i, j)]
        good = [(ug[a, b], hg[a, b]) for a, b in candidates if converged[a, b]]
        if good:
            return tuple(np.mean(good, axis=0))
        idx = np.argwhere(converged)
        d = np.abs(ts[idx[:, 0]] - t) + np.abs(xs[idx[:, 1]] - x)
        a, b = idx[int(np.argmin(d))]
        return (ug[a, b], hg[a, b])

    def evaluate(t, x):
        u, h = invert_point(pair, t, x, nearest_seed(t, x), tol=tol)
        return u, h

    return SolutionField(
        evaluate=evaluate,
        domain=grid,
        provenance=f"hodograph:{pair.label}" if pair.label else "numeric",
        deriv=None,
        meta={"grid_t": ts, "grid_x": xs, "grid_u": ug, "grid_h": hg,
              "converged": converged, "n_converged": n_ok,
              "n_cells": nt * nx},
    )


def forward_window(pair: HodographPair, frac: float = 0.25) -> TXDomain:
    """A (t, x) rectangle centered on the forward image of the box center,
    sized by a fraction of the local image spans.  A convenient default
    window on which Newton inversion converges from the center guess."""
    u0, h0 = pair.box.center
    tc, xc = pair.forward(u0, h0)
    du = 0.25 * (pair.box.u1 - pair.box.u0)
    dh = 0.25 * (pair.box.h1 - pair.box.h0)
    ts, xs = [], []
    for su, sh in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)):
        t, x = pair.forward(u0 + su * du, h0 + sh * dh)
        ts.append(t)
        xs.append(x)
    half_t = frac * max(abs(t - tc) for t in ts)
    half_x = frac * max(abs(x - xc) for x in xs)
    return TXDomain(float(tc - half_t), float(tc + half_t),
                    float(xc - half_x), float(xc + half_x))


# ---------------------------------------------------------------------------
# residual verification of fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    max_r1: float
    max_r2: float
    worst_point: tuple
    n_evaluated: int
    n_skipped: int

    @property
    def max_abs(self):
        return max(self.max_r1, self.max_r2)


def verify_field(fld: SolutionField, params: FluidParams, samples=100,
                 seed=0, use_analytic=True, margin=0.05) -> ResidualReport:
    """Feed (FD or analytic) derivatives of a field into the residuals.

    Samples interior points of the validity domain; points where the
    field cannot be evaluated (holes in a sampled field's converged
    region) are skipped and counted.
    """
    rng = np.random.default_rng(seed)
    pts = fld.domain.interior_samples(rng, samples, margin=margin)
    probe = fld if use_analytic else SolutionField(
        evaluate=fld.evaluate, domain=fld.domain,
        provenance=fld.provenance, deriv=None, meta=fld.meta)
    max_r1 = max_r2 = 0.0
    worst = (np.nan, np.nan)
    n_eval = n_skip = 0
    for t, x in pts:
        try:
            jet = probe.jet(t, x)
            r1, r2 = mswe_residual(jet, params)
        except Exception:
            n_skip += 1
            continue
        n_eval += 1
        if max(abs(r1), abs(r2)) > max(max_r1, max_r2):
            worst = (t, x)
        max_r1 = max(max_r1, abs(r1))
        max_r2 = max(max_r2, abs(r2))
    if n_eval == 0:
        raise ConstructionError("field could not be evaluated anywhere")
    return ResidualReport(max_r1, max_r2, worst, n_eval, n_skip)
