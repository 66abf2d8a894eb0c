"""Independent finite-volume integrator used as a cross-validation oracle.

First-order scheme on cell averages of the primitive variables (u, h):

* the h-equation is in conservation form, h_t + (u h)_x = 0, and is
  discretized with a Rusanov (local Lax-Friedrichs) flux, so discrete
  mass sum(h) dx telescopes exactly under periodic boundaries;
* the u-equation is not given in divergence form (the pressure
  coefficient g (1 + H/h) has no antiderivative in h times u-terms), so
  it is discretized in nonconservative primitive form: a Rusanov flux
  for the u^2/2 advection part plus a centered g (1 + H/h) h_x term.

The wave-speed estimate |u| + sqrt(gravity (h + H)) is the exact
characteristic speed of the quasilinear system, the same degeneracy
notion used by the reduction module's sonic detection.  Validation
targets smooth exact solutions, where the scheme converges at first
order; no shock-capturing claims are made.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import (ConfigurationError, DomainError, PositivityError,
                     PreconditionError)
from .model import FluidParams, SolutionField, TXDomain

__all__ = [
    "GridState",
    "step",
    "simulate",
    "convergence_order",
    "ConvergenceReport",
]


@dataclass(frozen=True)
class GridState:
    """Cell-average state on a uniform grid; x0 is the left domain edge."""

    nx: int
    dx: float
    x0: float
    u: np.ndarray
    h: np.ndarray
    time: float

    def __post_init__(self):
        if self.nx < 4:
            raise ConfigurationError(f"need at least 4 cells, got {self.nx}")
        if len(self.u) != self.nx or len(self.h) != self.nx:
            raise ConfigurationError("state arrays must have nx entries")
        if np.any(self.h <= 0.0):
            raise DomainError("initial heights must be positive")

    @property
    def centers(self):
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def mass(self):
        return float(np.sum(self.h) * self.dx)


def _wave_speed(u, h, params):
    radicand = params.gravity * (h + params.H)
    if np.any(radicand <= 0.0):
        raise DomainError("lost hyperbolicity: gravity (h + H) <= 0")
    return np.abs(u) + np.sqrt(radicand)


def _ghosts(gs: GridState, params, bc):
    """One ghost cell per side: (u_left, h_left), (u_right, h_right)."""
    if bc == "extrapolate":
        return (gs.u[0], gs.h[0]), (gs.u[-1], gs.h[-1])
    if bc == "periodic":
        return (gs.u[-1], gs.h[-1]), (gs.u[0], gs.h[0])
    if isinstance(bc, SolutionField):
        xl = gs.x0 - 0.5 * gs.dx
        xr = gs.x0 + (gs.nx + 0.5) * gs.dx
        return bc(gs.time, xl), bc(gs.time, xr)
    raise ConfigurationError(f"unknown boundary treatment {bc!r}")


def step(gs: GridState, params: FluidParams, cfl: float = 0.4,
         bc="extrapolate", dt_max=None) -> GridState:
    """One forward step; dt = cfl dx / max wave speed, capped by dt_max."""
    if not (0.0 < cfl <= 0.9):
        raise PreconditionError(f"cfl must lie in (0, 0.9], got {cfl}")
    (ul, hl), (ur, hr) = _ghosts(gs, params, bc)
    ue = np.concatenate([[ul], gs.u, [ur]])
    he = np.concatenate([[hl], gs.h, [hr]])
    if np.any(he <= 0.0):
        raise DomainError("boundary data produced non-positive height")

    speeds = _wave_speed(ue, he, params)
    dt = cfl * gs.dx / float(np.max(speeds))
    if dt_max is not None:
        dt = min(dt, dt_max)

    s_iface = np.maximum(speeds[:-1], speeds[1:])          # nx + 1 interfaces
    flux_h = (0.5 * (ue[:-1] * he[:-1] + ue[1:] * he[1:])
              - 0.5 * s_iface * (he[1:] - he[:-1]))
    flux_u = (0.25 * (ue[:-1] ** 2 + ue[1:] ** 2)
              - 0.5 * s_iface * (ue[1:] - ue[:-1]))

    lam = dt / gs.dx
    h_new = gs.h - lam * (flux_h[1:] - flux_h[:-1])
    pressure = params.gravity * (1.0 + params.H / gs.h)
    u_new = (gs.u - lam * (flux_u[1:] - flux_u[:-1])
             - dt * pressure * (he[2:] - he[:-2]) / (2.0 * gs.dx))

    bad = np.nonzero(h_new <= 0.0)[0]
    if bad.size:
        raise PositivityError(
            f"height became non-positive in cell {int(bad[0])} "
            f"at t={gs.time + dt:.6g}", cell=int(bad[0]))
    return replace(gs, u=u_new, h=h_new, time=gs.time + dt)


def simulate(init: SolutionField, params: FluidParams, t0: float, t1: float,
             nx: int, cfl: float = 0.4, window: TXDomain = None) -> GridState:
    """March cell averages of an exact field from t0 to t1.

    Initial data samples the field at cell centers; boundaries are
    Dirichlet from the same field (one ghost cell per side).  The final
    partial step lands exactly on t1.
    """
    if not t0 < t1:
        raise ConfigurationError(f"need t0 < t1, got [{t0}, {t1}]")
    window = window or init.domain
    dx = (window.x1 - window.x0) / nx
    centers = window.x0 + (np.arange(nx) + 0.5) * dx
    uh = np.array([init(t0, x) for x in centers])
    if np.any(uh[:, 1] <= 0.0):
        raise DomainError("initial data has non-positive height")
    gs = GridState(nx=nx, dx=dx, x0=window.x0,
                   u=uh[:, 0].copy(), h=uh[:, 1].copy(), time=t0)
    while gs.time < t1 - 1e-14:
        gs = step(gs, params, cfl=cfl, bc=init, dt_max=t1 - gs.time)
    return replace(gs, time=t1)


@dataclass(frozen=True)
class ConvergenceReport:
    orders: dict
    errors: dict
    dxs: tuple
    degenerate: bool

    def in_window(self, lo, hi):
        return (not self.degenerate
                and all(lo <= o <= hi for o in self.orders.values()))


DEGENERATE_ERROR = 1e-12


def convergence_order(exact: SolutionField, params: FluidParams,
                      window: TXDomain, resolutions, cfl: float = 0.4
                      ) -> ConvergenceReport:
    """Least-squares slope of log(L1 error) against log(dx).

    Needs at least three geometrically refined resolutions.  An exactly
    representable solution (errors at roundoff) yields a degenerate-fit
    notice instead of a meaningless slope.
    """
    resolutions = sorted(int(n) for n in resolutions)
    if len(resolutions) < 3:
        raise ConfigurationError("need at least 3 resolutions")
    ratios = [b / a for a, b in zip(resolutions, resolutions[1:])]
    if max(ratios) - min(ratios) > 0.25:
        raise ConfigurationError(
            f"resolutions must refine geometrically, got {resolutions}")

    errs_u, errs_h, dxs = [], [], []
    for nx in resolutions:
        gs = simulate(exact, params, window.t0, window.t1, nx, cfl=cfl,
                      window=window)
        ref = np.array([exact(window.t1, x) for x in gs.centers])
        errs_u.append(float(np.sum(np.abs(gs.u - ref[:, 0])) * gs.dx))
        errs_h.append(float(np.sum(np.abs(gs.h - ref[:, 1])) * gs.dx))
        dxs.append(gs.dx)

    if max(max(errs_u), max(errs_h)) < DEGENERATE_ERROR:
        return ConvergenceReport(orders={}, errors={"u": errs_u, "h": errs_h},
                                 dxs=tuple(dxs), degenerate=True)
    log_dx = np.log(dxs)
    orders = {
        "u": float(np.polyfit(log_dx, np.log(np.maximum(errs_u, 1e-300)), 1)[0]),
        "h": float(np.polyfit(log_dx, np.log(np.maximum(errs_h, 1e-300)), 1)[0]),
    }
    return ConvergenceReport(orders=orders, errors={"u": errs_u, "h": errs_h},
                             dxs=tuple(dxs), degenerate=False)


def snapshot_rows(gs: GridState):
    """(x, u, h) rows for CSV export."""
    return np.column_stack([gs.centers, gs.u, gs.h])
