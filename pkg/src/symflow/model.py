"""Model layer for the modified shallow-water system.

The system tracked throughout this package is the quasilinear pair

    u_t + u u_x + g (1 + H/h) h_x = 0,
    h_t + u h_x + h u_x = 0,

for velocity u(t, x) and column height h(t, x) > 0.  Gravity g > 0 is a
runtime parameter (default 1, the conventional rescaled value) and H is a
momentum-transport constant: H = 0 gives the classical shallow-water
branch, H != 0 the modified one.  h = 0 and h = -H are hard singularities
of the pressure coefficient g (1 + H/h).

Swapping dependent and independent variables (the hodograph map, with
t = f(u, h) and x = g(u, h) as new unknowns) linearizes the system to

    g_u - u f_u + h f_h = 0,
    g_h - u f_h + gravity (1 + H/h) f_u = 0,

and eliminating g leaves the single second-order equation

    2 f_h + h f_hh - gravity (1 + H/h) f_uu = 0.

This module holds the parameter/jet/field data types, pointwise residual
evaluation for all three systems above, the two discrete reflection
symmetries, and on-manifold jet sampling for the certification sweeps.
All values are immutable after construction and every operation is pure.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _fd
from .errors import ConfigurationError, DomainError, ParameterError

__all__ = [
    "FluidParams",
    "JetPoint",
    "TXDomain",
    "UHBox",
    "UHFunction",
    "SolutionField",
    "mswe_residual",
    "linearized_residual",
    "single_f_residual",
    "apply_discrete_symmetry",
    "sample_manifold_jet",
]


# ---------------------------------------------------------------------------
# parameters and domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FluidParams:
    """Physical constants of the system.

    H is the momentum-transport constant (same units as h; any real).
    gravity must be positive.
    """

    H: float
    gravity: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.H) and math.isfinite(self.gravity)):
            raise ParameterError("FluidParams requires finite constants")
        if self.gravity <= 0.0:
            raise ParameterError(f"gravity must be positive, got {self.gravity}")

    def pressure_coeff(self, h: float) -> float:
        """gravity * (1 + H/h), the coefficient of h_x in the u-equation."""
        if h <= 0.0:
            raise DomainError(f"height must be positive, got h={h}")
        return self.gravity * (1.0 + self.H / h)


@dataclass(frozen=True)
class JetPoint:
    """A first-order jet: base point (t, x, u, h) plus first derivatives."""

    t: float
    x: float
    u: float
    h: float
    u_t: float
    u_x: float
    h_t: float
    h_x: float

    def __post_init__(self):
        vals = (self.t, self.x, self.u, self.h,
                self.u_t, self.u_x, self.h_t, self.h_x)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("jet entries must be finite")
        if self.h <= 0.0:
            raise DomainError(f"jet height must be positive, got h={self.h}")

    @property
    def base(self):
        return (self.t, self.x, self.u, self.h)


@dataclass(frozen=True)
class TXDomain:
    """Rectangle in the (t, x) plane."""

    t0: float
    t1: float
    x0: float
    x1: float

    def __post_init__(self):
        if not (self.t0 < self.t1 and self.x0 < self.x1):
            raise ConfigurationError(f"empty (t, x) rectangle: {self}")

    def contains(self, t, x, pad=0.0):
        return (self.t0 - pad <= t <= self.t1 + pad
                and self.x0 - pad <= x <= self.x1 + pad)

    def interior_samples(self, rng, n, margin=0.05):
        """n uniform points, shrunk away from the boundary by `margin`."""
        mt = margin * (self.t1 - self.t0)
        mx = margin * (self.x1 - self.x0)
        ts = rng.uniform(self.t0 + mt, self.t1 - mt, size=n)
        xs = rng.uniform(self.x0 + mx, self.x1 - mx, size=n)
        return np.column_stack([ts, xs])


@dataclass(frozen=True)
class UHBox:
    """Rectangle in the hodograph (u, h) plane; h strictly positive."""

    u0: float
    u1: float
    h0: float
    h1: float

    def __post_init__(self):
        if not (self.u0 < self.u1 and self.h0 < self.h1):
            raise ConfigurationError(f"empty (u, h) box: {self}")
        if self.h0 <= 0.0:
            raise ConfigurationError("the (u, h) box must have h > 0")

    @property
    def center(self):
        return (0.5 * (self.u0 + self.u1), 0.5 * (self.h0 + self.h1))

    def contains(self, u, h, pad=0.0):
        return (self.u0 - pad <= u <= self.u1 + pad
                and self.h0 - pad <= h <= self.h1 + pad)

    def samples(self, rng, n, margin=0.0):
        mu = margin * (self.u1 - self.u0)
        mh = margin * (self.h1 - self.h0)
        us = rng.uniform(self.u0 + mu, self.u1 - mu, size=n)
        hs = rng.uniform(self.h0 + mh, self.h1 - mh, size=n)
        return np.column_stack([us, hs])

    def grid(self, nu=21, nh=21):
        return (np.linspace(self.u0, self.u1, nu),
                np.linspace(self.h0, self.h1, nh))


# reference box used for pair normalization and membership sweeps
REFERENCE_BOX = UHBox(-1.0, 1.0, 0.5, 2.0)


# ---------------------------------------------------------------------------
# scalar functions of (u, h) with partials
# ---------------------------------------------------------------------------

class UHFunction:
    """A scalar function of (u, h) carrying first (optionally second) partials.

    Partials are analytic callables when known; otherwise finite-difference
    fallbacks are installed and the function is flagged non-analytic.
    """

    __slots__ = ("_fn", "du", "dh", "duu", "duh", "dhh", "analytic", "label")

    def __init__(self, fn, du=None, dh=None, duu=None, duh=None, dhh=None,
                 analytic=None, label=""):
        self._fn = fn
        self.du = du if du is not None else (lambda u, h: _fd.partial(fn, (u, h), 0))
        self.dh = dh if dh is not None else (lambda u, h: _fd.partial(fn, (u, h), 1))
        self.duu = duu if duu is not None else (lambda u, h: _fd.partial2(fn, (u, h), 0, 0))
        self.duh = duh if duh is not None else (lambda u, h: _fd.partial2(fn, (u, h), 0, 1))
        self.dhh = dhh if dhh is not None else (lambda u, h: _fd.partial2(fn, (u, h), 1, 1))
        if analytic is None:
            analytic = du is not None and dh is not None
        self.analytic = analytic
        self.label = label

    def __call__(self, u, h):
        return self._fn(u, h)

    def __repr__(self):
        kind = "analytic" if self.analytic else "fd"
        return f"UHFunction({self.label or '<anon>'}, {kind})"

    @classmethod
    def constant(cls, c, label=None):
        zero = lambda u, h: 0.0
        return cls(lambda u, h: c, zero, zero, zero, zero, zero,
                   analytic=True, label=label or f"const({c})")

    def shifted_u(self, eps):
        """The function (u, h) -> f(u - eps, h), partials shifted along."""
        f = self

        def wrap(part):
            return lambda u, h: part(u - eps, h)

        return UHFunction(wrap(f._fn), wrap(f.du), wrap(f.dh),
                          wrap(f.duu), wrap(f.duh), wrap(f.dhh),
                          analytic=f.analytic,
                          label=f"{f.label}(u-{eps:g})" if f.label else "")


def uh_combine(terms, label=""):
    """Linear combination sum(c_i * f_i) of UHFunctions with exact partials."""
    terms = [(float(c), f) for c, f in terms if c != 0.0]
    if not terms:
        return UHFunction.constant(0.0, label=label or "0")

    def comb(attr):
        def call(u, h):
            return sum(c * getattr(f, attr)(u, h) for c, f in terms)
        return call

    def value(u, h):
        return sum(c * f(u, h) for c, f in terms)

    return UHFunction(value, comb("du"), comb("dh"),
                      comb("duu"), comb("duh"), comb("dhh"),
                      analytic=all(f.analytic for _, f in terms),
                      label=label)


# ---------------------------------------------------------------------------
# solution fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionField:
    """A candidate solution (u, h)(t, x) on a rectangular validity domain.

    `evaluate` must be defined and finite on the domain with h > 0 there.
    `deriv`, when present, returns the analytic (u_t, u_x, h_t, h_x); the
    verifier falls back to finite differences otherwise.
    """

    evaluate: Callable
    domain: TXDomain
    provenance: str
    deriv: Optional[Callable] = None
    meta: dict = field(default_factory=dict)

    def __call__(self, t, x):
        return self.evaluate(t, x)

    def jet(self, t, x, fd_step=None) -> JetPoint:
        """First-order jet of the field at (t, x), analytic or FD derivatives."""
        u, h = self.evaluate(t, x)
        if self.deriv is not None:
            u_t, u_x, h_t, h_x = self.deriv(t, x)
        else:
            u_t, h_t = _field_fd(self.evaluate, t, x, 0, fd_step)
            u_x, h_x = _field_fd(self.evaluate, t, x, 1, fd_step)
        return JetPoint(t, x, u, h, u_t, u_x, h_t, h_x)


def _field_fd(evaluate, t, x, axis, step=None):
    """4th-order FD of both components of a field along t (axis 0) or x."""
    def comp(fn_axis_value):
        if axis == 0:
            return evaluate(fn_axis_value, x)
        return evaluate(t, fn_axis_value)

    v = t if axis == 0 else x
    d = (step if step is not None else _fd.STEP1) * max(1.0, abs(v))
    um2, hm2 = comp(v - 2 * d)
    um1, hm1 = comp(v - d)
    up1, hp1 = comp(v + d)
    up2, hp2 = comp(v + 2 * d)
    du = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * d)
    dh = (-hp2 + 8 * hp1 - 8 * hm1 + hm2) / (12 * d)
    return du, dh


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def mswe_residual(jet: JetPoint, params: FluidParams):
    """Pointwise residuals (r1, r2) of the two evolution equations at a jet.

        r1 = u_t + u u_x + gravity (1 + H/h) h_x
        r2 = h_t + u h_x + h u_x
    """
    p = params.pressure_coeff(jet.h)
    # grouping matches sample_manifold_jet's construction, so jets built
    # there cancel exactly in floating point
    r1 = jet.u_t + (jet.u * jet.u_x + p * jet.h_x)
    r2 = jet.h_t + (jet.u * jet.h_x + jet.h * jet.u_x)
    if not (math.isfinite(r1) and math.isfinite(r2)):
        raise DomainError("non-finite residual")
    return r1, r2


def linearized_residual(pair, u: float, h: float, params: FluidParams):
    """Residuals (rho1, rho2) of the hodograph-linearized system for a pair.

    `pair` is anything exposing f/g partials as pair.f.du(u, h) etc.
    (a HodographPair does).  rho2 carries the gravity (1 + H/h) factor so
    that the linearization stays the exact image of the u-equation for any
    gravity; at gravity = 1 this is the conventional form.
    """
    if h <= 0.0:
        raise DomainError(f"height must be positive, got h={h}")
    p = params.pressure_coeff(h)
    rho1 = pair.g.du(u, h) - u * pair.f.du(u, h) + h * pair.f.dh(u, h)
    rho2 = pair.g.dh(u, h) - u * pair.f.dh(u, h) + p * pair.f.du(u, h)
    return rho1, rho2


def single_f_residual(f: UHFunction, u: float, h: float, params: FluidParams) -> float:
    """Residual of the compatibility equation satisfied by f alone:

        2 f_h + h f_hh - gravity (1 + H/h) f_uu
    """
    if h <= 0.0:
        raise DomainError(f"height must be positive, got h={h}")
    p = params.pressure_coeff(h)
    return 2.0 * f.dh(u, h) + h * f.dhh(u, h) - p * f.duu(u, h)


# ---------------------------------------------------------------------------
# discrete symmetries
# ---------------------------------------------------------------------------

def apply_discrete_symmetry(fld: SolutionField, which: str) -> SolutionField:
    """Apply one of the two discrete reflection symmetries to a field.

    S1: (u', h')(t, x) = (u, h)(-t, -x)      (flip signs of t and x)
    S2: (u', h')(t, x) = (-u(t, -x), h(t, -x))  (flip signs of x and u)

    Both are involutions and both map solutions to solutions.  The output
    domain is the reflected rectangle.
    """
    if which not in ("S1", "S2"):
        raise ParameterError(f"unknown discrete symmetry {which!r}")
    d = fld.domain
    if which == "S1":
        new_domain = TXDomain(-d.t1, -d.t0, -d.x1, -d.x0)

        def evaluate(t, x):
            return fld.evaluate(-t, -x)

        new_deriv = None
        if fld.deriv is not None:
            def new_deriv(t, x):
                u_t, u_x, h_t, h_x = fld.deriv(-t, -x)
                return (-u_t, -u_x, -h_t, -h_x)
    else:
        new_domain = TXDomain(d.t0, d.t1, -d.x1, -d.x0)

        def evaluate(t, x):
            u, h = fld.evaluate(t, -x)
            return (-u, h)

        new_deriv = None
        if fld.deriv is not None:
            def new_deriv(t, x):
                u_t, u_x, h_t, h_x = fld.deriv(t, -x)
                return (-u_t, u_x, h_t, -h_x)

    return SolutionField(
        evaluate=evaluate,
        domain=new_domain,
        provenance=f"{which}({fld.provenance})",
        deriv=new_deriv,
        meta=dict(fld.meta, reflected_by=which),
    )


# ---------------------------------------------------------------------------
# on-manifold jet sampling
# ---------------------------------------------------------------------------

DEFAULT_JET_BOX = {
    "t": (0.5, 2.0),
    "x": (-1.0, 1.0),
    "u": (-1.0, 1.0),
    "h": (0.5, 2.0),
    "u_x": (-1.0, 1.0),
    "h_x": (-1.0, 1.0),
}


def sample_manifold_jet(rng, params: FluidParams, box=None) -> JetPoint:
    """Draw a jet lying exactly on the solution manifold.

    t, x, u, h, u_x, h_x are drawn uniformly from `box` (a dict of
    (lo, hi) ranges; defaults avoid the t = 0 singularities of the scaling
    solutions and keep h well away from 0).  The time derivatives are then
    solved from the two equations:

        u_t = -(u u_x + gravity (1 + H/h) h_x),
        h_t = -(u h_x + h u_x),

    so the returned jet has residual (0, 0) exactly in floating point.
    `rng` is a numpy Generator or an integer seed (determinism contract).
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    b = dict(DEFAULT_JET_BOX)
    if box:
        b.update(box)
    for key, (lo, hi) in b.items():
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ConfigurationError(f"invalid range for {key}: ({lo}, {hi})")
    if b["h"][0] <= 0.0:
        raise ConfigurationError("jet sampling box must have h > 0")

    def draw(key):
        lo, hi = b[key]
        return float(rng.uniform(lo, hi)) if hi > lo else float(lo)

    t, x, u, h = draw("t"), draw("x"), draw("u"), draw("h")
    u_x, h_x = draw("u_x"), draw("h_x")
    u_t = -(u * u_x + params.pressure_coeff(h) * h_x)
    h_t = -(u * h_x + h * u_x)
    return JetPoint(t, x, u, h, u_t, u_x, h_t, h_x)
