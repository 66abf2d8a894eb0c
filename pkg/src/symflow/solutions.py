"""Catalog of exact solutions and solution-generating formulas.

Three families are carried:

* the boost-invariant closed form u = (x + c1)/t, h = c2/t (plus the
  trivial constant state),
* a rational/logarithmic four-parameter family of linearized-system
  pairs whose c2-only member inverts back to the closed form above,
* a separable family f = F(u) G(h) of solutions of the compatibility
  equation, with G built from Bessel functions J_b, Y_b of order
  b = sqrt(1 - 4c).

Special functions come from scipy; derivative recurrences and the Bessel
ODE supply the partials.  A Wronskian check guards the evaluator.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import jv, yv

from .errors import DomainError, ParameterError
from .hodograph import HodographPair, pair_from_f
from .model import (FluidParams, SolutionField, TXDomain, UHBox,
                    UHFunction)

__all__ = [
    "galilean_solution",
    "constant_solution",
    "constant_pair",
    "simple_pair",
    "bessel_f",
    "bessel_f_box",
    "bessel_order",
    "bessel_wronskian_error",
    "printed_c316_g",
    "CatalogEntry",
    "catalog",
    "catalog_ids",
    "catalog_entry",
]

DEFAULT_FIELD_DOMAIN = TXDomain(0.5, 3.0, -2.0, 2.0)
DEFAULT_PAIR_BOX = UHBox(-1.0, 1.0, 0.5, 2.0)
BESSEL_BOX = UHBox(0.3, 1.2, 0.6, 1.6)


# ---------------------------------------------------------------------------
# closed-form fields
# ---------------------------------------------------------------------------

def galilean_solution(c1: float, c2: float,
                      domain: TXDomain = None) -> SolutionField:
    """The boost-invariant solution u = (x + c1)/t, h = c2/t on t > 0."""
    if c2 <= 0.0:
        raise ParameterError(f"c2 must be positive, got {c2}")
    domain = domain or DEFAULT_FIELD_DOMAIN
    if domain.t0 <= 0.0:
        raise ParameterError("domain must satisfy t > 0 (h = c2/t > 0)")

    def evaluate(t, x):
        return (x + c1) / t, c2 / t

    def deriv(t, x):
        return (-(x + c1) / (t * t), 1.0 / t, -c2 / (t * t), 0.0)

    return SolutionField(evaluate, domain, "galilean",
                         deriv=deriv, meta={"c1": c1, "c2": c2})


def constant_solution(k1: float, k2: float,
                      domain: TXDomain = None) -> SolutionField:
    """The constant state (u, h) = (k1, k2), k2 > 0."""
    if k2 <= 0.0:
        raise ParameterError(f"k2 must be positive, got {k2}")
    domain = domain or DEFAULT_FIELD_DOMAIN
    zero4 = (0.0, 0.0, 0.0, 0.0)
    return SolutionField(lambda t, x: (k1, k2), domain, "constant",
                         deriv=lambda t, x: zero4, meta={"k1": k1, "k2": k2})


def constant_pair(f0: float, g0: float, params: FluidParams = None,
                  box: UHBox = None) -> "HodographPair":
    """The constant pair (f0, g0): the time/space translation generators
    f0 p_t + g0 p_x.  (1, 0) and (0, 1) are the two basis translations;
    (1, c) is the traveling-wave reduction label."""
    if f0 == 0.0 and g0 == 0.0:
        raise ParameterError("the zero pair generates nothing")
    params = params or FluidParams(H=1.0)
    return HodographPair(
        UHFunction.constant(f0), UHFunction.constant(g0),
        box or DEFAULT_PAIR_BOX, params, label=f"const({f0:g},{g0:g})")


# ---------------------------------------------------------------------------
# the rational/logarithmic pair family
# ---------------------------------------------------------------------------

def simple_pair(c1=0.0, c2=0.0, c3=0.0, c4=0.0, c5=0.0,
                params: FluidParams = None, box: UHBox = None,
                label=None) -> HodographPair:
    """The four-parameter rational/logarithmic pair

        f = c1 u/h + c2 / h + c3 u + c4,
        g = c1 (u^2/h + gH/h - g ln h) + c2 u/h
            + c3 (u^2/2 - gH ln h - g h) + c5,

    written with g = gravity so the pair solves the linearized system for
    any gravity; at gravity = 1 these are the conventional expressions.
    Partials of g are the derivatives of the printed formula itself, so
    residual checks exercise the formula rather than the defining
    relations.
    """
    if c1 == 0.0 and c2 == 0.0 and c3 == 0.0 and c4 == 0.0:
        raise ParameterError("f would vanish identically: c1..c4 all zero")
    params = params or FluidParams(H=1.0)
    box = box or DEFAULT_PAIR_BOX
    H, gv = params.H, params.gravity

    f = UHFunction(
        lambda u, h: c1 * u / h + c2 / h + c3 * u + c4,
        du=lambda u, h: c1 / h + c3,
        dh=lambda u, h: -(c1 * u + c2) / (h * h),
        duu=lambda u, h: 0.0,
        duh=lambda u, h: -c1 / (h * h),
        dhh=lambda u, h: 2.0 * (c1 * u + c2) / (h * h * h),
        analytic=True, label="rational-f")

    g = UHFunction(
        lambda u, h: (c1 * (u * u / h + gv * H / h - gv * math.log(h))
                      + c2 * u / h
                      + c3 * (0.5 * u * u - gv * H * math.log(h) - gv * h)
                      + c5),
        du=lambda u, h: 2.0 * c1 * u / h + c2 / h + c3 * u,
        dh=lambda u, h: (c1 * (-(u * u) / (h * h) - gv * H / (h * h) - gv / h)
                         - c2 * u / (h * h)
                         + c3 * (-gv * H / h - gv)),
        duu=lambda u, h: 2.0 * c1 / h + c3,
        duh=lambda u, h: -(2.0 * c1 * u + c2) / (h * h),
        dhh=lambda u, h: (c1 * (2.0 * u * u / (h * h * h)
                                + 2.0 * gv * H / (h * h * h) + gv / (h * h))
                          + 2.0 * c2 * u / (h * h * h)
                          + c3 * gv * H / (h * h)),
        analytic=True, label="rational-g")

    return HodographPair(f, g, box, params,
                         label=label or f"rational(c1={c1:g},c2={c2:g},c3={c3:g},c4={c4:g})",
                         meta={"c": (c1, c2, c3, c4, c5)})


# ---------------------------------------------------------------------------
# the separable Bessel family
# ---------------------------------------------------------------------------

def bessel_order(c: float) -> float:
    """Order b = sqrt(1 - 4c) of the separable family, real for c <= 1/4."""
    if c > 0.25:
        raise ParameterError(
            f"c={c} gives imaginary order sqrt(1-4c); only c in (0, 1/4] is supported")
    return math.sqrt(1.0 - 4.0 * c)


def _bessel_w(b, c3, c4):
    """W(z) = c3 J_b(z) + c4 Y_b(z) with first/second derivative closures."""
    def w(z):
        out = 0.0
        if c3 != 0.0:
            out += c3 * jv(b, z)
        if c4 != 0.0:
            out += c4 * yv(b, z)
        return out

    def wp(z):
        # derivative recurrence: C_b'(z) = C_{b-1}(z) - (b/z) C_b(z)
        out = 0.0
        if c3 != 0.0:
            out += c3 * (jv(b - 1.0, z) - (b / z) * jv(b, z))
        if c4 != 0.0:
            out += c4 * (yv(b - 1.0, z) - (b / z) * yv(b, z))
        return out

    def wpp(z):
        # from the defining ODE: z^2 W'' + z W' + (z^2 - b^2) W = 0
        return -wp(z) / z - (1.0 - (b * b) / (z * z)) * w(z)

    return w, wp, wpp


def bessel_f(c: float, c1=1.0, c2=0.0, c3=1.0, c4=0.0,
             params: FluidParams = None) -> UHFunction:
    """Separable solution of the compatibility equation,

        f = h^{-1/2} (c1 sin(a u) + c2 cos(a u))
                     (c3 J_b(z) + c4 Y_b(z)),

    with a = sqrt(c / (gravity H)), z = 2 sqrt(c h / H) and order
    b = sqrt(1 - 4c).  Requires c in (0, 1/4] (real order) and H > 0.
    Partials use the Bessel derivative recurrence and the defining ODE.
    """
    params = params or FluidParams(H=1.0)
    if c <= 0.0:
        raise ParameterError(f"c must be positive, got {c}")
    b = bessel_order(c)
    if params.H <= 0.0:
        raise ParameterError("the separable family needs H > 0")
    if c1 == 0.0 and c2 == 0.0:
        raise ParameterError("velocity factor vanishes: c1 = c2 = 0")
    if c3 == 0.0 and c4 == 0.0:
        raise ParameterError("height factor vanishes: c3 = c4 = 0")
    H, gv = params.H, params.gravity
    alpha = math.sqrt(c / (gv * H))
    lam = 2.0 * math.sqrt(c / H)       # z = lam sqrt(h)
    w, wp, wpp = _bessel_w(b, c3, c4)

    def F(u):
        return c1 * math.sin(alpha * u) + c2 * math.cos(alpha * u)

    def Fp(u):
        return alpha * (c1 * math.cos(alpha * u) - c2 * math.sin(alpha * u))

    def guard(h):
        if h <= 0.0:
            raise DomainError(f"height must be positive, got h={h}")
        return lam * math.sqrt(h)

    def value(u, h):
        z = guard(h)
        return h ** -0.5 * F(u) * w(z)

    def du(u, h):
        z = guard(h)
        return h ** -0.5 * Fp(u) * w(z)

    def duu(u, h):
        return -(alpha * alpha) * value(u, h)

    def _a_factor(h):
        # f_h = F(u) * A(h) with A = h^{-3/2} (z W' - W) / 2
        z = guard(h)
        return 0.5 * h ** -1.5 * (z * wp(z) - w(z))

    def dh(u, h):
        return F(u) * _a_factor(h)

    def duh(u, h):
        return Fp(u) * _a_factor(h)

    def dhh(u, h):
        z = guard(h)
        return F(u) * h ** -2.5 * (z * z * wpp(z) - 3.0 * (z * wp(z) - w(z))) / 4.0

    return UHFunction(value, du=du, dh=dh, duu=duu, duh=duh, dhh=dhh,
                      analytic=True,
                      label=f"separable(c={c:g}, b={b:g})")


def bessel_f_box(box: UHBox = None) -> UHBox:
    """Default validity box used when pairing a separable f."""
    return box or BESSEL_BOX


def bessel_wronskian_error(b: float, z_values) -> float:
    """Max deviation of J_b Y_b' - J_b' Y_b from 2/(pi z) over z samples."""
    worst = 0.0
    for z in np.atleast_1d(z_values):
        jp = jv(b - 1.0, z) - (b / z) * jv(b, z)
        yp = yv(b - 1.0, z) - (b / z) * yv(b, z)
        worst = max(worst, abs(jv(b, z) * yp - jp * yv(b, z) - 2.0 / (math.pi * z)))
    return worst


def printed_c316_g(c1: float = 1.0, c5: float = 0.0,
                   params: FluidParams = None) -> UHFunction:
    """The companion g for the c = 3/16 separable f, transcribed verbatim
    from its printed display (argument structure included).  Kept only
    for the audit that measures its linearized-system residual against
    the path-integrated reconstruction; the catalog never uses it.
    """
    params = params or FluidParams(H=1.0)
    H = params.H
    c = 3.0 / 16.0

    def value(u, h):
        if h <= 0.0:
            raise DomainError(f"height must be positive, got h={h}")
        r = math.sqrt(h / H)
        return c1 * H / h ** 1.25 * (
            r * math.sin(math.sqrt(c * h / H)) * (
                math.cos(math.sqrt(4.0 * c * h / H) * u) / math.sqrt(3.0)
                + u / math.sqrt(H) * math.sin(math.sqrt(4.0 * c * h / H)))
            + (h / H) * math.cos(math.sqrt(c * h / H) * u)
            * math.cos(math.sqrt(4.0 * c * h / H))
        ) + c5

    return UHFunction(value, analytic=False, label="printed-g(c=3/16)")


# ---------------------------------------------------------------------------
# the catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """A named constructor for one exact solution or generating pair."""

    id: str
    kind: str                   # closed_field | hodograph_pair | separable_f
    parameters: dict
    build: Callable[[], object]
    note: str = ""


def catalog(params: FluidParams = None) -> list:
    """All catalog entries for the given constants.

    closed_field entries build SolutionFields; hodograph_pair and
    separable_f entries build HodographPairs (the separable one
    reconstructs its g by path integration).  The separable family needs
    H > 0 and is omitted on the H <= 0 branch.
    """
    params = params or FluidParams(H=1.0)

    def bessel_pair():
        f = bessel_f(3.0 / 16.0, c1=1.0, c2=0.0, c3=1.0, c4=0.0, params=params)
        box = bessel_f_box()
        return pair_from_f(f, base=box.center, g0=0.0, params=params,
                           box=box, label="bessel-c316")

    entries = [
        CatalogEntry("constant", "closed_field", {"k1": 0.3, "k2": 1.0},
                     lambda: constant_solution(0.3, 1.0),
                     note="trivial constant state"),
        CatalogEntry("galilean", "closed_field", {"c1": 0.0, "c2": 1.0},
                     lambda: galilean_solution(0.0, 1.0),
                     note="invariant solution of the boost subalgebra"),
        CatalogEntry("pair-c1", "hodograph_pair", {"c1": 1.0},
                     lambda: simple_pair(c1=1.0, params=params,
                                         box=UHBox(-1.0, 1.0, 0.5, 2.0),
                                         label="pair-c1"),
                     note="rational pair, u/h term"),
        CatalogEntry("pair-c2", "hodograph_pair", {"c2": 1.0},
                     lambda: simple_pair(c2=1.0, params=params,
                                         box=UHBox(-1.0, 1.0, 0.25, 2.0),
                                         label="pair-c2"),
                     note="inverts to the boost-invariant closed form"),
        CatalogEntry("pair-c3", "hodograph_pair", {"c3": 1.0},
                     lambda: simple_pair(c3=1.0, params=params,
                                         box=UHBox(-1.0, 1.0, 0.5, 2.0),
                                         label="pair-c3"),
                     note="rational/logarithmic pair"),
    ]
    if params.H > 0.0:
        entries.append(CatalogEntry(
            "bessel-c316", "separable_f",
            {"c": 3.0 / 16.0, "c1": 1.0, "c3": 1.0},
            bessel_pair,
            note="separable compatibility solution, reconstructed g"))
    return entries


def catalog_ids(params: FluidParams = None) -> list:
    return [e.id for e in catalog(params)]


def catalog_entry(entry_id: str, params: FluidParams = None) -> CatalogEntry:
    for e in catalog(params):
        if e.id == entry_id:
            return e
    raise ParameterError(f"unknown catalog id: {entry_id!r}")
