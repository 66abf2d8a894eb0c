"""Candidate symmetry generators and their numerical certification.

A point vector field on (t, x, u, h)-space,

    Q = tau p_t + xi p_x + eta p_u + phi p_h,

is certified as a symmetry by prolonging it to first-order jets and
checking that the prolonged field annihilates both equation residuals on
the solution manifold.  Everything here is evaluated numerically at
sample points: no symbolic derivation, which keeps the check independent
of how a generator was obtained and catches coefficient typos.

The first prolongation adds coefficients for the derivative coordinates,

    eta^t = D_t eta - u_t D_t tau - u_x D_t xi,
    eta^x = D_x eta - u_t D_x tau - u_x D_x xi,
    phi^t = D_t phi - h_t D_t tau - h_x D_t xi,
    phi^x = D_x phi - h_t D_x tau - h_x D_x xi,

with the total derivatives truncated to first-order jet data
(D_t = p_t + u_t p_u + h_t p_h along a jet, D_x analogous).
"""

import math

import numpy as np

from . import _fd
from .errors import DomainError, EvaluationError, PreconditionError
from .model import FluidParams, JetPoint, mswe_residual

__all__ = [
    "VectorFieldSpec",
    "ProlongedCoefficients",
    "prolong1",
    "invariance_defect",
    "determining_defect",
    "lie_bracket",
    "bracket_field",
    "lie_series",
    "gen_time_translation",
    "gen_space_translation",
    "gen_scaling",
    "gen_boost",
    "gen_swe_second_scaling",
    "gen_swe_projective",
    "gen_hodograph",
    "general_symmetry_family",
    "combine",
]

_ZERO4 = (0.0, 0.0, 0.0, 0.0)


class VectorFieldSpec:
    """Coefficient quadruple (tau, xi, eta, phi) with first partials.

    Coefficients are callables of (t, x, u, h).  Gradients, when supplied,
    are callables returning the 4-tuple (c_t, c_x, c_u, c_h); missing ones
    fall back to 4th-order finite differences and the field is flagged
    non-analytic (defect tolerances are split on this flag).
    """

    __slots__ = ("tau", "xi", "eta", "phi", "_grads", "analytic", "label")

    def __init__(self, tau, xi, eta, phi, grads=None, label=""):
        self.tau, self.xi, self.eta, self.phi = tau, xi, eta, phi
        coeffs = (tau, xi, eta, phi)
        supplied = grads if grads is not None else (None,) * 4
        self._grads = tuple(
            g if g is not None else _fd_gradient(c)
            for g, c in zip(supplied, coeffs)
        )
        self.analytic = grads is not None and all(g is not None for g in supplied)
        self.label = label

    def __repr__(self):
        kind = "analytic" if self.analytic else "fd"
        return f"VectorFieldSpec({self.label or '<anon>'}, {kind})"

    def coefficients(self, point):
        t, x, u, h = point
        vals = (self.tau(t, x, u, h), self.xi(t, x, u, h),
                self.eta(t, x, u, h), self.phi(t, x, u, h))
        if not all(math.isfinite(v) for v in vals):
            raise EvaluationError(f"non-finite coefficients at {point}")
        return np.array(vals)

    def gradients(self, point):
        """4x4 matrix G[i][j] = d(coefficient i)/d(coordinate j)."""
        t, x, u, h = point
        g = np.array([grad(t, x, u, h) for grad in self._grads], dtype=float)
        if not np.all(np.isfinite(g)):
            raise EvaluationError(f"non-finite coefficient gradient at {point}")
        return g


def _fd_gradient(coeff):
    def grad(t, x, u, h):
        args = (t, x, u, h)
        return tuple(_fd.partial(coeff, args, i) for i in range(4))
    return grad


def _const_grad(*rows):
    return lambda t, x, u, h: rows


# ---------------------------------------------------------------------------
# the generator library
# ---------------------------------------------------------------------------

def gen_time_translation():
    return VectorFieldSpec(
        lambda t, x, u, h: 1.0, *[lambda t, x, u, h: 0.0] * 3,
        grads=(_const_grad(0.0, 0.0, 0.0, 0.0),) * 4, label="d_t")


def gen_space_translation():
    z = lambda t, x, u, h: 0.0
    return VectorFieldSpec(
        z, lambda t, x, u, h: 1.0, z, z,
        grads=(_const_grad(0.0, 0.0, 0.0, 0.0),) * 4, label="d_x")


def gen_scaling():
    """Joint scaling of t and x:  t p_t + x p_x."""
    z = lambda t, x, u, h: 0.0
    zg = _const_grad(0.0, 0.0, 0.0, 0.0)
    return VectorFieldSpec(
        lambda t, x, u, h: t, lambda t, x, u, h: x, z, z,
        grads=(_const_grad(1.0, 0.0, 0.0, 0.0),
               _const_grad(0.0, 1.0, 0.0, 0.0), zg, zg),
        label="scaling")


def gen_boost():
    """Galilean boost:  t p_x + p_u."""
    z = lambda t, x, u, h: 0.0
    zg = _const_grad(0.0, 0.0, 0.0, 0.0)
    return VectorFieldSpec(
        z, lambda t, x, u, h: t, lambda t, x, u, h: 1.0, z,
        grads=(zg, _const_grad(1.0, 0.0, 0.0, 0.0), zg, zg),
        label="boost")


def gen_swe_second_scaling():
    """Second scaling of the H = 0 branch:  2h p_h + u p_u - t p_t."""
    z = lambda t, x, u, h: 0.0
    zg = _const_grad(0.0, 0.0, 0.0, 0.0)
    return VectorFieldSpec(
        lambda t, x, u, h: -t, z,
        lambda t, x, u, h: u, lambda t, x, u, h: 2.0 * h,
        grads=(_const_grad(-1.0, 0.0, 0.0, 0.0), zg,
               _const_grad(0.0, 0.0, 1.0, 0.0),
               _const_grad(0.0, 0.0, 0.0, 2.0)),
        label="swe-second-scaling")


def gen_swe_projective(gravity=1.0):
    """Projective-type generator of the H = 0 branch, with the symbol that
    multiplies h read as the gravity constant:

        (2x - 6ut) p_t + (6 gravity h t - 3u^2 t) p_x
        + (4 gravity h + u^2) p_u + 4hu p_h

    Its defect is measured by the audit campaign rather than asserted.
    """
    gv = float(gravity)
    return VectorFieldSpec(
        lambda t, x, u, h: 2.0 * x - 6.0 * u * t,
        lambda t, x, u, h: (6.0 * gv * h - 3.0 * u * u) * t,
        lambda t, x, u, h: 4.0 * gv * h + u * u,
        lambda t, x, u, h: 4.0 * h * u,
        grads=(
            lambda t, x, u, h: (-6.0 * u, 2.0, -6.0 * t, 0.0),
            lambda t, x, u, h: (6.0 * gv * h - 3.0 * u * u, 0.0,
                                -6.0 * u * t, 6.0 * gv * t),
            lambda t, x, u, h: (0.0, 0.0, 2.0 * u, 4.0 * gv),
            lambda t, x, u, h: (0.0, 0.0, 4.0 * h, 4.0 * u),
        ),
        label="swe-projective")


def gen_hodograph(pair):
    """The generator f(u, h) p_t + g(u, h) p_x attached to a linearized-system
    solution pair."""
    f, g = pair.f, pair.g
    z = lambda t, x, u, h: 0.0
    zg = _const_grad(0.0, 0.0, 0.0, 0.0)
    return VectorFieldSpec(
        lambda t, x, u, h: f(u, h),
        lambda t, x, u, h: g(u, h),
        z, z,
        grads=(
            lambda t, x, u, h: (0.0, 0.0, f.du(u, h), f.dh(u, h)),
            lambda t, x, u, h: (0.0, 0.0, g.du(u, h), g.dh(u, h)),
            zg, zg),
        label=f"hodograph({pair.label})" if pair.label else "hodograph")


def general_symmetry_family(c1, c2, pair):
    """The full solution family of the determining system for H != 0:

        tau = c1 t + f(u, h),  xi = c1 x + c2 t + g(u, h),
        eta = c2,  phi = 0.
    """
    f, g = pair.f, pair.g
    z = lambda t, x, u, h: 0.0
    zg = _const_grad(0.0, 0.0, 0.0, 0.0)
    return VectorFieldSpec(
        lambda t, x, u, h: c1 * t + f(u, h),
        lambda t, x, u, h: c1 * x + c2 * t + g(u, h),
        lambda t, x, u, h: c2,
        z,
        grads=(
            lambda t, x, u, h: (c1, 0.0, f.du(u, h), f.dh(u, h)),
            lambda t, x, u, h: (c2, c1, g.du(u, h), g.dh(u, h)),
            zg, zg),
        label=f"family(c1={c1:g}, c2={c2:g})")


def combine(terms, label=""):
    """Pointwise linear combination sum(c_i * v_i) of vector field specs."""
    terms = [(float(c), v) for c, v in terms]

    def coeff(idx_attr):
        def call(t, x, u, h):
            return sum(c * getattr(v, idx_attr)(t, x, u, h) for c, v in terms)
        return call

    def grad(i):
        def call(t, x, u, h):
            out = np.zeros(4)
            for c, v in terms:
                out += c * np.asarray(v._grads[i](t, x, u, h))
            return tuple(out)
        return call

    spec = VectorFieldSpec(
        coeff("tau"), coeff("xi"), coeff("eta"), coeff("phi"),
        grads=tuple(grad(i) for i in range(4)), label=label)
    spec.analytic = all(v.analytic for _, v in terms)
    return spec


# ---------------------------------------------------------------------------
# prolongation and defects
# ---------------------------------------------------------------------------

class ProlongedCoefficients(tuple):
    """The four first-prolongation coefficients (eta_t, eta_x, phi_t, phi_x)."""

    __slots__ = ()

    def __new__(cls, eta_t, eta_x, phi_t, phi_x):
        return super().__new__(cls, (eta_t, eta_x, phi_t, phi_x))

    eta_t = property(lambda self: self[0])
    eta_x = property(lambda self: self[1])
    phi_t = property(lambda self: self[2])
    phi_x = property(lambda self: self[3])


def prolong1(v: VectorFieldSpec, jet: JetPoint) -> ProlongedCoefficients:
    """First prolongation coefficients of v at a jet."""
    g = v.gradients(jet.base)
    # total derivatives of each coefficient along the jet
    dt = g[:, 0] + jet.u_t * g[:, 2] + jet.h_t * g[:, 3]
    dx = g[:, 1] + jet.u_x * g[:, 2] + jet.h_x * g[:, 3]
    tau, xi, eta, phi = range(4)
    return ProlongedCoefficients(
        dt[eta] - jet.u_t * dt[tau] - jet.u_x * dt[xi],
        dx[eta] - jet.u_t * dx[tau] - jet.u_x * dx[xi],
        dt[phi] - jet.h_t * dt[tau] - jet.h_x * dt[xi],
        dx[phi] - jet.h_t * dx[tau] - jet.h_x * dx[xi],
    )


ON_MANIFOLD_TOL = 1e-12


def invariance_defect(v: VectorFieldSpec, jet: JetPoint, params: FluidParams):
    """Value of the prolonged field applied to both residuals at an
    on-manifold jet; (0, 0) exactly when v generates a symmetry.

        d1 = eta^t + u eta^x + eta u_x
             + gravity (1 + H/h) phi^x - gravity (H/h^2) phi h_x
        d2 = phi^t + u phi^x + eta h_x + h eta^x + phi u_x
    """
    r1, r2 = mswe_residual(jet, params)
    if abs(r1) > ON_MANIFOLD_TOL or abs(r2) > ON_MANIFOLD_TOL:
        raise PreconditionError(
            f"jet is off-manifold: residual=({r1:.3e}, {r2:.3e})")
    eta_t, eta_x, phi_t, phi_x = prolong1(v, jet)
    t, x, u, h = jet.base
    eta = v.eta(t, x, u, h)
    phi = v.phi(t, x, u, h)
    p = params.pressure_coeff(h)
    dp = -params.gravity * params.H / (h * h)  # d/dh of the pressure coeff
    d1 = eta_t + u * eta_x + eta * jet.u_x + p * phi_x + dp * phi * jet.h_x
    d2 = phi_t + u * phi_x + eta * jet.h_x + h * eta_x + phi * jet.u_x
    return d1, d2


def determining_defect(v: VectorFieldSpec, point, params: FluidParams):
    """Left-hand sides of the eight determining equations at a point.

    These are the coefficients of the derivative monomials after the
    invariance conditions are restricted to the solution manifold and
    split; a field solves all eight iff it generates a symmetry.  The
    pressure coefficient carries the gravity factor so the split stays
    exact for gravity != 1.
    """
    t, x, u, h = point
    if h <= 0.0:
        raise DomainError(f"height must be positive, got h={h}")
    g = v.gradients(point)
    (tau_t, tau_x, tau_u, tau_h) = g[0]
    (xi_t, xi_x, xi_u, xi_h) = g[1]
    (eta_t, eta_x, eta_u, eta_h) = g[2]
    (phi_t, phi_x, phi_u, phi_h) = g[3]
    eta = v.eta(t, x, u, h)
    phi = v.phi(t, x, u, h)
    p = params.pressure_coeff(h)
    q = params.gravity * params.H / (h * h)
    return np.array([
        xi_u - u * tau_u + h * tau_h,
        xi_h - u * tau_h + p * tau_u,
        q * phi - p * (tau_t - xi_x - eta_u + phi_h + 2 * u * tau_x),
        phi + h * (tau_t - xi_x + eta_u - phi_h + 2 * u * tau_x),
        eta - h * eta_h + u * (tau_t - xi_x) - xi_t + u * u * tau_x
        + p * (phi_u + h * tau_x),
        eta + h * eta_h + u * (tau_t - xi_x) - xi_t + u * u * tau_x
        - p * (phi_u - h * tau_x),
        eta_t + u * eta_x + p * phi_x,
        phi_t + u * phi_x + h * eta_x,
    ])


# ---------------------------------------------------------------------------
# brackets and the Lie series
# ---------------------------------------------------------------------------

def lie_bracket(v: VectorFieldSpec, w: VectorFieldSpec, point):
    """Commutator coefficients [v, w] = (v . grad) w - (w . grad) v at a point."""
    cv = v.coefficients(point)
    cw = w.coefficients(point)
    gv = v.gradients(point)
    gw = w.gradients(point)
    return gw @ cv - gv @ cw


def bracket_field(v: VectorFieldSpec, w: VectorFieldSpec) -> VectorFieldSpec:
    """[v, w] wrapped as a field of its own for nesting inside the Lie
    series.  Coefficient vectors are memoized per point and the gradient
    is one vectorized FD Jacobian; without this, nesting the bracket
    twice re-evaluates the inner commutator thousands of times."""
    cache = {}

    def vec(point):
        val = cache.get(point)
        if val is None:
            if len(cache) > 8192:
                cache.clear()
            val = lie_bracket(v, w, point)
            cache[point] = val
        return val

    jac_cache = {}

    def jacobian(point):
        jac = jac_cache.get(point)
        if jac is None:
            if len(jac_cache) > 2048:
                jac_cache.clear()
            jac = np.empty((4, 4))
            for j in range(4):
                d = _fd.STEP1 * max(1.0, abs(point[j]))
                p2 = list(point); p2[j] += 2 * d
                p1 = list(point); p1[j] += d
                m1 = list(point); m1[j] -= d
                m2 = list(point); m2[j] -= 2 * d
                jac[:, j] = (-vec(tuple(p2)) + 8 * vec(tuple(p1))
                             - 8 * vec(tuple(m1)) + vec(tuple(m2))) / (12 * d)
            jac_cache[point] = jac
        return jac

    def coeff(i):
        return lambda t, x, u, h: float(vec((t, x, u, h))[i])

    def grad(i):
        return lambda t, x, u, h: tuple(jacobian((t, x, u, h))[i])

    spec = VectorFieldSpec(coeff(0), coeff(1), coeff(2), coeff(3),
                           grads=tuple(grad(i) for i in range(4)),
                           label=f"[{v.label},{w.label}]")
    spec.analytic = False  # gradients are finite-difference Jacobian rows
    return spec


def lie_series(v: VectorFieldSpec, w: VectorFieldSpec, point, epsilon,
               order=3):
    """Truncated Lie-series value of the adjoint flow of v applied to w.

    Convention matching the closed-form adjoint table: term n is
    (epsilon^n / n!) ad^n(w) with ad(w) = [w, v], so the scaling flow acts
    on translation-type fields as e^{+epsilon}.
    """
    total = w.coefficients(point).astype(float)
    current = w
    fact = 1.0
    for n in range(1, order + 1):
        current = bracket_field(current, v)
        fact *= n
        total += (epsilon ** n / fact) * current.coefficients(point)
    return total
