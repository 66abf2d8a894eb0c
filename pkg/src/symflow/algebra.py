"""Finite data model of the invariance algebra and its classification.

A general element is written

    v = a * scaling + b * boost + L(f, g),

where scaling = t p_t + x p_x, boost = t p_x + p_u, and L(f, g) is the
hodograph generator attached to a linearized-system pair.  The closed
commutators are

    [scaling, boost] = 0,          [L(f, g), scaling] = L(f, g),
    [boost, L(f, g)] = L(f_u, g_u - f),   [L(f1, g1), L(f2, g2)] = 0,

and the induced adjoint flows have closed forms implemented below; a
truncated Lie series evaluated through the numerical bracket provides an
independent cross-check.

Two normalizers are provided.  `normalize_g` classifies elements of the
full algebra into scaling+boost, boost-only, and pure-pair classes (the
pair determined up to a constant multiplier and a shift of u).
`normalize_g1` classifies the four-dimensional subalgebra spanned by
scaling, boost, p_x, p_t following the coarser list appropriate to its
weaker internal equivalence; `orbit_equivalent_g1` is a numerical audit
that searches adjoint words between spans and documents any finer
equivalence (notably the removability of the p_x part of p_t + p_x).
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .errors import ParameterError, PreconditionError
from .hodograph import HodographPair
from .model import REFERENCE_BOX, FluidParams, UHBox
from . import vfield

__all__ = [
    "AlgebraElement",
    "G1Element",
    "CanonicalClass",
    "adjoint",
    "commutator_table_check",
    "normalize_g",
    "normalize_g1",
    "g1_adjoint",
    "g1_random_word",
    "orbit_equivalent_g1",
    "OrbitWitness",
    "adjoint_series_gap",
]

ZTOL = 1e-12


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraElement:
    """a * scaling + b * boost + L(pair); pair may be absent."""

    a: float
    b: float
    pair: Optional[HodographPair] = None

    def is_zero(self, box: UHBox = REFERENCE_BOX):
        if abs(self.a) > ZTOL or abs(self.b) > ZTOL:
            return False
        return self.pair is None or _pair_scale(self.pair, box) < ZTOL

    def as_field(self):
        terms = []
        if self.a != 0.0:
            terms.append((self.a, vfield.gen_scaling()))
        if self.b != 0.0:
            terms.append((self.b, vfield.gen_boost()))
        if self.pair is not None:
            terms.append((1.0, vfield.gen_hodograph(self.pair)))
        if not terms:
            zero = lambda t, x, u, h: 0.0
            zg = lambda t, x, u, h: (0.0, 0.0, 0.0, 0.0)
            return vfield.VectorFieldSpec(zero, zero, zero, zero,
                                          grads=(zg,) * 4, label="0")
        return vfield.combine(terms, label="algebra-element")


@dataclass(frozen=True)
class G1Element:
    """a1 * scaling + a2 * boost + a3 * p_x + a4 * p_t."""

    a1: float
    a2: float
    a3: float
    a4: float

    def as_array(self):
        return np.array([self.a1, self.a2, self.a3, self.a4], dtype=float)

    @classmethod
    def from_array(cls, arr):
        return cls(*(float(v) for v in arr))

    @property
    def norm(self):
        return float(np.linalg.norm(self.as_array()))

    def is_zero(self):
        return self.norm < ZTOL


# ---------------------------------------------------------------------------
# canonical classes
# ---------------------------------------------------------------------------

TAG_D_PLUS_AG = "scaling+a*boost"
TAG_G_ONLY = "boost"
TAG_L_CLASS = "pair"
TAG_G_DELTA_DT = "boost+d*dt"
TAG_DT_DELTA_DX = "dt+d*dx"
TAG_DX_ONLY = "dx"

_PAYLOAD_ATOL = 1e-9
_SIGNATURE_ATOL = 1e-6


@dataclass(frozen=True)
class CanonicalClass:
    """Tagged normal form of a one-dimensional subalgebra representative."""

    tag: str
    a: Optional[float] = None
    delta: Optional[int] = None
    signature: Optional[np.ndarray] = field(default=None, compare=False)
    rep_pair: Optional[HodographPair] = field(default=None, compare=False,
                                              repr=False)

    def __eq__(self, other):
        if not isinstance(other, CanonicalClass):
            return NotImplemented
        if self.tag != other.tag or self.delta != other.delta:
            return False
        if (self.a is None) != (other.a is None):
            return False
        if self.a is not None and not math.isclose(
                self.a, other.a, rel_tol=1e-9, abs_tol=_PAYLOAD_ATOL):
            return False
        if (self.signature is None) != (other.signature is None):
            return False
        if self.signature is not None and not np.allclose(
                self.signature, other.signature, atol=_SIGNATURE_ATOL):
            return False
        return True

    __hash__ = None

    def representative_g1(self) -> G1Element:
        if self.tag == TAG_D_PLUS_AG:
            return G1Element(1.0, self.a, 0.0, 0.0)
        if self.tag == TAG_G_DELTA_DT:
            return G1Element(0.0, 1.0, 0.0, float(self.delta))
        if self.tag == TAG_DT_DELTA_DX:
            return G1Element(0.0, 0.0, float(self.delta), 1.0)
        if self.tag == TAG_DX_ONLY:
            return G1Element(0.0, 0.0, 1.0, 0.0)
        if self.tag == TAG_G_ONLY:
            return G1Element(0.0, 1.0, 0.0, 0.0)
        raise ParameterError(f"{self.tag!r} has no four-component representative")

    def representative_g(self) -> AlgebraElement:
        if self.tag == TAG_D_PLUS_AG:
            return AlgebraElement(1.0, self.a, None)
        if self.tag == TAG_G_ONLY:
            return AlgebraElement(0.0, 1.0, None)
        if self.tag == TAG_L_CLASS:
            return AlgebraElement(0.0, 0.0, self.rep_pair)
        raise ParameterError(f"{self.tag!r} has no full-algebra representative")


# ---------------------------------------------------------------------------
# adjoint actions (closed forms)
# ---------------------------------------------------------------------------

def adjoint(flow, epsilon: float, target: AlgebraElement) -> AlgebraElement:
    """Closed-form adjoint action of a one-parameter flow on an element.

    `flow` is "scaling", "boost", or a HodographPair (the L(f, g) flow):

        Ad(e^{e scaling}) L(f, g) = e^e L(f, g)
        Ad(e^{e boost})  L(f, g) = L(f(u-e, h), g(u-e, h) + e f(u-e, h))
        Ad(e^{e L})      scaling = scaling - e L
        Ad(e^{e L})      boost   = boost + e L(f_u, g_u - f)

    and identity on every other basis pair.
    """
    a, b, pair = target.a, target.b, target.pair
    if flow == "scaling":
        return AlgebraElement(a, b, pair.scaled(math.exp(epsilon))
                              if pair is not None else None)
    if flow == "boost":
        return AlgebraElement(a, b, pair.boosted(epsilon)
                              if pair is not None else None)
    if isinstance(flow, HodographPair):
        extra = []
        if a != 0.0:
            extra.append((-a * epsilon, flow))
        if b != 0.0:
            extra.append((b * epsilon, flow.u_derived()))
        new_pair = pair
        for c, p in extra:
            new_pair = p.scaled(c) if new_pair is None else new_pair.plus(p, c)
        return AlgebraElement(a, b, new_pair)
    raise ParameterError(f"unknown adjoint flow {flow!r}")


def adjoint_series_gap(flow, epsilon, target: AlgebraElement, points,
                       order=3):
    """Max coefficient gap between the closed-form adjoint and the Lie
    series truncated at `order`, evaluated via the numerical bracket."""
    if flow == "scaling":
        vf = vfield.gen_scaling()
    elif flow == "boost":
        vf = vfield.gen_boost()
    elif isinstance(flow, HodographPair):
        vf = vfield.gen_hodograph(flow)
    else:
        raise ParameterError(f"unknown adjoint flow {flow!r}")
    wf = target.as_field()
    closed = adjoint(flow, epsilon, target).as_field()
    gap = 0.0
    for point in points:
        series = vfield.lie_series(vf, wf, tuple(point), epsilon, order=order)
        gap = max(gap, float(np.max(np.abs(series - closed.coefficients(tuple(point))))))
    return gap


# ---------------------------------------------------------------------------
# commutator table check
# ---------------------------------------------------------------------------

def commutator_table_check(samples=50, seed=0, params: FluidParams = None,
                           pairs=None):
    """Evaluate all four closed commutator relations at random points.

    Returns a report dict with the max deviation per relation and, for
    every pair involved, its membership residual in the linearized system
    (a pair violating it is reported here rather than silently used).
    """
    from .solutions import catalog  # local import avoids a cycle

    params = params or FluidParams(H=1.0)
    if pairs is None:
        built = {e.id: e.build() for e in catalog(params)
                 if e.kind in ("hodograph_pair",)}
        pairs = [built["pair-c2"], built["pair-c3"], built["pair-c1"]]

    rng = np.random.default_rng(seed)
    pts = np.column_stack([
        rng.uniform(0.5, 2.0, samples),
        rng.uniform(-1.0, 1.0, samples),
        rng.uniform(-1.0, 1.0, samples),
        rng.uniform(0.5, 2.0, samples),
    ])

    D = vfield.gen_scaling()
    G = vfield.gen_boost()
    relations = {"scaling-boost": 0.0, "pair-scaling": 0.0,
                 "boost-pair": 0.0, "pair-pair": 0.0}
    membership = {}

    for point in map(tuple, pts):
        relations["scaling-boost"] = max(
            relations["scaling-boost"],
            float(np.max(np.abs(vfield.lie_bracket(D, G, point)))))
    for pair in pairs:
        L = vfield.gen_hodograph(pair)
        Lu = vfield.gen_hodograph(pair.u_derived())
        for point in map(tuple, pts):
            dev = vfield.lie_bracket(L, D, point) - L.coefficients(point)
            relations["pair-scaling"] = max(relations["pair-scaling"],
                                            float(np.max(np.abs(dev))))
            dev = vfield.lie_bracket(G, L, point) - Lu.coefficients(point)
            relations["boost-pair"] = max(relations["boost-pair"],
                                          float(np.max(np.abs(dev))))
        membership[pair.label or f"pair{len(membership)}"] = \
            pair.max_linearized_residual(n=samples, seed=seed, params=params)
    for p1, p2 in zip(pairs, pairs[1:]):
        L1 = vfield.gen_hodograph(p1)
        L2 = vfield.gen_hodograph(p2)
        for point in map(tuple, pts):
            relations["pair-pair"] = max(
                relations["pair-pair"],
                float(np.max(np.abs(vfield.lie_bracket(L1, L2, point)))))

    return {
        "relations": relations,
        "membership": membership,
        "max_relation_deviation": max(relations.values()),
        "max_membership_residual": max(membership.values()) if membership else 0.0,
    }


# ---------------------------------------------------------------------------
# pair normalization (constant multiplier + u-shift)
# ---------------------------------------------------------------------------

_GRID_N = 17


def _pair_values(pair: HodographPair, box: UHBox):
    us, hs = box.grid(_GRID_N, _GRID_N)
    F = np.array([[pair.f(u, h) for h in hs] for u in us])
    G = np.array([[pair.g(u, h) for h in hs] for u in us])
    return F, G


def _pair_scale(pair, box):
    F, G = _pair_values(pair, box)
    return max(np.max(np.abs(F)), np.max(np.abs(G)))


def normalize_pair(pair: HodographPair, box: UHBox = REFERENCE_BOX):
    """Canonical representative of a pair modulo multiplier and u-shift.

    The shift is fixed by minimizing the combined grid L2 norm of the
    shifted pair over a bounded window (a scale-invariant, deterministic
    marker; shifting a previously normalized pair re-finds zero), then
    the pair is scaled so its largest grid value is +1.
    """
    def objective(eps):
        F, G = _pair_values(pair.boosted(eps), box)
        return float(np.mean(F * F) + np.mean(G * G))

    eps_grid = np.linspace(-3.0, 3.0, 121)
    vals = np.array([objective(e) for e in eps_grid])
    spread = vals.max() - vals.min()
    if spread < 1e-12 * max(vals.max(), 1e-300):
        eps_star = 0.0  # shift-invariant pair; nothing to fix
    else:
        k = int(np.argmin(vals))
        lo = eps_grid[max(k - 1, 0)]
        hi = eps_grid[min(k + 1, len(eps_grid) - 1)]
        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10})
        eps_star = float(res.x)
    shifted = pair.boosted(eps_star) if eps_star != 0.0 else pair
    F, G = _pair_values(shifted, box)
    flat = np.concatenate([F.ravel(), G.ravel()])
    k = int(np.argmax(np.abs(flat)))
    scale = abs(flat[k])
    if scale < ZTOL:
        raise PreconditionError("cannot normalize a vanishing pair")
    lam = math.copysign(1.0 / scale, flat[k])
    rep = shifted.scaled(lam)
    signature = np.concatenate([(lam * F).ravel(), (lam * G).ravel()])
    return rep, signature, eps_star, lam


def normalize_g(v: AlgebraElement, box: UHBox = REFERENCE_BOX) -> CanonicalClass:
    """Normal form of a full-algebra element under the adjoint action.

    a != 0 drops to scaling + (b/a) boost (the pair is removable);
    a = 0, b != 0 drops to the plain boost; otherwise the pair itself is
    the class, normalized by multiplier and u-shift.
    """
    if v.is_zero(box):
        raise PreconditionError("cannot classify the zero element")
    if abs(v.a) > ZTOL:
        return CanonicalClass(TAG_D_PLUS_AG, a=v.b / v.a)
    if abs(v.b) > ZTOL:
        return CanonicalClass(TAG_G_ONLY)
    rep, signature, _, _ = normalize_pair(v.pair, box)
    return CanonicalClass(TAG_L_CLASS, signature=signature, rep_pair=rep)


# ---------------------------------------------------------------------------
# the four-dimensional subalgebra: flows and normalizer
# ---------------------------------------------------------------------------

def g1_adjoint(flow: str, epsilon: float, v: G1Element) -> G1Element:
    """Adjoint flows of the four-dimensional subalgebra on coefficients.

    In coefficient order (a1, a2, a3, a4) = (scaling, boost, p_x, p_t):

        dx flow:       a3 -> a3 - e a1
        dt flow:       a3 -> a3 - e a2,  a4 -> a4 - e a1
        boost flow:    a3 -> a3 + e a4
        scaling flow:  a3 -> e^e a3,     a4 -> e^e a4
    """
    a1, a2, a3, a4 = v.a1, v.a2, v.a3, v.a4
    if flow == "dx":
        return G1Element(a1, a2, a3 - epsilon * a1, a4)
    if flow == "dt":
        return G1Element(a1, a2, a3 - epsilon * a2, a4 - epsilon * a1)
    if flow == "boost":
        return G1Element(a1, a2, a3 + epsilon * a4, a4)
    if flow == "scaling":
        s = math.exp(epsilon)
        return G1Element(a1, a2, s * a3, s * a4)
    raise ParameterError(f"unknown flow {flow!r}")


def g1_discrete(which: str, v: G1Element) -> G1Element:
    """Pushforward of the two discrete reflections on coefficients."""
    if which == "S1":        # t, x sign flip
        return G1Element(v.a1, v.a2, -v.a3, -v.a4)
    if which == "S2":        # x, u sign flip
        return G1Element(v.a1, -v.a2, -v.a3, v.a4)
    raise ParameterError(f"unknown discrete symmetry {which!r}")

_G1_FLOWS = ("dx", "dt", "boost", "scaling")


def g1_random_word(rng, length=6, eps_range=2.0):
    """A random adjoint word [(flow, eps), ...] for orbit-invariance sweeps."""
    flows = rng.choice(len(_G1_FLOWS), size=length)
    epss = rng.uniform(-eps_range, eps_range, size=length)
    return [(_G1_FLOWS[i], float(e)) for i, e in zip(flows, epss)]


def g1_apply_word(word, v: G1Element) -> G1Element:
    for flow, eps in word:
        v = g1_adjoint(flow, eps, v)
    return v


def normalize_g1(v: G1Element) -> CanonicalClass:
    """Normal form in the four-dimensional subalgebra (its own, weaker
    equivalence):

        a1 != 0          -> scaling + (a2/a1) boost
        a1 = 0, a2 != 0  -> boost + delta p_t,  delta = [a4 != 0]
        a1 = a2 = 0, a4 != 0 -> p_t + delta p_x, delta = [a3 != 0]
        only a3 != 0     -> p_x

    delta is kept in {0, 1} (the reflections flip signs).  The p_t+p_x
    delta is listed as printed even though the boost flow can remove it;
    `orbit_equivalent_g1` documents that finer equivalence.
    """
    if v.is_zero():
        raise PreconditionError("cannot classify the zero element")
    scale = v.norm
    def nonzero(c):
        return abs(c) > 1e-9 * scale
    if nonzero(v.a1):
        return CanonicalClass(TAG_D_PLUS_AG, a=v.a2 / v.a1)
    if nonzero(v.a2):
        return CanonicalClass(TAG_G_DELTA_DT, delta=int(nonzero(v.a4)))
    if nonzero(v.a4):
        return CanonicalClass(TAG_DT_DELTA_DX, delta=int(nonzero(v.a3)))
    return CanonicalClass(TAG_DX_ONLY)


# ---------------------------------------------------------------------------
# numerical orbit audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitWitness:
    found: bool
    flows: Optional[dict] = None
    discrete: str = "identity"
    scale: Optional[float] = None
    distance: float = math.inf

    def __bool__(self):
        return self.found


_DISCRETE_CHOICES = ("identity", "S1", "S2", "S1S2")


def _head_mismatch(v, w, allow_discrete):
    """Smallest direction gap achievable between the invariant (a1, a2)
    head components of v and w; positive means provably inequivalent."""
    hv = np.array([v.a1, v.a2])
    hw = np.array([w.a1, w.a2])
    nv, nw = np.linalg.norm(hv), np.linalg.norm(hw)
    scale = max(v.norm, w.norm)
    if nv < 1e-13 * scale and nw < 1e-13 * scale:
        return 0.0
    if nv < 1e-13 * scale or nw < 1e-13 * scale:
        return 1.0
    flips = [np.array([1.0, 1.0])]
    if allow_discrete:
        flips.append(np.array([1.0, -1.0]))
    best = math.inf
    for flip in flips:
        d = flip * hv / nv
        best = min(best,
                   float(np.linalg.norm(d - hw / nw)),
                   float(np.linalg.norm(d + hw / nw)))
    return best


def _apply_discrete(choice, v):
    if choice == "identity":
        return v
    if choice == "S1S2":
        return g1_discrete("S2", g1_discrete("S1", v))
    return g1_discrete(choice, v)


_FLOW_BOUND = 20.0
_SCALING_BOUND = 6.0


def orbit_equivalent_g1(v: G1Element, w: G1Element, trials=64, seed=0,
                        tol=1e-8, allow_discrete=True) -> OrbitWitness:
    """Search adjoint words mapping span(v) onto span(w).

    Tries, for each discrete-symmetry choice, deterministic candidate
    parameters plus `trials` random starts of the composite flow

        scaling(e4) o boost(e3) o dt(e2) o dx(e1),

    refined by least squares on the direction mismatch (the spanning
    vector may be rescaled by any nonzero real, so only the line counts).
    Flow parameters are kept in a bounded window: unbounded parameters
    could chase points in the closure of an orbit that the orbit itself
    never reaches, producing spurious equivalences.  Returns a witness
    with the flow parameters on success.
    """
    if v.is_zero() or w.is_zero():
        raise PreconditionError("orbit search requires nonzero elements")
    # (a1, a2) is exactly invariant under all four flows and only rescaled
    # by the spanning freedom (a2 may flip sign under a reflection), so
    # mismatched head components rule out equivalence without a search
    head_gap = _head_mismatch(v, w, allow_discrete)
    if head_gap > 1e-9:
        return OrbitWitness(found=False, distance=head_gap)
    rng = np.random.default_rng(seed)
    w_dir = w.as_array() / w.norm
    lower = np.array([-_FLOW_BOUND] * 3 + [-_SCALING_BOUND])
    upper = -lower

    def transformed(theta, v0):
        out = g1_adjoint("dx", theta[0], v0)
        out = g1_adjoint("dt", theta[1], out)
        out = g1_adjoint("boost", theta[2], out)
        out = g1_adjoint("scaling", theta[3], out)
        return out

    def residual(theta, v0, sign):
        arr = transformed(theta, v0).as_array()
        n = np.linalg.norm(arr)
        if n < 1e-300:
            return np.full(4, 1e6)
        return arr / n - sign * w_dir

    def candidates(v0):
        cands = [np.zeros(4)]
        a1, a2, a3, a4 = v0.as_array()
        if abs(a1) > 1e-12:
            e2 = a4 / a1
            e1 = (a3 - e2 * a2) / a1
            cands.append(np.array([e1, e2, 0.0, 0.0]))
        elif abs(a2) > 1e-12:
            cands.append(np.array([0.0, a3 / a2, 0.0, 0.0]))
        elif abs(a4) > 1e-12:
            cands.append(np.array([0.0, 0.0, -a3 / a4, 0.0]))
        return cands

    best = OrbitWitness(found=False)
    discretes = _DISCRETE_CHOICES if allow_discrete else ("identity",)
    for choice in discretes:
        v0 = _apply_discrete(choice, v)
        starts = candidates(v0) + [rng.uniform(-3.0, 3.0, 4)
                                   for _ in range(trials)]
        for theta0 in starts:
            theta0 = np.clip(theta0, lower + 1e-9, upper - 1e-9)
            for sign in (1.0, -1.0):
                try:
                    sol = least_squares(residual, theta0, args=(v0, sign),
                                        method="trf", bounds=(lower, upper),
                                        xtol=1e-12, ftol=1e-12, gtol=1e-12,
                                        max_nfev=200)
                except Exception:
                    continue
                dist = float(np.linalg.norm(residual(sol.x, v0, sign)))
                if dist < best.distance:
                    arr = transformed(sol.x, v0).as_array()
                    lam = sign * w.norm / float(np.linalg.norm(arr))
                    best = OrbitWitness(
                        found=dist < tol,
                        flows={"dx": float(sol.x[0]), "dt": float(sol.x[1]),
                               "boost": float(sol.x[2]),
                               "scaling": float(sol.x[3])},
                        discrete=choice, scale=lam, distance=dist)
                if best.found:
                    return best
    return best
