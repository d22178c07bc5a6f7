"""
Eigenvalue branches lam_k(eps), their events, and the zero arcs of V_a.

A branch is followed by natural-parameter continuation in eps: secant
predictor, Newton corrector on D(eps, .), and a trust radius that rejects
corrector jumps.  While the branch is real a local quadratic model

    D(eps + de, lam + dl) ~ D_eps de + D_lam dl + D_lamlam dl^2 / 2

predicts where two real roots merge (de_fold = D_lam^2 / (2 D_lamlam D_eps)).
Once that fold is within reach the double root is located exactly with
:func:`~ptairy.roots.solve_critical` and the branch leaves the real axis
along the square-root model ``dl^2 = -2 D_eps de / D_lamlam``.  The odd member
of a colliding pair takes the child with positive imaginary part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .airyfn import SQRT3, airy_all, eval_v
from .detcore import KNOT, det, det_jet, det_on_knot
from .errors import (
    BranchJump,
    DegenerateXi,
    DerivativeUnderflow,
    DomainError,
    NonConvergence,
    NoTurning,
    SingularDenominator,
    StepCollapse,
)
from .roots import newton_complex, ray_zero, solve_critical

KNOT_CROSSING = "knot_crossing"
TURNING = "turning"
COLLISION = "collision"
COMPLEXIFIED = "complexified"


class Event(NamedTuple):
    kind: str
    eps: float
    lam: complex


@dataclass(frozen=True)
class StepControl:
    h0: float = 0.05
    shrink: float = 0.5
    grow: float = 1.3
    grow_after: int = 5
    h_min: float = 1e-12
    h_max: float | None = None  # None: max(h0, 0.02 * eps)
    rel_max: float = 0.1  # never step more than this fraction of eps
    trust: float = 10.0
    tol: float = 1e-12
    max_newton: int = 30

    def cap(self, eps: float) -> float:
        hm = self.h_max if self.h_max is not None else max(self.h0, 0.02 * eps)
        return min(hm, self.rel_max * eps)


@dataclass(frozen=True)
class Branch:
    k: int
    points: tuple  # ((eps, lam), ...) with eps strictly increasing
    events: tuple = ()
    partner: int | None = None

    @property
    def eps(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def lam(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=complex)

    def event(self, kind: str) -> Event | None:
        for e in self.events:
            if e.kind == kind:
                return e
        return None

    def real_points(self):
        """Points up to and including the collision (all points if none)."""
        col = self.event(COLLISION)
        if col is None:
            return self.points
        return tuple(p for p in self.points if p[0] <= col.eps)

    def lam_at(self, eps: float) -> complex:
        """Eigenvalue at ``eps``, re-solved from the interpolated trace."""
        e = self.eps
        if not e[0] <= eps <= e[-1]:
            raise ValueError(f"eps={eps} outside the traced range [{e[0]}, {e[-1]}]")
        lam = self.lam
        seed = np.interp(eps, e, lam.real) + 1j * np.interp(eps, e, lam.imag)
        return _correct(eps, seed, 1e-12, 40)


@dataclass(frozen=True)
class TurningPoint:
    eps_turn: float
    lambda_turn: float


@dataclass(frozen=True)
class GammaArc:
    k: int
    samples: tuple  # ((a, xi), ...) sorted by a
    critical_index: int  # sample at a = -sqrt(3)
    knot_index: int | None = None  # sample at a = +sqrt(3)

    @property
    def a(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def xi(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples], dtype=complex)


# -- helpers --------------------------------------------------------------


def _det_triplet(eps):
    def f(z):
        v = det(eps, z)
        return v.d, v.d_lambda, v.scale

    return f


def _correct(eps, seed, tol, max_iter) -> complex:
    seed = complex(seed)
    res = newton_complex(_det_triplet(eps), seed, tol=tol, max_iter=max_iter)
    lam = res.root
    if seed.imag == 0.0 and abs(lam.imag) < 1e-12 * max(1.0, abs(lam)):
        lam = complex(lam.real, 0.0)
    return lam


def default_eps_start(k: int) -> float:
    """Smallest convenient start: keeps |xi(+-1)| near 60 at most."""
    mu = (math.pi * k / 2) ** 2
    return max(0.1, (mu / 60.0) ** 1.5)


def initial_eigenvalue(k: int, eps: float) -> float:
    """The k-th real eigenvalue at small eps, seeded from (pi k / 2)^2 / eps."""
    seed = (math.pi * k / 2) ** 2 / eps
    lam = _correct(eps, seed, 1e-13, 60)
    gap = (math.pi / 2) ** 2 * (2 * k - 1) / eps
    if abs(lam - seed) > 0.25 * gap or abs(lam.imag) > 1e-9 * abs(lam):
        raise NonConvergence(
            f"eigenvalue {k} at eps={eps}: Newton from {seed:.6g} landed on {lam!r}; "
            "start closer to eps = 0"
        )
    return lam.real


def _fold_ahead(eps, lam, h):
    """Critical point within ~2 steps ahead of a real branch point, else None."""
    j = det_jet(eps, lam)
    dl, dll, de = j.d_lambda.real, j.d_lambda2.real, j.d_eps.real
    if dll == 0.0 or de == 0.0:
        return None
    de_fold = dl * dl / (2.0 * dll * de)
    if not 0.0 < de_fold <= 2.0 * h:
        return None
    shift = -dl / dll
    try:
        cp = solve_critical(eps + de_fold, lam + shift)
    except (NonConvergence, DomainError, ArithmeticError):
        return None
    if cp.eps_star < eps - 1e-10 or abs(cp.lambda_star - lam) > 4 * abs(shift) + 1e-6:
        return None
    return cp


def _child_seed(cp, eps, upper: bool) -> complex:
    """Square-root model of the split double root for eps > eps_star."""
    j = det_jet(cp.eps_star, cp.lambda_star.real)
    d2 = -2.0 * j.d_eps * (eps - cp.eps_star) / j.d_lambda2
    delta = cmath.sqrt(d2)
    if (delta.imag < 0) == upper:
        delta = -delta
    return cp.lambda_star.real + delta


def complex_children(cp, eps: float):
    """The two eigenvalues that leave the double root ``cp`` at ``eps > eps_star``.

    Returns ``(upper, lower)``, refined by Newton from the square-root model.
    """
    if eps <= cp.eps_star:
        raise ValueError("children exist only past the collision")
    up = _correct(eps, _child_seed(cp, eps, True), 1e-13, 40)
    lo = _correct(eps, _child_seed(cp, eps, False), 1e-13, 40)
    return up, lo


def _refine_crossing(e0, e1):
    f = lambda e: det_on_knot(e).d.real
    return brentq(f, e0, e1, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=200)


def _refine_turning(p0, p1, p2):
    """Minimize lam(eps) over the bracket given by three real branch points."""
    (e0, l0), (e1, l1), (e2, l2) = p0, p1, p2
    es = np.array([e0, e1, e2])
    ls = np.array([l0.real, l1.real, l2.real])
    coef = np.polyfit(es, ls, 2)

    def lam_of(e):
        return _correct(e, complex(np.polyval(coef, e)), 1e-14, 40).real

    res = minimize_scalar(lam_of, bracket=(e0, e1, e2), method="golden", tol=1e-10)
    return float(res.x), float(res.fun)


def _event_scan(points, i, crossings=True):
    """Crossing/turning events completed by appending point ``i``."""
    out = []
    (e0, l0), (e1, l1) = points[i - 1], points[i]
    a, b = l0.real - KNOT, l1.real - KNOT
    if crossings and a * b < 0:
        ec = _refine_crossing(e0, e1)
        out.append(Event(KNOT_CROSSING, ec, complex(KNOT)))
    if i >= 2:
        lm = points[i - 2][1].real
        if l0.real - lm < 0 < l1.real - l0.real:
            et, lt = _refine_turning(points[i - 2], points[i - 1], points[i])
            out.append(Event(TURNING, et, complex(lt)))
    return out


# -- branch tracing ---------------------------------------------------------


def trace_branch(
    k: int,
    eps_start: float | None = None,
    eps_end: float = 14.0,
    step_control: StepControl = StepControl(),
) -> Branch:
    """Follow the k-th eigenvalue (counted at small eps) from eps_start to eps_end.

    Events: ``knot_crossing`` (lam passes 1/sqrt(3), eps refined by bracketing),
    ``turning`` (local minimum of a real lam), ``collision`` (double root found
    by the critical solver) and ``complexified`` (first point off the axis).

    Raises
    ------
    StepCollapse
        If the step shrinks below ``step_control.h_min``.
    BranchJump
        If the collapse was caused by repeated trust-radius violations.
    """
    cfg = step_control
    if k < 1:
        raise ValueError("branch index k must be >= 1")
    eps = default_eps_start(k) if eps_start is None else float(eps_start)
    if not eps_end > eps:
        raise ValueError("eps_end must exceed eps_start")
    lam = complex(initial_eigenvalue(k, eps))
    points = [(eps, lam)]
    events: list[Event] = []
    upper = k % 2 == 1
    partner = None
    critical = None
    n_complex = 0
    h = min(cfg.h0, cfg.cap(eps))
    successes = 0
    last_jump = None

    while eps < eps_end:
        h = min(h, cfg.cap(eps))
        if eps_end - eps < 1.5 * h:
            h = eps_end - eps if eps_end - eps <= h else 0.5 * (eps_end - eps)
        real_phase = critical is None

        if real_phase:
            cp = _fold_ahead(eps, lam.real, h)
            if cp is not None and cp.eps_star <= eps_end:
                critical = cp
                partner = k + 1 if upper else k - 1
                lam_star = complex(cp.lambda_star.real, 0.0)
                if cp.eps_star > eps:
                    points.append((cp.eps_star, lam_star))
                    # the collision point sits on the knot; it is not a crossing
                    events.extend(_event_scan(points, len(points) - 1, crossings=False))
                events.append(Event(COLLISION, cp.eps_star, lam_star))
                eps, lam = cp.eps_star, lam_star
                h = min(h, 1e-3 * cp.eps_star)
                successes = 0
                continue

        eps_new = eps + h
        if real_phase or n_complex == 0:
            pred = _predict_secant(points, eps_new) if real_phase else _child_seed(critical, eps_new, upper)
        elif n_complex < 10:
            e_c, l_c = critical.eps_star, critical.lambda_star.real
            ratio = math.sqrt((eps_new - e_c) / (eps - e_c))
            pred = l_c + (lam - l_c) * ratio
        else:
            pred = _predict_secant(points, eps_new)
        if real_phase:
            pred = complex(pred.real, 0.0)

        try:
            new = _correct(eps_new, pred, cfg.tol, cfg.max_newton)
            radius = cfg.trust * max(abs(pred - lam), 1e-6 * max(1.0, abs(lam)))
            if abs(new - pred) > radius:
                last_jump = BranchJump(
                    f"branch {k}: corrector moved {abs(new - pred):.3e} from the predictor "
                    f"(trust radius {radius:.3e}) at eps={eps_new:.12g}",
                    eps=eps_new, predicted=pred, corrected=new,
                )
                raise last_jump
        except (NonConvergence, DerivativeUnderflow, BranchJump):
            h *= cfg.shrink
            successes = 0
            if h < cfg.h_min:
                if last_jump is not None:
                    raise last_jump
                raise StepCollapse(f"branch {k}: step collapsed below {cfg.h_min:g} at eps={eps:.12g}")
            continue

        last_jump = None
        if not real_phase:
            if n_complex == 0:
                events.append(Event(COMPLEXIFIED, eps_new, new))
            n_complex += 1
        points.append((eps_new, new))
        if real_phase:
            events.extend(_event_scan(points, len(points) - 1))
        eps, lam = eps_new, new
        successes += 1
        if successes >= cfg.grow_after:
            h *= cfg.grow
            successes = 0

    events.sort(key=lambda e: e.eps)
    return Branch(k, tuple(points), tuple(events), partner)


def _predict_secant(points, eps_new) -> complex:
    e1, l1 = points[-1]
    if len(points) < 2:
        j = det(e1, l1)
        slope = -j.d_eps / j.d_lambda
        return l1 + slope * (eps_new - e1)
    e0, l0 = points[-2]
    return l1 + (l1 - l0) / (e1 - e0) * (eps_new - e1)


def find_turning(b: Branch) -> TurningPoint:
    """Leftmost real point of a branch where it reverses direction.

    Raises
    ------
    NoTurning
        If the real part of the branch is monotone.
    """
    pts = b.real_points()
    col = b.event(COLLISION)
    if col is not None:
        pts = tuple(p for p in pts if p[0] < col.eps)
    for i in range(2, len(pts)):
        l0, l1, l2 = (pts[i - 2][1].real, pts[i - 1][1].real, pts[i][1].real)
        if l1 - l0 < 0 < l2 - l1:
            e, l = _refine_turning(pts[i - 2], pts[i - 1], pts[i])
            return TurningPoint(e, l)
    raise NoTurning(f"branch {b.k} is monotone over the traced real range")


# -- V_a zero arcs ----------------------------------------------------------


def _v_triplet(a):
    return lambda z: eval_v(a, z)


def _dxi_da(a, xi) -> complex:
    ai, aip, bi, bip = airy_all(xi)
    den = a * aip + bip
    if abs(den) < 1e-14:
        raise SingularDenominator(f"a Ai' + Bi' vanishes at xi={xi!r}, a={a}")
    return -ai / den


def _march(a0, xi0, targets, max_sub=40):
    """Continue the zero of V_a from (a0, xi0) through increasing/decreasing targets."""
    out = []
    a, xi = a0, xi0
    for at in targets:
        sub = 1
        while True:
            try:
                aa, z = a, xi
                da = (at - a) / sub
                for _ in range(sub):
                    # midpoint predictor on the implicit ODE dxi/da
                    k1 = _dxi_da(aa, z)
                    k2 = _dxi_da(aa + da / 2, z + da / 2 * k1)
                    pred = z + da * k2
                    res = newton_complex(_v_triplet(aa + da), pred, tol=1e-13, max_iter=30)
                    if abs(res.root - pred) > 10 * max(abs(pred - z), 1e-8):
                        raise BranchJump(f"V_a zero jumped at a={aa + da}")
                    aa, z = aa + da, res.root
                break
            except (NonConvergence, BranchJump, DerivativeUnderflow):
                sub *= 2
                if sub > 2**max_sub:
                    raise StepCollapse(f"V_a arc continuation collapsed near a={a}")
        a, xi = at, z
        out.append((at, xi))
    return out


def trace_gamma(
    k: int,
    a_min: float = -SQRT3 - 1.0,
    a_max: float = SQRT3 + 1.0,
    step: float = 0.05,
) -> GammaArc:
    """Sample the arc xi_k(a) of zeros of ``V_a = a Ai + Bi`` in the first quadrant.

    The arc is seeded at ``a = -sqrt(3)`` with the k-th ray zero of U_- and
    continued in both directions; ``a = +-sqrt(3)`` are always sampled.
    """
    if not a_min < -SQRT3 < SQRT3 < a_max:
        raise ValueError("the a-range must contain [-sqrt(3), sqrt(3)]")
    marks = (-SQRT3, SQRT3)
    grid = {
        g for g in np.round(np.arange(a_min, a_max + step / 2, step), 12).tolist()
        if min(abs(g - m) for m in marks) > 1e-9 * step
    }
    grid |= {*marks, a_min, a_max}
    grid = sorted(g for g in grid if a_min <= g <= a_max)
    xi0 = ray_zero("-", k)
    up = _march(-SQRT3, xi0, [g for g in grid if g > -SQRT3])
    down = _march(-SQRT3, xi0, [g for g in reversed(grid) if g < -SQRT3])
    samples = tuple(reversed(down)) + ((-SQRT3, xi0),) + tuple(up)
    ci = len(down)
    ki = next(i for i, s in enumerate(samples) if s[0] == SQRT3)
    return GammaArc(k, samples, ci, ki)


def gamma_tangent(arc: GammaArc, index: int | None = None) -> complex:
    """dxi/da at a sample (default: the a = -sqrt(3) point)."""
    i = arc.critical_index if index is None else index
    a, xi = arc.samples[i]
    return _dxi_da(a, xi)


def gamma_to_locus(xi) -> tuple[float, float]:
    """Map a zero of V_a (real a) to the real locus point (eps, lam)."""
    xi = complex(xi)
    im = abs(xi.imag)
    if im < 1e-12:
        raise DegenerateXi(f"|Im xi| = {im:.3e} is too small to define eps")
    return im**3, xi.real / im


# -- real locus and geometry ------------------------------------------------


@dataclass
class RealLocus:
    rows: list = field(default_factory=list)  # (k, eps, lam)
    branches: dict = field(default_factory=dict)


def export_real_locus(
    k_max: int,
    eps_max: float,
    step_control: StepControl = StepControl(),
    branches: dict | None = None,
) -> RealLocus:
    """Real segments of branches 1..k_max up to eps_max, sorted by (k, eps)."""
    out = RealLocus()
    for k in range(1, k_max + 1):
        b = (branches or {}).get(k)
        if b is None or b.eps[-1] < eps_max - 1e-12:
            b = trace_branch(k, None, eps_max, step_control)
        out.branches[k] = b
        for e, lam in b.real_points():
            if e <= eps_max:
                out.rows.append((k, float(e), float(lam.real)))
    out.rows.sort(key=lambda r: (r[0], r[1]))
    return out


def locus_components(locus: RealLocus):
    """Polylines of the real locus, one per colliding pair (2j-1, 2j).

    Odd and even members are joined through their shared collision point;
    a branch without a collision in range forms its own component.
    """
    comps = []
    ks = sorted(locus.branches)
    used = set()
    for k in ks:
        if k in used:
            continue
        b = locus.branches[k]
        pts = [(e, l.real) for e, l in b.real_points()]
        used.add(k)
        if b.partner is not None and b.partner in locus.branches:
            other = locus.branches[b.partner]
            used.add(b.partner)
            pts = pts + list(reversed([(e, l.real) for e, l in other.real_points()]))
        comps.append(np.array(pts))
    return comps


def components_disjoint(locus: RealLocus) -> bool:
    """True when no two real-locus components share a point."""
    from shapely.geometry import LineString

    lines = [LineString(c) for c in locus_components(locus) if len(c) >= 2]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if lines[i].intersects(lines[j]):
                return False
    return True


def distance_to_limit_graph(lam) -> float:
    """Distance from ``lam`` to [i, 1/sqrt 3] U [-i, 1/sqrt 3] U [1/sqrt 3, inf)."""
    z = complex(lam)
    if z.real >= KNOT:
        d_ray = abs(z.imag)
    else:
        d_ray = abs(z - KNOT)
    return min(d_ray, _seg_dist(z, KNOT, 1j), _seg_dist(z, KNOT, -1j))


def _seg_dist(z, a, b) -> float:
    a, b = complex(a), complex(b)
    d = b - a
    t = ((z - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))
