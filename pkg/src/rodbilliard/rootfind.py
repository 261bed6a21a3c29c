"""Safeguarded scalar root finding for the impact-time equations.

Three solvers live here: the generic bracketed Newton/bisection hybrid,
the return-time equation b s cos s = (1 + a s) sin s for an arc leaving
the rod, and the first-contact event detector for an arbitrary free
flight.  Newton steps accelerate a sign-change bracket; any step that
leaves the bracket falls back to bisection, so convergence is guaranteed
for continuous functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .core import BilliardError, DEFAULT_CONFIG, SimConfig
from .flight import FreeFlight, flight_position, flight_velocity


class RootFindError(BilliardError):
    """A bracketed solve failed to converge or lost its sign change."""


class UnsupportedFirstImpact(BilliardError):
    """The first contact is not on the positive semiaxis.

    Carries the contact time and (non-positive) radius.  Trajectories of
    this kind are detected and reported, not simulated.
    """

    def __init__(self, t: float, r: float):
        super().__init__(
            f"first contact at t = {t} has radius {r} <= 0 "
            "(hit on the non-positive semiaxis)")
        self.t = t
        self.r = r


@dataclass(frozen=True, slots=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    bracketed: bool


def hybrid_root(f_df: Callable[[float], tuple[float, float]],
                lo: float, hi: float,
                abs_tol: float = 1e-13,
                max_iters: int = 200) -> RootResult:
    """Root of f in [lo, hi] given a sign change, with Newton acceleration.

    ``f_df(x)`` returns (f(x), f'(x)).  A Newton step is taken whenever it
    stays strictly inside the current bracket and shrinks it at least as
    fast as bisection would; otherwise the midpoint is used.  Terminates
    when the step or the bracket falls below ``abs_tol``.
    """
    flo, _ = f_df(lo)
    fhi, _ = f_df(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0, True)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0, True)
    if (flo > 0.0) == (fhi > 0.0):
        raise RootFindError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    pos_lo = flo > 0.0

    x = 0.5 * (lo + hi)
    for it in range(1, max_iters + 1):
        fx, dfx = f_df(x)
        if fx == 0.0:
            return RootResult(x, 0.0, it, True)
        if (fx > 0.0) == pos_lo:
            lo = x
        else:
            hi = x
        if hi - lo < 2.0 * abs_tol:
            root = 0.5 * (lo + hi)
            return RootResult(root, f_df(root)[0], it, True)
        if dfx != 0.0:
            step = fx / dfx
            xn = x - step
            if abs(step) < abs_tol and lo <= xn <= hi:
                return RootResult(xn, f_df(xn)[0], it, True)
            if lo < xn < hi and abs(step) <= 0.5 * (hi - lo):
                x = xn
                continue
        x = 0.5 * (lo + hi)
    raise RootFindError(
        f"no convergence after {max_iters} iterations on [{lo}, {hi}]")


def _delta_f_df(a: float, b: float) -> Callable[[float], tuple[float, float]]:
    def f_df(s: float) -> tuple[float, float]:
        sn = math.sin(s)
        cs = math.cos(s)
        return (b * s * cs - (1.0 + a * s) * sn,
                (b - 1.0 - a * s) * cs - (a + b * s) * sn)
    return f_df


def solve_delta(a: float, b: float, cfg: SimConfig | None = None) -> float:
    """Time to the next impact: smallest root of b s cos s = (1 + a s) sin s in (0, pi).

    (a, b) parametrize the arc leaving the rod, with b > 1 for a
    transversal reflection or b = 1, a < 0 for a grazing one.  The product
    form F(s) = b s cos s - (1 + a s) sin s is used throughout (never the
    tangent quotient) so there is no pole at pi/2.  F vanishes at 0, is
    positive up to the sought root and negative beyond it, so the left
    bracket endpoint only has to sit inside the positive lobe:
    F ~ (b - 1) s - a s^2 near zero.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"non-finite arc parameters a={a}, b={b}")
    if b > 1.0:
        s_left = min(1e-6, 0.1 * (b - 1.0) / (abs(a) + 1.0))
    elif b >= 1.0 - cfg.grazing_tol * max(1.0, abs(b)) and a < 0.0:
        # grazing departure: quadratic lobe F ~ -a s^2, root near -3a
        b = 1.0
        s_left = min(1e-6, 0.1 * (-a))
    else:
        raise ValueError(
            f"arc parameters a={a}, b={b} do not describe a reflection "
            "(need b > 1, or b = 1 with a < 0)")
    s_right = math.pi - min(1e-9, 0.01 * b / (1.0 + abs(a)))
    res = hybrid_root(_delta_f_df(a, b), s_left, s_right,
                      abs_tol=cfg.root_abs_tol, max_iters=cfg.max_bisect_iters)
    return res.root


def solve_tstar() -> float:
    """Smallest positive solution of t = tan t, on the branch (pi, 3pi/2).

    Solved in product form sin t - t cos t = 0; the value bounds the
    parameter range of the full-stop initial conditions.
    """

    def f_df(t: float) -> tuple[float, float]:
        sn = math.sin(t)
        cs = math.cos(t)
        return sn - t * cs, t * sn

    res = hybrid_root(f_df, math.pi + 1e-3, 1.5 * math.pi - 1e-3,
                      abs_tol=1e-15, max_iters=200)
    return res.root


T_STAR = solve_tstar()


class FirstImpact(NamedTuple):
    t: float
    r: float
    kind: str


def first_impact(ff: FreeFlight, cfg: SimConfig | None = None,
                 window: float = 2.0 * math.pi + 0.1) -> FirstImpact:
    """Earliest contact of a free flight with the rod.

    Scans h(t) = Im z(t) over (0, window] with step cfg.scan_step and
    refines every candidate with the safeguarded solver.  The rod sweeps
    every ray within one half-turn, so a contact always exists; the
    default window gives that argument generous slack.  Two candidate
    types:

    * sign changes of h (transversal crossings, and the cubic tangency of
      a full stop, which also changes sign);
    * local minima of h below a step-squared threshold (quadratic
      tangencies, i.e. grazing contacts, where h touches zero without a
      sign change).  The minimum is polished via h' = 0; if it turns out
      to dip below zero the left crossing of the hidden pair is used.

    Returns (t, r, kind).  Raises UnsupportedFirstImpact when the contact
    radius is not strictly positive.
    """
    from .impact_map import classify_impact

    cfg = cfg or DEFAULT_CONFIG

    def h_dh(t: float) -> tuple[float, float]:
        return flight_position(ff, t).imag, flight_velocity(ff, t).imag

    def ddh(t: float) -> float:
        # second derivative of h: Im of (-2iv - (z + vt)) e^{-it}
        u = ff.z + ff.v * t
        return ((-2j * ff.v - u) * complex(math.cos(t), -math.sin(t))).imag

    scale0 = 1.0 + abs(ff.z) + abs(ff.v)
    h0 = ff.z.imag
    if h0 < 0.0:
        raise ValueError(f"initial position {ff.z!r} lies below the rod")
    step = cfg.scan_step
    t_prev2 = h_prev2 = None
    if h0 <= cfg.grazing_tol * scale0:
        zdot0 = ff.v - 1j * ff.z
        if zdot0.imag <= 0.0:
            raise ValueError(
                "initial state sits on the rod without departing from it")
        t_begin = 10.0 * step  # lift-off guard past the departure
        t_prev = h_prev = None
    else:
        t_begin = step
        t_prev, h_prev = 0.0, h0  # so a crossing inside the first step counts

    n_steps = int(math.ceil((window - t_begin) / step)) + 1
    # a local minimum of h qualifies as a tangency candidate below this
    # (scale * curvature * step^2 covers the sampling error of a touch)
    def cand_tol(t: float) -> float:
        scale = 1.0 + abs(ff.z) + abs(ff.v) * t
        return scale * (cfg.grazing_tol + 4.0 * step * step)

    def refine_crossing(lo: float, hi: float) -> float:
        return hybrid_root(h_dh, lo, hi, abs_tol=cfg.root_abs_tol,
                           max_iters=cfg.max_bisect_iters).root

    def finish(t_hit: float) -> FirstImpact:
        r = flight_position(ff, t_hit).real
        if r <= 0.0:
            raise UnsupportedFirstImpact(t_hit, r)
        kind = classify_impact(r, flight_velocity(ff, t_hit), cfg)
        return FirstImpact(t_hit, r, kind)

    for k in range(n_steps + 1):
        t = t_begin + k * step
        ht = h_dh(t)[0]
        if h_prev is not None:
            if h_prev > 0.0 and ht <= 0.0:
                if ht == 0.0:
                    return finish(t)
                return finish(refine_crossing(t_prev, t))
            if h_prev == 0.0 and ht < 0.0:
                return finish(t_prev)  # an earlier sample sat on the rod
            if (h_prev2 is not None and h_prev2 >= h_prev and h_prev < ht
                    and h_prev <= cand_tol(t_prev)):
                scale = 1.0 + abs(ff.z) + abs(ff.v) * t_prev
                hit = _refine_tangency(h_dh, ddh, t_prev2, t, cfg, scale)
                if hit is not None:
                    return finish(hit)
        t_prev2, h_prev2 = t_prev, h_prev
        t_prev, h_prev = t, ht
    raise BilliardError(
        "no rod contact inside one full turn; this contradicts the sweep "
        f"argument (z0={ff.z!r}, v0={ff.v!r})")


def _refine_tangency(h_dh, ddh, lo: float, hi: float, cfg: SimConfig,
                     scale: float) -> float | None:
    """Polish a tangency candidate; returns the contact time or None.

    The local minimum of h is located via h' = 0 (h' changes sign from
    negative to positive across it).  A minimum within tolerance of zero
    is a tangential contact; a strictly negative one hides a crossing
    pair, and the left crossing is the impact.
    """
    def dh_ddh(t: float) -> tuple[float, float]:
        return h_dh(t)[1], ddh(t)

    if dh_ddh(lo)[0] >= 0.0 or dh_ddh(hi)[0] <= 0.0:
        return None  # not a bracketed minimum; sampling artifact
    t_min = hybrid_root(dh_ddh, lo, hi, abs_tol=cfg.root_abs_tol,
                        max_iters=cfg.max_bisect_iters).root
    h_min = h_dh(t_min)[0]
    if abs(h_min) <= cfg.grazing_tol * scale:
        return t_min
    if h_min < 0.0:
        return hybrid_root(h_dh, lo, t_min, abs_tol=cfg.root_abs_tol,
                           max_iters=cfg.max_bisect_iters).root
    return None
