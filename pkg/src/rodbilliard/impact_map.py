"""Closed-form impact recurrences for the rotating-rod billiard.

An arc leaving the rod at radius r with reflected velocity r(a + i(b-1))
returns to it after the time delta solving b s cos s = (1 + a s) sin s,
and the contact data advance in closed form:

    r'  =  r b delta / sin delta
    a'  =  1/delta - cos delta sin delta / (b delta^2)
    b'  =  2 - (sin delta / delta)^2 / b

Below ``series_switch_delta`` the maps are evaluated through
cancellation-safe series so that orbits of 10^5+ impacts keep full
relative precision; the naive a' subtracts two O(1/delta) terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BilliardError, DEFAULT_CONFIG, SimConfig, require_finite
from .rootfind import T_STAR, solve_delta

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

TRANSVERSAL = "transversal"
GRAZING = "grazing"
DEGENERATE = "degenerate"


class DegenerateImpact(BilliardError):
    """The ball reached the rod with (numerically) zero velocity.

    No billiard continuation exists past such an impact; the caller
    decides between stopping and the sliding quasi-continuation.
    """


class ContractViolation(BilliardError):
    """An impact state broke an invariant the dynamics guarantees.

    Signals a numerical failure or an input outside the supported class,
    never physics.
    """


@dataclass(frozen=True, slots=True)
class ImpactEvent:
    """One collision: index, time, radius, velocities on both sides, kind."""

    n: int
    t: float
    r: float
    zdot_in: complex
    zdot_out: complex
    kind: str


@dataclass(frozen=True, slots=True)
class MapState:
    """Arc parameters (r, a, b) right after impact number ``n``."""

    r: float
    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if not (self.r > 0 and math.isfinite(self.r)
                and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(
                f"impact state must be finite with r > 0, got "
                f"r={self.r}, a={self.a}, b={self.b}")


def classify_impact(r: float, zdot_in: complex,
                    cfg: SimConfig | None = None) -> str:
    """Sort an incoming impact velocity into transversal/grazing/degenerate.

    Degenerate is a full stop on the rod (cubic tangency of the arc, no
    billiard continuation); grazing is a tangential pass (quadratic
    tangency).  Anything else with non-negative vertical velocity is a
    ContractViolation: the dynamics never produces it.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not r > 0:
        raise ValueError(f"impact radius must be positive, got {r}")
    require_finite(zdot_in, "zdot_in")
    if abs(zdot_in) <= cfg.grazing_tol * (1.0 + r):
        return DEGENERATE
    tol = cfg.grazing_tol * (1.0 + abs(zdot_in))
    if zdot_in.imag < -tol:
        return TRANSVERSAL
    if zdot_in.imag <= tol and zdot_in.real < -tol:
        return GRAZING
    raise ContractViolation(
        f"velocity {zdot_in!r} at r={r} is not an admissible rod approach")


def incoming_to_map_state(r: float, zdot_in: complex,
                          cfg: SimConfig | None = None,
                          n: int = 1) -> MapState:
    """Arc parameters after reflecting ``zdot_in`` at radius ``r``.

    a = Re zdot_in / r and b = 1 - Im zdot_in / r; admissible impacts give
    b > 1, or b = 1 with a < 0 (grazing).  A full-stop velocity raises
    DegenerateImpact, anything below the rod's reach ContractViolation.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not r > 0:
        raise ValueError(f"impact radius must be positive, got {r}")
    require_finite(zdot_in, "zdot_in")
    if abs(zdot_in) <= cfg.grazing_tol * (1.0 + r):
        raise DegenerateImpact(
            f"velocity {zdot_in!r} at r={r} is a full stop on the rod")
    a = zdot_in.real / r
    b = 1.0 - zdot_in.imag / r
    graz = cfg.grazing_tol * max(1.0, abs(b))
    if b <= 1.0 + graz and (b < 1.0 - graz or a >= 0.0):
        raise ContractViolation(
            f"reflection of {zdot_in!r} at r={r} gives a={a}, b={b}; "
            "admissible impacts have b > 1, or b = 1 with a < 0")
    return MapState(r=r, a=a, b=b, n=n)


def recurrence_direct(delta: float, b: float) -> tuple[float, float, float]:
    """Closed-form (a', b', delta/sin delta); cancels badly as delta -> 0."""
    sd = math.sin(delta)
    cd = math.cos(delta)
    a_next = 1.0 / delta - cd * sd / (b * delta * delta)
    b_next = 2.0 - (sd / delta) ** 2 / b
    return a_next, b_next, delta / sd


def recurrence_series(delta: float, b: float) -> tuple[float, float, float]:
    """Series form of the same maps, exact to ~1e-15 for delta <= 1e-2.

    Uses sin d cos d = d - (2/3)d^3 + (2/15)d^5 - (4/315)d^7, which turns
    a' into ((b-1)/d + (2/3)d - ...)/b with no cancellation beyond the
    stored precision of b - 1.
    """
    d2 = delta * delta
    dos = 1.0 + d2 / 6.0 + 7.0 * d2 * d2 / 360.0
    sod2 = 1.0 - d2 / 3.0 + 2.0 * d2 * d2 / 45.0
    poly = 2.0 / 3.0 - d2 * (2.0 / 15.0 - d2 * (4.0 / 315.0))
    a_next = ((b - 1.0) / delta + delta * poly) / b
    b_next = 2.0 - sod2 / b
    return a_next, b_next, dos


def step(ms: MapState, cfg: SimConfig | None = None
         ) -> tuple[float, MapState, float]:
    """Advance one impact: (delta, next state, max arc height).

    The radius grows strictly: r' = r b delta/sin delta > r.
    """
    cfg = cfg or DEFAULT_CONFIG
    delta = solve_delta(ms.a, ms.b, cfg)
    if delta < cfg.series_switch_delta:
        a_next, b_next, dos = recurrence_series(delta, ms.b)
    else:
        a_next, b_next, dos = recurrence_direct(delta, ms.b)
    r_next = ms.r * ms.b * dos
    if not (math.isfinite(r_next) and r_next > ms.r):
        raise ContractViolation(
            f"radius failed to grow: r={ms.r} -> {r_next} at n={ms.n} "
            f"(a={ms.a}, b={ms.b}, delta={delta})")
    height = segment_max_height(ms, delta)
    return delta, MapState(r=r_next, a=a_next, b=b_next, n=ms.n + 1), height


def outgoing_components(ms: MapState, delta: float) -> tuple[float, float]:
    """Velocity components when the arc returns to the rod.

    Re = r (b/sin d - cos d/d) > 0 and Im = r (sin d/d - b d/sin d) < 0
    for every admissible state; delta must be the return time of ``ms``.
    """
    sd = math.sin(delta)
    cd = math.cos(delta)
    re_out = ms.r * (ms.b / sd - cd / delta)
    im_out = ms.r * (sd / delta - ms.b * delta / sd)
    return re_out, im_out


def segment_max_height(ms: MapState, delta: float,
                       scan_points: int = 64) -> float:
    """Peak of Im f(s) = r (b s cos s - (1 + a s) sin s) over one arc.

    Coarse scan first (the profile is not guaranteed unimodal a priori),
    then golden-section refinement of the winning bracket.
    """
    r, a, b = ms.r, ms.a, ms.b

    def height(s: float) -> float:
        return r * (b * s * math.cos(s) - (1.0 + a * s) * math.sin(s))

    best_i = 1
    best_h = -math.inf
    for i in range(1, scan_points):
        h = height(delta * i / scan_points)
        if h > best_h:
            best_i, best_h = i, h
    lo = delta * (best_i - 1) / scan_points
    hi = delta * (best_i + 1) / scan_points
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc = height(c)
    fd = height(d)
    tol = 1e-8 * delta
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = height(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = height(d)
    return max(best_h, fc, fd)


def in_degenerate_set(z0: complex, zdot0: complex,
                      cfg: SimConfig | None = None
                      ) -> tuple[bool, float, float]:
    """Membership test for the full-stop set {(r(1 - i tau)e^{i tau}, -r tau e^{i tau})}.

    Such initial data (position, initial rotating-frame velocity) reach
    the rod with zero velocity at time tau, for 0 < tau < t*.  Dividing
    the two components gives z0/zdot0 = -1/tau + i, so membership reduces
    to Im(z0/zdot0) = 1 and Re(z0/zdot0) < -1/t*.

    Returns (member, r, tau); r and tau are 0.0 for non-members.
    """
    cfg = cfg or DEFAULT_CONFIG
    require_finite(z0, "z0")
    require_finite(zdot0, "zdot0")
    if zdot0 == 0:
        return False, 0.0, 0.0
    q = z0 / zdot0
    if abs(q.imag - 1.0) > cfg.grazing_tol * (1.0 + abs(q)) or q.real >= 0.0:
        return False, 0.0, 0.0
    tau = -1.0 / q.real
    if not 0.0 < tau < T_STAR:
        return False, 0.0, 0.0
    return True, abs(zdot0) / tau, tau
