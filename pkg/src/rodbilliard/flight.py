"""Free flight in the rotating frame, elastic reflection, inter-impact arcs.

Between impacts the ball moves along a straight lab-frame line, which in
the rotating frame reads z(t) = (z + v t) e^{-it}.  Anchored at an impact
time t_n with z(t_n) = r_n > 0 the same arc takes the normalized form

    f_n(s) = r_n (1 + w_n s) e^{-is},    s = t - t_n,   w_n = a_n + i b_n,

which is the representation the impact recurrences are written in; it
stays well conditioned as t_n grows, unlike the global (z, v) form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import require_finite, unit_rotation


@dataclass(frozen=True, slots=True)
class FreeFlight:
    """Straight lab-frame motion: line intercept ``z`` and constant velocity ``v``."""

    z: complex
    v: complex

    def __post_init__(self) -> None:
        require_finite(self.z, "z")
        require_finite(self.v, "v")


def flight_position(ff: FreeFlight, t: float) -> complex:
    """Rotating-frame position (z + v t) e^{-it}."""
    return (ff.z + ff.v * t) * unit_rotation(-t)


def flight_velocity(ff: FreeFlight, t: float) -> complex:
    """Rotating-frame velocity (v - i (z + v t)) e^{-it}."""
    return (ff.v - 1j * (ff.z + ff.v * t)) * unit_rotation(-t)


def reflect(zdot_in: complex) -> complex:
    """Elastic reflection at the rod: conjugate the velocity."""
    return zdot_in.conjugate()


def to_lab_frame(z_rot: complex, t: float) -> complex:
    """Undo the frame rotation: multiply by e^{+it}."""
    return z_rot * unit_rotation(t)


@dataclass(frozen=True, slots=True)
class FlightSegment:
    """One arc r (1 + (a + ib) s) e^{-is} anchored at an impact.

    ``n`` follows impact numbering; n = 0 is reserved for the approach
    arc before the first impact, which is anchored at its end (s <= 0).
    ``delta`` is the arc duration; ``None`` marks the open segment after
    the last computed impact, which accepts any s >= 0.
    """

    n: int
    t_start: float
    r: float
    a: float
    b: float
    delta: float | None = None

    def __post_init__(self) -> None:
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"segment radius must be positive and finite, got {self.r}")
        if self.delta is not None and not 0.0 < self.delta < math.pi:
            raise ValueError(f"segment duration must lie in (0, pi), got {self.delta}")


_S_SLACK = 1e-12


def _check_s(seg: FlightSegment, s: float) -> None:
    if seg.n == 0:
        # approach arc: ends at its anchor impact
        if s > _S_SLACK:
            raise ValueError(f"s = {s} lies past the approach arc's impact")
        return
    if s < -_S_SLACK:
        raise ValueError(f"s = {s} precedes the segment start")
    if seg.delta is not None and s > seg.delta + _S_SLACK:
        raise ValueError(f"s = {s} exceeds the segment duration {seg.delta}")


def segment_position(seg: FlightSegment, s: float) -> complex:
    """Arc position f(s) = r (1 + w s) e^{-is}."""
    _check_s(seg, s)
    w = complex(seg.a, seg.b)
    return seg.r * (1.0 + w * s) * unit_rotation(-s)


def segment_velocity(seg: FlightSegment, s: float) -> complex:
    """Arc velocity f'(s) = r (w - i (1 + w s)) e^{-is}; f'(0) = r (a + i(b - 1))."""
    _check_s(seg, s)
    w = complex(seg.a, seg.b)
    return seg.r * (w - 1j * (1.0 + w * s)) * unit_rotation(-s)


def segment_to_free_flight(seg: FlightSegment) -> FreeFlight:
    """Equivalent global free flight, mainly for cross-checks.

    Substituting s = t - t_start into the arc form gives the line data
    z = r (1 - w t_start) e^{i t_start}, v = r w e^{i t_start}.
    """
    w = complex(seg.a, seg.b)
    rot = unit_rotation(seg.t_start)
    return FreeFlight(z=seg.r * (1.0 - w * seg.t_start) * rot,
                      v=seg.r * w * rot)
