"""Turn functions of the stator phases and rotor cage loops.

Six basic shapes generate every winding distribution in the machine: the
stator-phase turn function, its square, and the product of two phases (all
pi-periodic for the 4-pole layout), plus the rotor-loop trapezoid, its square,
and the adjacent-loop product. Each has closed-form Fourier coefficients.
Slot-top MMF rise is modeled as linear; a step-rise variant is kept only for
comparison tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GapState

BASIC_KINDS = ("AS", "BS", "CS", "AR", "BR", "CR")
STATOR_KINDS = ("AS", "BS", "CS")


@dataclass(frozen=True)
class WindingLayout:
    """Stator/rotor winding structure.

    turns is N such that the stator turn function peaks at 2N. The stator is
    hard-structured as 3 phases, 4 poles; other pole counts are unsupported.
    bar_angle is the rotor-bar view angle (rad), skew_angle the axial skew.
    """

    turns: int
    n_bars: int
    bar_angle: float
    pole_pairs: int = 2
    skew_angle: float = 0.0

    def __post_init__(self):
        if self.pole_pairs != 2:
            raise ValueError("only the 3-phase, 4-pole stator layout is supported")
        if self.n_bars < 3:
            raise ValueError("need at least 3 rotor bars")
        if not 0 < self.bar_angle < 2 * math.pi / self.n_bars:
            raise ValueError("bar view angle must lie in (0, 2*pi/n_bars)")
        if self.turns < 1:
            raise ValueError("turns must be >= 1")

    @property
    def loop_pitch(self) -> float:
        """Angular pitch of one rotor loop, 2*pi/n_bars."""
        return 2 * math.pi / self.n_bars


def _stator_ramps(phi, N, rise):
    x = np.mod(phi, np.pi)
    if rise == "linear":
        return np.select(
            [x < np.pi / 6, x < np.pi / 2, x < 2 * np.pi / 3],
            [12 * N / np.pi * x, 2.0 * N, 8.0 * N - 12 * N / np.pi * x],
            0.0)
    # step rise: each ramp replaced by a jump at its midpoint
    return np.where((x >= np.pi / 12) & (x < 7 * np.pi / 12), 2.0 * N, 0.0)


def _rotor_trapezoid(phi, layout, rise):
    x = np.mod(phi, 2 * np.pi)
    g = layout.bar_angle
    a = layout.loop_pitch
    if rise == "linear":
        return np.select(
            [x < g, x < a, x < a + g],
            [x / g, 1.0, 1.0 - (x - a) / g],
            0.0)
    return np.where((x >= g / 2) & (x < a + g / 2), 1.0, 0.0)


def basic_function_value(kind: str, layout: WindingLayout, phi, rise: str = "linear"):
    """Evaluate one of the six basic functions at phi (vectorized).

    Stator kinds repeat with period pi, rotor kinds with 2*pi. BS and BR are
    the pointwise squares of AS and AR; CS/CR pair two displaced functions.
    """
    N = float(layout.turns)
    if kind == "AS":
        return _stator_ramps(phi, N, rise)
    if kind == "BS":
        return _stator_ramps(phi, N, rise) ** 2
    if kind == "CS":
        return _stator_ramps(phi, N, rise) * _stator_ramps(np.asarray(phi) - 2 * np.pi / 3, N, rise)
    if kind == "AR":
        return _rotor_trapezoid(phi, layout, rise)
    if kind == "BR":
        return _rotor_trapezoid(phi, layout, rise) ** 2
    if kind == "CR":
        return (_rotor_trapezoid(phi, layout, rise)
                * _rotor_trapezoid(np.asarray(phi) + layout.loop_pitch, layout, rise))
    raise ValueError(f"unknown basic function kind {kind!r}")


def shifted(kind: str, layout: WindingLayout, phi, i: int, j: int | None = None):
    """Indexed phase/loop function via argument shift of the basic shape.

    Stator indices run 1..3 (CS needs a distinct pair i, j), rotor 1..n_bars.
    """
    if kind in ("AS", "BS"):
        if not 1 <= i <= 3:
            raise IndexError(f"stator phase index {i} out of range")
        return basic_function_value(kind, layout, np.asarray(phi) - 2 * np.pi * (i - 1) / 3)
    if kind == "CS":
        if j is None or i == j or not (1 <= i <= 3 and 1 <= j <= 3):
            raise IndexError("CS needs two distinct stator indices in 1..3")
        return basic_function_value(kind, layout, np.asarray(phi) - (i + j) * np.pi / 3 + np.pi)
    if kind in ("AR", "BR", "CR"):
        if not 1 <= i <= layout.n_bars:
            raise IndexError(f"rotor loop index {i} out of range")
        return basic_function_value(kind, layout, np.asarray(phi) - layout.loop_pitch * (i - 1))
    raise ValueError(f"unknown basic function kind {kind!r}")


@dataclass(frozen=True)
class FourierSeriesSet:
    """Cosine/sine series a0 + sum a_k cos(p*k*phi) + b_k sin(p*k*phi).

    angular_multiplier p is 2 for stator sets and 1 for rotor sets.
    """

    kind: str
    a0: float
    a: np.ndarray
    b: np.ndarray
    angular_multiplier: int

    @property
    def orders(self) -> np.ndarray:
        return np.arange(1, len(self.a) + 1)

    def reconstruct(self, phi):
        phi = np.asarray(phi, dtype=float)
        k = self.orders * self.angular_multiplier
        ang = np.multiply.outer(phi, k)
        return self.a0 + np.cos(ang) @ self.a + np.sin(ang) @ self.b

    def complex_coefficient(self, m: int) -> complex:
        """Coefficient of exp(i*p*m*phi); conjugate symmetric in m."""
        if m == 0:
            return complex(self.a0)
        k = abs(m)
        if k > len(self.a):
            return 0j
        c = 0.5 * (self.a[k - 1] - 1j * self.b[k - 1])
        return c if m > 0 else c.conjugate()


def fourier_set(kind: str, layout: WindingLayout, k_max: int = 300) -> FourierSeriesSet:
    """Closed-form Fourier coefficients of a basic function (no integration)."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    N = float(layout.turns)
    n = layout.n_bars
    g = layout.bar_angle
    k = np.arange(1, k_max + 1, dtype=float)
    pk = np.pi * k

    if kind == "AS":
        odd = 1.0 - (-1.0) ** k
        a = -6 * N / pk**2 * odd * (1 - np.cos(k * np.pi / 3))
        b = 6 * N / pk**2 * odd * np.sin(k * np.pi / 3)
        return FourierSeriesSet(kind, N, a, b, 2)
    if kind == "BS":
        ev = 1.0 + (-1.0) ** k
        a = (24 * N**2 / pk**2 * (np.cos(k * np.pi / 3) + np.cos(k * np.pi))
             - 72 * N**2 / pk**3 * ev * np.sin(k * np.pi / 3))
        b = (24 * N**2 / pk**2 * np.sin(k * np.pi / 3)
             - 72 * N**2 / pk**3 * ev * (1 - np.cos(k * np.pi / 3)))
        return FourierSeriesSet(kind, 16 * N**2 / 9, a, b, 2)
    if kind == "CS":
        a = -12 * N**2 / pk**2 * (1 - 2 * np.cos(k * np.pi / 3) + np.cos(2 * k * np.pi / 3))
        b = -12 * N**2 / pk**2 * (-2 * np.sin(k * np.pi / 3) + np.sin(2 * k * np.pi / 3))
        return FourierSeriesSet(kind, 2 * N**2 / 3, a, b, 2)
    if kind == "AR":
        f = 4 / (pk * k * g) * np.sin(k * g / 2) * np.sin(k * np.pi / n)
        ang = k * np.pi / n + k * g / 2
        return FourierSeriesSet(kind, 1 / n, f * np.cos(ang), f * np.sin(ang), 1)
    if kind == "BR":
        f = 4 / (pk * k * g) * (np.cos(k * np.pi / n - k * g / 2)
                                - 2 / (k * g) * np.cos(k * np.pi / n) * np.sin(k * g / 2))
        ang = k * np.pi / n + k * g / 2
        return FourierSeriesSet(kind, 1 / n - g / (6 * np.pi), f * np.cos(ang), f * np.sin(ang), 1)
    if kind == "CR":
        f = 2 / (np.pi * g * k**2) * (2 / (k * g) * np.sin(k * g / 2) - np.cos(k * g / 2))
        return FourierSeriesSet(kind, g / (12 * np.pi),
                                f * np.cos(k * g / 2), f * np.sin(k * g / 2), 1)
    raise ValueError(f"unknown basic function kind {kind!r}")


def rotor_turn_integrals(layout: WindingLayout, phi):
    """Rotor loop turn function and its first/second running integrals.

    Returns (n_r, k_r, m_r) at phi, each a closed-form piecewise polynomial:
    zero for phi <= 0; above the trapezoid (phi >= 2*pi/n + bar angle) n_r is
    0, k_r saturates at the loop pitch and m_r continues linearly.
    """
    g = layout.bar_angle
    a = layout.loop_pitch
    x = np.asarray(phi, dtype=float)

    n_r = np.select(
        [x <= 0, x <= g, x <= a, x <= a + g],
        [0.0, x / g, 1.0, 1.0 - (x - a) / g], 0.0)

    k_g = g / 2
    k_a = k_g + (a - g)
    k_r = np.select(
        [x <= 0, x <= g, x <= a, x <= a + g],
        [0.0,
         0.5 / g * x**2,
         k_g + (x - g),
         k_a + (x - a) - 0.5 / g * (x - a) ** 2],
        a)

    m_g = g**2 / 6
    m_a = m_g + k_g * (a - g) + 0.5 * (a - g) ** 2
    m_end = m_a + k_a * g + 0.5 * g**2 - g**2 / 6
    m_r = np.select(
        [x <= 0, x <= g, x <= a, x <= a + g],
        [0.0,
         x**3 / (6 * g),
         m_g + k_g * (x - g) + 0.5 * (x - g) ** 2,
         m_a + k_a * (x - a) + 0.5 * (x - a) ** 2 - (x - a) ** 3 / (6 * g)],
        m_end + a * (x - a - g))
    return n_r, k_r, m_r


class TurnFunction:
    """A turn distribution with known breakpoints, for quadrature work."""

    def __init__(self, fn, breakpoints, label: str = ""):
        self._fn = fn
        self.breakpoints = np.sort(np.mod(np.asarray(breakpoints, dtype=float), 2 * np.pi))
        self.label = label

    def __call__(self, phi):
        return self._fn(phi)


def stator_phase_turns(layout: WindingLayout, i: int) -> TurnFunction:
    shift = 2 * np.pi * (i - 1) / 3
    base = shift + np.array([0, np.pi / 6, np.pi / 2, 2 * np.pi / 3])
    bps = np.concatenate([base, base + np.pi])
    return TurnFunction(lambda phi: shifted("AS", layout, phi, i), bps, f"stator phase {i}")


def rotor_loop_turns(layout: WindingLayout, j: int, rotor_angle: float = 0.0) -> TurnFunction:
    shift = layout.loop_pitch * (j - 1) + rotor_angle
    g = layout.bar_angle
    bps = shift + np.array([0, g, layout.loop_pitch, layout.loop_pitch + g])
    return TurnFunction(
        lambda phi: basic_function_value("AR", layout, np.asarray(phi) - shift),
        bps, f"rotor loop {j}")


def merged_loop_turns(layout: WindingLayout, loops, rotor_angle: float = 0.0) -> TurnFunction:
    """Sum of several loop turn functions (the super-loop left by broken bars)."""
    members = [rotor_loop_turns(layout, j, rotor_angle) for j in loops]
    bps = np.concatenate([m.breakpoints for m in members])
    return TurnFunction(lambda phi: sum(m(phi) for m in members), bps,
                        f"merged loops {tuple(loops)}")


def generalized_winding_function(turn_fn, gap_state: GapState, phi, grid: int = 200_000):
    """Winding function: turn function minus its permeance-weighted mean.

    The mu0 constant cancels between numerator and denominator, so weighting
    by the permeance ratio is equivalent to weighting by the permeance itself.
    At zero eccentricity this reduces to subtracting the plain mean.
    """
    x = (np.arange(grid) + 0.5) * 2 * np.pi / grid
    w = gap_state.permeance_ratio(x)
    nx = turn_fn(x)
    weighted_mean = (w * nx).sum() / w.sum()
    return turn_fn(phi) - weighted_mean
