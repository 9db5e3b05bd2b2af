"""Air-gap geometry under combined static and dynamic rotor eccentricity.

The static displacement is a fixed vector in the stator frame; the dynamic
displacement co-rotates with the rotor. Their vector sum gives the composite
eccentricity degree and direction at each rotor angle, from which a three-term
cosine series for the gap permeance is derived in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MU0 = 4e-7 * math.pi

# Below this composite degree the gap is treated as uniform; avoids 0/0 in the
# series ratio q = (1 - sqrt(1 - d^2))/d.
UNIFORM_GAP_THRESHOLD = 1e-12


class RotorContactError(ValueError):
    """Raised when the eccentricity degree reaches or exceeds 1 (rotor rub)."""


@dataclass(frozen=True)
class EccentricityConfig:
    """Static/dynamic eccentricity degrees and initial direction angles.

    Degrees are fractions of the uniform gap length; angles in rad.
    """

    delta_s: float = 0.0
    delta_d: float = 0.0
    alpha_s0: float = 0.0
    alpha_d0: float = 0.0

    def __post_init__(self):
        if self.delta_s < 0 or self.delta_d < 0:
            raise ValueError("eccentricity degrees must be non-negative")
        if self.delta_s + self.delta_d >= 1.0:
            raise RotorContactError(
                f"delta_s + delta_d = {self.delta_s + self.delta_d:.4f} >= 1: "
                "rotor would touch the stator")

    @property
    def is_uniform(self) -> bool:
        return self.delta_s == 0.0 and self.delta_d == 0.0


@dataclass(frozen=True)
class GapGeometry:
    """Radial dimensions of the air gap (m)."""

    stator_radius: float
    rotor_radius: float

    def __post_init__(self):
        if self.stator_radius <= self.rotor_radius:
            raise ValueError("stator bore must exceed the rotor radius")

    @classmethod
    def from_rotor(cls, rotor_radius: float, gap: float) -> "GapGeometry":
        return cls(rotor_radius + gap, rotor_radius)

    @property
    def g0(self) -> float:
        """Uniform gap length R_s - R_r."""
        return self.stator_radius - self.rotor_radius

    @property
    def r0(self) -> float:
        """Mean gap radius (R_s + R_r)/2."""
        return 0.5 * (self.stator_radius + self.rotor_radius)

    @property
    def p0(self) -> float:
        """Uniform gap permeance per unit axial length, mu0*r0/g0."""
        return MU0 * self.r0 / self.g0


@dataclass(frozen=True)
class GapState:
    """Composite eccentricity and permeance series at one rotor angle.

    delta/alpha describe the displacement vector in the stator frame; A, B, C
    are the dimensionless permeance-series coefficients. d* fields are exact
    derivatives with respect to the rotor angle (per rad).
    """

    delta: float
    alpha: float
    A: float
    B: float
    C: float
    d_delta: float = 0.0
    d_alpha: float = 0.0
    dA: float = 0.0
    dB: float = 0.0
    dC: float = 0.0

    def permeance_ratio(self, phi):
        """P(phi)/P0 from the three-term series."""
        x = np.asarray(phi) - self.alpha
        return self.A + self.B * np.cos(x) + self.C * np.cos(2.0 * x)


def composite_eccentricity(cfg: EccentricityConfig, theta):
    """Polar form of the static + dynamic displacement vector sum.

    The static vector sits at alpha_s0; the dynamic vector at alpha_d0 + theta.
    Returns (delta, alpha) with alpha from the full-quadrant arctangent;
    accepts scalar or array theta.
    """
    theta = np.asarray(theta, dtype=float)
    phi_d = cfg.alpha_d0 + theta
    vx = cfg.delta_s * math.cos(cfg.alpha_s0) + cfg.delta_d * np.cos(phi_d)
    vy = cfg.delta_s * math.sin(cfg.alpha_s0) + cfg.delta_d * np.sin(phi_d)
    delta = np.hypot(vx, vy)
    alpha = np.where(delta > UNIFORM_GAP_THRESHOLD, np.arctan2(vy, vx), 0.0)
    if theta.ndim == 0:
        return float(delta), float(alpha)
    return delta, alpha


def permeance_coefficients(delta: float) -> tuple[float, float, float]:
    """Closed-form (A, B, C) of the three-term permeance series.

    A = 1/sqrt(1-d^2), B = 2Aq, C = 2Aq^2 with q = d/(1 + sqrt(1-d^2)),
    the numerically stable form of (1 - sqrt(1-d^2))/d.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta >= 1.0:
        raise RotorContactError(f"eccentricity degree {delta} >= 1")
    if delta < UNIFORM_GAP_THRESHOLD:
        return 1.0, 0.0, 0.0
    root = math.sqrt(1.0 - delta * delta)
    a = 1.0 / root
    q = delta / (1.0 + root)
    return a, 2.0 * a * q, 2.0 * a * q * q


def gap_length(geom: GapGeometry, delta: float, alpha: float, phi):
    """Simplified gap profile g0*(1 - delta*cos(phi - alpha))."""
    return geom.g0 * (1.0 - delta * np.cos(np.asarray(phi) - alpha))


def exact_gap_length(geom: GapGeometry, delta: float, alpha: float, phi):
    """Exact circle-to-circle gap; kept as an oracle for the simplified form."""
    x = np.asarray(phi) - alpha
    d = delta * geom.g0
    return (geom.stator_radius - d * np.cos(x)
            - np.sqrt(geom.rotor_radius**2 - (d * np.sin(x)) ** 2))


def gap_state(cfg: EccentricityConfig, theta) -> GapState:
    """Composite gap description with exact angle derivatives.

    Accepts scalar or array theta; with an array, every field of the returned
    GapState is an array of the same shape.
    """
    if isinstance(theta, (int, float)):
        return _gap_state_scalar(cfg, float(theta))
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 0:
        return _gap_state_scalar(cfg, float(theta))
    delta, alpha = composite_eccentricity(cfg, theta)
    delta = np.asarray(delta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)

    uniform = delta < UNIFORM_GAP_THRESHOLD
    safe = np.where(uniform, 0.5, delta)  # dummy where the uniform branch wins
    root = np.sqrt(1.0 - delta * delta)
    a = 1.0 / root
    q = delta / (1.0 + root)
    b = 2.0 * a * q
    c = 2.0 * a * q * q

    rel = (cfg.alpha_d0 + theta) - cfg.alpha_s0
    d_delta = np.where(uniform, 0.0,
                       -cfg.delta_s * cfg.delta_d * np.sin(rel) / safe)
    d_alpha = np.where(uniform, 0.0,
                       cfg.delta_d * (cfg.delta_d + cfg.delta_s * np.cos(rel)) / safe**2)

    # chain through delta: dA/dd = d*A^3, dq/dd = q*A/d
    dA_dd = delta * a**3
    dB_dd = 2.0 * q * (delta * a**3 + a * a / safe)
    dC_dd = 2.0 * q * q * (delta * a**3 + 2.0 * a * a / safe)

    return GapState(delta, alpha,
                    np.where(uniform, 1.0, a),
                    np.where(uniform, 0.0, b),
                    np.where(uniform, 0.0, c),
                    d_delta=d_delta, d_alpha=d_alpha,
                    dA=np.where(uniform, 0.0, dA_dd * d_delta),
                    dB=np.where(uniform, 0.0, dB_dd * d_delta),
                    dC=np.where(uniform, 0.0, dC_dd * d_delta))


def _gap_state_scalar(cfg: EccentricityConfig, theta: float) -> GapState:
    phi_d = cfg.alpha_d0 + theta
    vx = cfg.delta_s * math.cos(cfg.alpha_s0) + cfg.delta_d * math.cos(phi_d)
    vy = cfg.delta_s * math.sin(cfg.alpha_s0) + cfg.delta_d * math.sin(phi_d)
    delta = math.hypot(vx, vy)
    if delta < UNIFORM_GAP_THRESHOLD:
        return GapState(delta, 0.0, 1.0, 0.0, 0.0)
    alpha = math.atan2(vy, vx)
    root = math.sqrt(1.0 - delta * delta)
    a = 1.0 / root
    q = delta / (1.0 + root)
    rel = phi_d - cfg.alpha_s0
    d_delta = -cfg.delta_s * cfg.delta_d * math.sin(rel) / delta
    d_alpha = cfg.delta_d * (cfg.delta_d + cfg.delta_s * math.cos(rel)) / delta**2
    a3d = delta * a**3
    return GapState(delta, alpha, a, 2 * a * q, 2 * a * q * q,
                    d_delta=d_delta, d_alpha=d_alpha,
                    dA=a3d * d_delta,
                    dB=2 * q * (a3d + a * a / delta) * d_delta,
                    dC=2 * q * q * (a3d + 2 * a * a / delta) * d_delta)
