"""Closed-form machine inductances under eccentricity, with a quadrature oracle.

Every magnetizing inductance is an algebraic expression in the rotor angle and
the permeance-series state: stator and rotor blocks come from the weighted
averages of the basic functions; the stator-rotor mutual combines an exact
piecewise-cubic healthy profile (built from the running integrals of the rotor
turn function) with per-harmonic permeance modulation evaluated through a
truncated coefficient series. No numerical integration or interpolation runs
per evaluation; the independent ground truth is Gauss-Legendre quadrature of
the defining winding-function integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import EccentricityConfig, GapGeometry, GapState, gap_state
from .winding import (TurnFunction, WindingLayout, fourier_set,
                      rotor_loop_turns, rotor_turn_integrals,
                      stator_phase_turns)

WAVG_KINDS = ("AS", "BS", "CS", "AR", "BR", "CR", "ASAR")

PROFILE_CSV_HEADER = "# cagesim inductance profile v1: theta_rad,value_H"


@dataclass(frozen=True)
class InductanceBundle:
    """All inductance matrices and their rotor-angle derivatives at one angle.

    The rotor-stator block is Lsr transposed by construction (shared storage),
    so reciprocity is exact.
    """

    theta: float
    Ls: np.ndarray   # 3 x 3, H
    Lr: np.ndarray   # n x n, H
    Lsr: np.ndarray  # 3 x n, H
    dLs: np.ndarray  # H/rad
    dLr: np.ndarray
    dLsr: np.ndarray


class _PeriodicPiecewisePoly:
    """Piecewise polynomial on [0, period), exact fit per interval."""

    def __init__(self, breaks: np.ndarray, coeffs: np.ndarray, period: float):
        self.breaks = breaks      # (K+1,) ascending; breaks[0]=0, breaks[-1]=period
        self.coeffs = coeffs      # (K, deg+1), ascending powers of (u - lo)
        self.period = period

    @classmethod
    def fit(cls, fn, breaks, period, degree=3):
        breaks = np.asarray(breaks, dtype=float)
        coeffs = np.empty((len(breaks) - 1, degree + 1))
        for k in range(len(breaks) - 1):
            width = breaks[k + 1] - breaks[k]
            t = width * np.linspace(0.07, 0.93, degree + 2)
            coeffs[k] = np.polynomial.polynomial.polyfit(t, fn(breaks[k] + t), degree)
        return cls(breaks, coeffs, period)

    def __call__(self, u):
        u = np.mod(np.asarray(u, dtype=float), self.period)
        idx = np.clip(np.searchsorted(self.breaks, u, side="right") - 1,
                      0, len(self.coeffs) - 1)
        t = u - self.breaks[idx]
        c = self.coeffs[idx]
        out = c[..., -1]
        for k in range(self.coeffs.shape[1] - 2, -1, -1):
            out = out * t + c[..., k]
        return out

    def derivative(self) -> "_PeriodicPiecewisePoly":
        deg = self.coeffs.shape[1] - 1
        dc = self.coeffs[:, 1:] * np.arange(1, deg + 1)
        return _PeriodicPiecewisePoly(self.breaks, dc, self.period)

    def value_and_derivative(self, u):
        """Both evaluations with one interval lookup (ODE hot path)."""
        u = np.mod(np.asarray(u, dtype=float), self.period)
        idx = np.clip(np.searchsorted(self.breaks, u, side="right") - 1,
                      0, len(self.coeffs) - 1)
        t = u - self.breaks[idx]
        c = self.coeffs[idx]
        val = c[..., -1]
        deg = self.coeffs.shape[1] - 1
        dval = deg * c[..., -1]
        for k in range(deg - 1, 0, -1):
            val = val * t + c[..., k]
            dval = dval * t + k * c[..., k]
        val = val * t + c[..., 0]
        return val, dval


def _merge_breaks(points, period, tol=1e-11):
    pts = np.mod(np.asarray(points, dtype=float), period)
    pts = np.concatenate([[0.0], pts[(pts > tol) & (pts < period - tol)], [period]])
    pts = np.unique(pts)
    keep = np.concatenate([[True], np.diff(pts) > tol])
    return pts[keep]


class InductanceModel:
    """Precomputed closed-form evaluator for one machine geometry.

    Bar skew is folded in at construction: the bar-position-dependent harmonic
    coefficients of the stator-rotor block get the three-point trapezoid
    factors and the healthy profile is rebuilt, so skewed evaluation costs the
    same as unskewed. Stator/rotor blocks are unskewed by default (the
    generic three-point operator `skew_correct` covers the rest).
    """

    def __init__(self, layout: WindingLayout, geometry: GapGeometry,
                 stack_length: float, lls: float = 0.0, lb: float = 0.0,
                 le: float = 0.0, mutual_skew: bool = True,
                 series_terms: int = 301):
        self.layout = layout
        self.geometry = geometry
        self.stack_length = stack_length
        self.lls, self.lb, self.le = lls, lb, le
        self.mutual_skew = bool(mutual_skew and layout.skew_angle > 0.0)

        n = layout.n_bars
        N = float(layout.turns)
        g = layout.bar_angle
        self.n = n
        self.N = N
        self.p0l = geometry.p0 * stack_length            # mu0*r0*l/g0
        self.k2pl = 2 * np.pi * self.p0l                 # 2*pi*l*P0

        self._ci = (2 * np.arange(1, 4) - 1) * np.pi / 3
        self._cij = (np.add.outer(np.arange(1, 4), np.arange(1, 4)) - 1) * np.pi / 3
        self._oj = layout.loop_pitch * np.arange(n)
        self._map = self._oj[None, :] - (2 * np.pi / 3) * np.arange(3)[:, None]

        # first/second-harmonic constants of the rotor-side weighted averages
        pg = np.pi * g
        self._ar = (2 / pg * math.sin(g / 2) * math.sin(np.pi / n),
                    0.5 / pg * math.sin(g) * math.sin(2 * np.pi / n))
        self._br = (2 / pg * (math.cos(np.pi / n - g / 2)
                              - 2 / g * math.cos(np.pi / n) * math.sin(g / 2)),
                    0.5 / pg * (math.cos(2 * np.pi / n - g)
                                - 1 / g * math.cos(2 * np.pi / n) * math.sin(g)))
        self._cr = (1 / pg * (2 / g * math.sin(g / 2) - math.cos(g / 2)),
                    0.25 / pg * (1 / g * math.sin(g) - math.cos(g)))

        # harmonic cross-coupling series for <P.AS_i.AR_j>
        M = series_terms if series_terms % 2 == 1 else series_terms + 1
        stator_series = fourier_set("AS", layout, k_max=M)
        rotor_series = fourier_set("AR", layout, k_max=2 * M + 2)
        self._m_odd = np.arange(1, M + 1, 2)
        S = np.array([stator_series.complex_coefficient(m) for m in self._m_odd])
        R = np.array([rotor_series.complex_coefficient(k) for k in range(2 * M + 3)])
        half = 0.5 * layout.skew_angle if self.mutual_skew else 0.0

        def skew_factor(kappa):
            return 0.5 * (1.0 + np.cos(np.asarray(kappa, dtype=float) * half))

        self._series = {}
        for c in (1, 2):
            vp = S * np.conj(R[2 * self._m_odd + c]) * skew_factor(2 * self._m_odd + c)
            vn = np.conj(S) * R[2 * self._m_odd - c] * skew_factor(2 * self._m_odd - c)
            v0 = N * np.conj(R[c]) * skew_factor(c)
            self._series[c] = (v0, vp, vn, 2j * self._m_odd * vp, -2j * self._m_odd * vn)
        self._sk_r = (skew_factor(1.0), skew_factor(2.0))

        # healthy raw product integral X0(u) = int AS(phi) AR(phi-u) dphi:
        # exact piecewise cubic, period pi
        anchors = np.array([0, np.pi / 6, np.pi / 2, np.pi / 2 + np.pi / 6,
                            np.pi, np.pi + np.pi / 6, 3 * np.pi / 2,
                            3 * np.pi / 2 + np.pi / 6])
        knees = np.array([0.0, g, layout.loop_pitch, layout.loop_pitch + g])
        bp = _merge_breaks(np.subtract.outer(anchors, knees).ravel(), np.pi)
        self._x0 = _PeriodicPiecewisePoly.fit(self._x0_exact, bp, np.pi)
        if self.mutual_skew:
            bp_s = _merge_breaks(np.concatenate([bp, bp - half, bp + half]), np.pi)
            self._x0_used = _PeriodicPiecewisePoly.fit(
                lambda u: 0.25 * (self._x0(u - half) + 2 * self._x0(u)
                                  + self._x0(u + half)),
                bp_s, np.pi)
        else:
            self._x0_used = self._x0
        self._dx0_used = self._x0_used.derivative()

        self._leak_s = lls * np.eye(3)
        idx = np.arange(n)
        leak_r = np.zeros((n, n))
        leak_r[idx, idx] = 2 * (lb + le)
        leak_r[idx, (idx - 1) % n] = -lb
        leak_r[(idx - 1) % n, idx] = -lb
        self._leak_r = leak_r
        self._idx = idx

    # -- healthy profile -----------------------------------------------------

    def _x0_exact(self, u):
        """Raw product integral via second integrals of the rotor turn function."""
        th = np.mod(np.asarray(u, dtype=float), np.pi)

        def mr(x):
            return rotor_turn_integrals(self.layout, x)[2]

        total = 0.0
        for c0, sign in ((0.0, -1.0), (np.pi / 2, 1.0), (np.pi, -1.0),
                         (3 * np.pi / 2, 1.0)):
            total = total + sign * (mr(c0 + np.pi / 6 - th) - mr(c0 - th))
        return (12 * self.N / np.pi) * total

    def healthy_mutual(self, theta, skewed: bool = False):
        """Healthy mutual profile (phase 1, loop 1) as a function of rotor angle."""
        x0 = self._x0_used if (skewed and self.mutual_skew) else self._x0
        return self.p0l * (x0(theta) - 2 * np.pi * self.N / self.n)

    # -- weighted averages (normalized by P0) --------------------------------

    def _stator_avgs(self, gs: GapState):
        N = self.N
        alpha = np.asarray(gs.alpha, dtype=float)
        A, C, dA, dC, dal = (np.asarray(v, dtype=float)[..., None]
                             for v in (gs.A, gs.C, gs.dA, gs.dC, gs.d_alpha))
        arg = 2.0 * (alpha[..., None] - self._ci)
        ca, sa = np.cos(arg), np.sin(arg)
        c_as = 6 * N / np.pi**2
        was = A * N + c_as * C * ca
        dwas = dA * N + c_as * (dC * ca - 2 * C * dal * sa)
        c_bs = 12 * N**2 / np.pi**2
        wbs = 16 * N**2 / 9 * A + c_bs * C * ca
        dwbs = 16 * N**2 / 9 * dA + c_bs * (dC * ca - 2 * C * dal * sa)
        argij = 2.0 * (alpha[..., None, None] - self._cij)
        cij, sij = np.cos(argij), np.sin(argij)
        c_cs = 6 * N**2 / np.pi**2
        wcs = 2 * N**2 / 3 * A[..., None] - c_cs * C[..., None] * cij
        dwcs = (2 * N**2 / 3 * dA[..., None]
                - c_cs * (dC[..., None] * cij - 2 * C[..., None] * dal[..., None] * sij))
        return was, dwas, wbs, dwbs, wcs, dwcs

    def _rotor_avgs(self, gs: GapState, theta, skew_scaled: bool = False):
        n = self.n
        g = self.layout.bar_angle
        f1 = self._sk_r[0] if skew_scaled else 1.0
        f2 = self._sk_r[1] if skew_scaled else 1.0
        a_eff = np.asarray(gs.alpha, dtype=float) - np.asarray(theta, dtype=float)
        A, B, C, dA, dB, dC = (np.asarray(v, dtype=float)[..., None]
                               for v in (gs.A, gs.B, gs.C, gs.dA, gs.dB, gs.dC))
        da = (np.asarray(gs.d_alpha, dtype=float) - 1.0)[..., None]

        out = []
        for (k1, k2), a0, off in ((self._ar, 1.0 / n, np.pi / n + g / 2),
                                  (self._br, 1.0 / n - g / (6 * np.pi), np.pi / n + g / 2),
                                  (self._cr, g / (12 * np.pi), g / 2)):
            psi = a_eff[..., None] - self._oj - off
            c1, s1 = np.cos(psi), np.sin(psi)
            c2, s2 = np.cos(2 * psi), np.sin(2 * psi)
            w = A * a0 + B * (f1 * k1) * c1 + C * (f2 * k2) * c2
            dw = (dA * a0 + (f1 * k1) * (dB * c1 - B * da * s1)
                  + (f2 * k2) * (dC * c2 - 2 * C * da * s2))
            out.extend((w, dw))
        return tuple(out)  # war, dwar, wbr, dwbr, wcr, dwcr

    def _mutual_avgs(self, gs: GapState, theta):
        """<P.AS_i.AR_j>/P0 of shape (...,3,n) and its theta derivative."""
        theta = np.asarray(theta, dtype=float)
        u = theta[..., None, None] + self._map          # (...,3,n)
        sigma = theta[..., None] + self._oj             # (...,n)
        alpha = np.asarray(gs.alpha, dtype=float)
        A, B, C, dA, dB, dC = (np.asarray(v, dtype=float)[..., None, None]
                               for v in (gs.A, gs.B, gs.C, gs.dA, gs.dB, gs.dC))
        one_m_dal = (1.0 - np.asarray(gs.d_alpha, dtype=float))[..., None, None]

        f0 = self._x0_used(u) / (2 * np.pi)
        df0 = self._dx0_used(u) / (2 * np.pi)
        w = A * f0 + 0j
        dw = dA * f0 + A * df0 + 0j

        uniform = np.all(np.asarray(gs.B) == 0.0) and np.all(np.asarray(gs.C) == 0.0)
        if not uniform:
            # E[..., t] = exp(2i * m_t * u) for odd m_t = 2t+1
            T = len(self._m_odd)
            z = np.exp(2j * u)
            z2 = z * z
            stack = np.broadcast_to(z2[..., None], u.shape + (T,)).copy()
            stack[..., 0] = z
            E = np.multiply.accumulate(stack, axis=-1)
            Ec = np.conj(E)
            for c, coef, dcoef in ((1, B, dB), (2, C, dC)):
                v0, vp, vn, dvp, dvn = self._series[c]
                F = v0 + E @ vp + Ec @ vn
                dFdu = E @ dvp + Ec @ dvn
                ph = np.exp(1j * c * (sigma - alpha[..., None]))[..., None, :]
                w = w + coef * ph * F
                dw = dw + dcoef * ph * F + coef * ph * (1j * c * one_m_dal * F + dFdu)
        return w.real, dw.real

    def weighted_average(self, kind: str, gs: GapState, theta: float,
                         i: int, j: int | None = None) -> float:
        """One permeance-weighted average from the seven evaluator family.

        Normalized by P0 (the uniform-gap permeance per unit length); mutual
        inductance assembly re-applies P0 and 2*pi*l.
        """
        if kind in ("AS", "BS", "CS"):
            was, _, wbs, _, wcs, _ = self._stator_avgs(gs)
            if kind == "AS":
                return float(was[..., i - 1])
            if kind == "BS":
                return float(wbs[..., i - 1])
            if j is None or i == j:
                raise IndexError("CS needs a distinct stator pair")
            return float(wcs[..., i - 1, j - 1])
        if kind in ("AR", "BR", "CR"):
            war, _, wbr, _, wcr, _ = self._rotor_avgs(gs, theta)
            sel = {"AR": war, "BR": wbr, "CR": wcr}[kind]
            return float(sel[..., i - 1])
        if kind == "ASAR":
            w, _ = self._mutual_avgs(gs, theta)
            if j is None:
                raise IndexError("ASAR needs a stator index and a rotor index")
            return float(w[..., i - 1, j - 1])
        raise ValueError(f"unknown weighted-average kind {kind!r}")

    # -- matrix assembly -----------------------------------------------------

    def blocks(self, cfg: EccentricityConfig, theta, which=("Ls", "Lr", "Lsr",
                                                            "dLs", "dLr", "dLsr")):
        """Requested inductance blocks at theta (scalar or array, leading axis)."""
        theta = np.asarray(theta, dtype=float)
        gs = gap_state(cfg, theta)
        invA = 1.0 / np.asarray(gs.A, dtype=float)
        dA = np.asarray(gs.dA, dtype=float)
        out = {}

        if "Ls" in which or "dLs" in which:
            was, dwas, wbs, dwbs, wcs, dwcs = self._stator_avgs(gs)
            cross = np.einsum("...i,...j->...ij", was, was) * invA[..., None, None]
            Ms = wcs.copy()
            di = np.arange(3)
            Ms[..., di, di] = wbs
            if "Ls" in which:
                out["Ls"] = self.k2pl * (Ms - cross) + self._leak_s
            if "dLs" in which:
                dcross = (np.einsum("...i,...j->...ij", dwas, was)
                          + np.einsum("...i,...j->...ij", was, dwas)) * invA[..., None, None] \
                    - cross * (dA * invA)[..., None, None]
                dMs = dwcs.copy()
                dMs[..., di, di] = dwbs
                out["dLs"] = self.k2pl * (dMs - dcross)

        if "Lr" in which or "dLr" in which:
            war, dwar, wbr, dwbr, wcr, dwcr = self._rotor_avgs(gs, theta)
            idx = self._idx
            prev = (idx - 1) % self.n
            cross = np.einsum("...i,...j->...ij", war, war) * invA[..., None, None]
            if "Lr" in which:
                Mr = -cross
                Mr[..., idx, idx] += wbr
                Mr[..., idx, prev] += wcr
                Mr[..., prev, idx] += wcr
                out["Lr"] = self.k2pl * Mr + self._leak_r
            if "dLr" in which:
                dcross = (np.einsum("...i,...j->...ij", dwar, war)
                          + np.einsum("...i,...j->...ij", war, dwar)) * invA[..., None, None] \
                    - cross * (dA * invA)[..., None, None]
                dMr = -dcross
                dMr[..., idx, idx] += dwbr
                dMr[..., idx, prev] += dwcr
                dMr[..., prev, idx] += dwcr
                out["dLr"] = self.k2pl * dMr

        if "Lsr" in which or "dLsr" in which:
            was, dwas, _, _, _, _ = self._stator_avgs(gs)
            war, dwar, _, _, _, _ = self._rotor_avgs(gs, theta,
                                                     skew_scaled=self.mutual_skew)
            w, dw = self._mutual_avgs(gs, theta)
            cross = np.einsum("...i,...j->...ij", was, war) * invA[..., None, None]
            if "Lsr" in which:
                out["Lsr"] = self.k2pl * (w - cross)
            if "dLsr" in which:
                dcross = (np.einsum("...i,...j->...ij", dwas, war)
                          + np.einsum("...i,...j->...ij", was, dwar)) * invA[..., None, None] \
                    - cross * (dA * invA)[..., None, None]
                out["dLsr"] = self.k2pl * (dw - dcross)
        return out

    def bundle(self, cfg: EccentricityConfig, theta: float) -> InductanceBundle:
        """All matrices and derivatives at one rotor angle."""
        b = self.blocks(cfg, float(theta))
        return InductanceBundle(theta=float(theta), **b)

    def mutual_stator_rotor(self, cfg: EccentricityConfig, theta: float,
                            i: int, j: int) -> float:
        """Single stator-phase / rotor-loop mutual inductance entry."""
        if not 1 <= i <= 3:
            raise IndexError(f"stator phase index {i} out of range")
        if not 1 <= j <= self.n:
            raise IndexError(f"rotor loop index {j} out of range")
        return float(self.blocks(cfg, float(theta), which=("Lsr",))["Lsr"][i - 1, j - 1])

    def profile(self, cfg: EccentricityConfig, block: str, i: int, j: int,
                thetas, chunk: int = 256) -> np.ndarray:
        """One matrix entry evaluated over a rotor-angle grid."""
        thetas = np.asarray(thetas, dtype=float)
        vals = np.empty(thetas.shape)
        for lo in range(0, len(thetas), chunk):
            sl = slice(lo, lo + chunk)
            vals[sl] = self.blocks(cfg, thetas[sl], which=(block,))[block][..., i - 1, j - 1]
        return vals


def skew_correct(profile, skew_angle: float):
    """Three-point trapezoid average of a rotor-angle profile.

    Returns a new callable; skew_angle = 0 is the identity and constant
    profiles are fixed points.
    """
    if skew_angle < 0:
        raise ValueError("skew angle must be non-negative")
    if skew_angle == 0.0:
        return profile
    h = 0.5 * skew_angle

    def skewed(theta):
        theta = np.asarray(theta, dtype=float)
        return 0.25 * (profile(theta - h) + 2.0 * profile(theta) + profile(theta + h))

    return skewed


# -- quadrature oracle -------------------------------------------------------


def _gauss_nodes(breakpoints, panels: int, order: int):
    bounds = _merge_breaks(np.concatenate([np.linspace(0, 2 * np.pi, panels + 1),
                                           np.asarray(breakpoints, dtype=float)]),
                           2 * np.pi)
    xg, wg = np.polynomial.legendre.leggauss(order)
    lo = bounds[:-1]
    half = 0.5 * np.diff(bounds)
    x = (lo + half)[:, None] + half[:, None] * xg[None, :]
    w = half[:, None] * wg[None, :]
    return x.ravel(), w.ravel()


def quadrature_oracle(x_fn: TurnFunction, y_fn: TurnFunction, gs: GapState,
                      geometry: GapGeometry, stack_length: float,
                      panels: int = 20000, order: int = 5,
                      legacy_uniform_mean: bool = False) -> float:
    """Mutual inductance of two turn distributions by direct quadrature.

    Integrates the permeance-weighted winding-function product with composite
    Gauss-Legendre panels split at every breakpoint of both turn functions.
    With legacy_uniform_mean the winding function subtracts the plain mean
    (valid only for a uniform gap) — kept to demonstrate how that choice
    breaks reciprocity under eccentricity.
    """
    x, w = _gauss_nodes(np.concatenate([x_fn.breakpoints, y_fn.breakpoints]),
                        panels, order)
    P = gs.permeance_ratio(x)
    nx, ny = x_fn(x), y_fn(x)
    two_pi = 2 * np.pi
    p_mean = (P * w).sum() / two_pi
    pxy = (P * nx * ny * w).sum() / two_pi
    py = (P * ny * w).sum() / two_pi
    if legacy_uniform_mean:
        x_mean = (nx * w).sum() / two_pi
        mag = pxy - x_mean * py
    else:
        px = (P * nx * w).sum() / two_pi
        mag = pxy - px * py / p_mean
    return 2 * np.pi * stack_length * geometry.p0 * mag


def oracle_matrices(model: InductanceModel, cfg: EccentricityConfig, theta: float,
                    panels: int = 20000, order: int = 5,
                    include_leakage: bool = True):
    """Full (Ls, Lr, Lsr) by quadrature, independent of the closed forms.

    Leakage terms are definitional constants; they are added in the same
    pattern as the closed-form assembly so entries compare one-to-one.
    """
    layout = model.layout
    gs = gap_state(cfg, theta)
    stator = [stator_phase_turns(layout, i) for i in (1, 2, 3)]
    rotor = [rotor_loop_turns(layout, j, rotor_angle=theta)
             for j in range(1, layout.n_bars + 1)]
    bps = np.concatenate([f.breakpoints for f in stator + rotor])
    x, w = _gauss_nodes(bps, panels, order)
    P = gs.permeance_ratio(x)
    S = np.stack([f(x) for f in stator])
    R = np.stack([f(x) for f in rotor])
    two_pi = 2 * np.pi
    pw = P * w
    p_mean = pw.sum() / two_pi
    ps = (S * pw).sum(axis=1) / two_pi
    pr = (R * pw).sum(axis=1) / two_pi
    pss = np.einsum("iq,q,jq->ij", S, pw, S) / two_pi
    prr = np.einsum("iq,q,jq->ij", R, pw, R) / two_pi
    psr = np.einsum("iq,q,jq->ij", S, pw, R) / two_pi
    k = 2 * np.pi * model.stack_length * model.geometry.p0
    Ls = k * (pss - np.outer(ps, ps) / p_mean)
    Lr = k * (prr - np.outer(pr, pr) / p_mean)
    Lsr = k * (psr - np.outer(ps, pr) / p_mean)
    if include_leakage:
        Ls = Ls + model._leak_s
        Lr = Lr + model._leak_r
    return Ls, Lr, Lsr


def dump_profile_csv(path, thetas, values):
    """Write a theta grid profile as CSV (columns: theta_rad, value_H)."""
    thetas = np.asarray(thetas, dtype=float)
    values = np.asarray(values, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(PROFILE_CSV_HEADER + "\n")
        fh.write("theta_rad,value_H\n")
        for t, v in zip(thetas, values):
            fh.write(f"{t:.12g},{v:.12g}\n")
