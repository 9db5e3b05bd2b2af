"""Coupled electrical-mechanical transient model of the cage machine.

The state is [three stator phase currents, rotor loop currents, mechanical
speed, mechanical angle]. Voltage equations are solved as a dense linear
system L * di/dt = v - (R + omega * dL/dtheta) * i each step; torque is the
coenergy quadratic form through the angle derivatives of all inductance
blocks. Broken bars enter either through the rotor resistance matrix
(scaling) or by merging the loops around the broken bars (elimination).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import EccentricityConfig, GapGeometry, gap_state
from .inductance import InductanceModel
from .winding import WindingLayout

TIMESERIES_CSV_HEADER = "# cagesim timeseries v1: t,ia,ib,ic,omega,torque,theta"


class NumericalConditioningError(RuntimeError):
    """Inductance matrix became numerically singular during a solve."""


class StiffFailureError(RuntimeError):
    """Adaptive integration failed (step-size underflow or solver abort)."""


@dataclass(frozen=True)
class MotorParameters:
    """Electrical, magnetic, geometric and mechanical machine constants.

    Defaults are the studied 3-phase, 4-pole, 40-bar machine with its rated
    supply (380 V peak phase, 50 Hz) and 20 N m constant load.
    """

    n_bars: int = 40
    pole_pairs: int = 2
    turns: int = 56
    r_stator: float = 1.75          # ohm per phase
    r_bar: float = 31e-6            # ohm
    r_end: float = 2.2e-6           # ohm per end-ring segment
    l_stator_leak: float = 0.009    # H
    l_bar_leak: float = 95e-9       # H
    l_end_leak: float = 18e-9       # H
    bar_angle: float = math.pi / 86
    skew_angle: float = math.pi / 86
    rotor_radius: float = 0.082     # m
    stack_length: float = 0.11      # m
    gap_length: float = 0.0008      # m
    inertia: float = 0.05           # N m s^2
    load_torque: float = 20.0       # N m
    supply_voltage: float = 380.0   # V, peak phase value
    supply_frequency: float = 50.0  # Hz

    phases = 3

    def __post_init__(self):
        for name in ("r_stator", "r_bar", "r_end", "l_stator_leak", "l_bar_leak",
                     "l_end_leak", "inertia", "rotor_radius", "stack_length",
                     "gap_length", "supply_frequency"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.supply_voltage < 0:
            raise ValueError("supply_voltage must be non-negative")

    @property
    def omega_supply(self) -> float:
        return 2 * math.pi * self.supply_frequency

    def layout(self) -> WindingLayout:
        return WindingLayout(turns=self.turns, n_bars=self.n_bars,
                             bar_angle=self.bar_angle,
                             pole_pairs=self.pole_pairs,
                             skew_angle=self.skew_angle)

    def gap_geometry(self) -> GapGeometry:
        return GapGeometry.from_rotor(self.rotor_radius, self.gap_length)

    def inductance_model(self, mutual_skew: bool = True,
                         series_terms: int = 301) -> InductanceModel:
        return InductanceModel(self.layout(), self.gap_geometry(),
                               self.stack_length, lls=self.l_stator_leak,
                               lb=self.l_bar_leak, le=self.l_end_leak,
                               mutual_skew=mutual_skew,
                               series_terms=series_terms)


@dataclass(frozen=True)
class FaultSpec:
    """Fault condition: eccentricity plus an optional set of broken bars."""

    eccentricity: EccentricityConfig = field(default_factory=EccentricityConfig)
    broken_bars: tuple[int, ...] = ()
    bar_model: str = "scale"        # "scale" or "eliminate"
    broken_factor: float = 1000.0

    def __post_init__(self):
        object.__setattr__(self, "broken_bars", tuple(int(b) for b in self.broken_bars))
        if len(set(self.broken_bars)) != len(self.broken_bars):
            raise ValueError("broken bar indices must be distinct")
        if self.bar_model not in ("scale", "eliminate"):
            raise ValueError("bar_model must be 'scale' or 'eliminate'")
        if self.broken_factor <= 1.0:
            raise ValueError("broken_factor must exceed 1")

    def validate_against(self, params: MotorParameters):
        n = params.n_bars
        for b in self.broken_bars:
            if not 1 <= b <= n:
                raise ValueError(f"broken bar index {b} outside 1..{n}")
        if self.bar_model == "eliminate" and self.broken_bars:
            if len(self.broken_bars) > n - 3:
                raise ValueError("too many bars for loop elimination")
            if not _is_cyclically_contiguous(self.broken_bars, n):
                raise ValueError(
                    "loop elimination supports only a contiguous run of broken bars")


HEALTHY = FaultSpec()


def _is_cyclically_contiguous(bars, n) -> bool:
    if len(bars) <= 1:
        return True
    present = np.zeros(n, dtype=bool)
    present[np.asarray(bars) - 1] = True
    # contiguous iff the complement has exactly one run of False->True edges
    edges = int(np.sum(present & ~np.roll(present, 1)))
    return edges == 1


def resistance_matrices(params: MotorParameters, fault: FaultSpec = HEALTHY):
    """Stator and rotor mesh resistance matrices.

    The rotor matrix is cyclic tridiagonal: loop i carries both of its bars
    plus two end-ring segments on the diagonal and couples each neighbor
    through the shared bar. Broken bars (scale model) multiply the affected
    bar resistance, entering both adjacent diagonals and their coupling.
    """
    fault.validate_against(params)
    n = params.n_bars
    Rs = np.eye(3) * params.r_stator
    rb = np.full(n, params.r_bar)
    if fault.bar_model == "scale":
        for b in fault.broken_bars:
            rb[b - 1] = params.r_bar * fault.broken_factor
    idx = np.arange(n)
    nxt = (idx + 1) % n
    Rr = np.zeros((n, n))
    Rr[idx, idx] = rb[idx] + rb[nxt] + 2 * params.r_end
    Rr[idx, nxt] = -rb[nxt]
    Rr[nxt, idx] = -rb[nxt]
    return Rs, Rr


def loop_reduction_matrix(params: MotorParameters, broken_bars) -> np.ndarray:
    """Aggregation matrix merging the loops around a contiguous broken-bar run.

    An open bar forces the two mesh currents around it to coincide, so the
    loops spanning the run collapse into one super-loop whose turn function is
    the sum of the absorbed ones. Returns T of shape (n_kept, n); reduced
    matrices follow by congruence (T X T') or right-multiplication (Lsr T').
    """
    n = params.n_bars
    bars = tuple(sorted(broken_bars))
    if not bars:
        return np.eye(n)
    if not _is_cyclically_contiguous(bars, n):
        raise ValueError("loop elimination supports only a contiguous run of broken bars")
    group = np.arange(n)
    for b in bars:
        # bar b (1-based) is shared by loops b-2 and b-1 (0-based)
        a, c = (b - 2) % n, (b - 1) % n
        ga, gc = group[a], group[c]
        group[group == gc] = ga
    kept = np.unique(group)
    T = np.zeros((len(kept), n))
    for row, g in enumerate(kept):
        T[row, group == g] = 1.0
    return T


def reduced_matrices_loop_elimination(params: MotorParameters, broken_bars,
                                      theta: float = 0.0):
    """Healthy-machine (Rr, Lr, Lsr) after merging loops across broken bars.

    broken_bars may be an int count m (bars 2..m+1, merging the first m+1
    loops) or an explicit contiguous list of bar indices.
    """
    if isinstance(broken_bars, int):
        broken_bars = tuple(range(2, 2 + broken_bars))
    T = loop_reduction_matrix(params, broken_bars)
    _, Rr = resistance_matrices(params, HEALTHY)
    model = params.inductance_model(mutual_skew=False)
    b = model.blocks(EccentricityConfig(), float(theta), which=("Lr", "Lsr"))
    return T @ Rr @ T.T, T @ b["Lr"] @ T.T, b["Lsr"] @ T.T


class SimulationEngine:
    """Assembles and integrates the state equations for one machine + fault."""

    def __init__(self, params: MotorParameters, fault: FaultSpec = HEALTHY,
                 mutual_skew: bool = True, series_terms: int = 121):
        fault.validate_against(params)
        self.params = params
        self.fault = fault
        self.model = params.inductance_model(mutual_skew=mutual_skew,
                                             series_terms=series_terms)
        self.cfg = fault.eccentricity
        self.uniform = self.cfg.is_uniform

        self.Rs, Rr = resistance_matrices(params, fault)
        if fault.bar_model == "eliminate" and fault.broken_bars:
            self.T = loop_reduction_matrix(params, fault.broken_bars)
            self.Rr = self.T @ Rr @ self.T.T
        else:
            self.T = None
            self.Rr = Rr
        self.n_loops = self.Rr.shape[0]
        m = 3 + self.n_loops
        self.n_states = m + 2

        self._R = np.zeros((m, m))
        self._R[:3, :3] = self.Rs
        self._R[3:, 3:] = self.Rr
        self._L = np.zeros((m, m))
        self._dL = np.zeros((m, m))
        if self.uniform:
            blocks = self.model.blocks(self.cfg, 0.0, which=("Ls", "Lr"))
            Ls, Lr = blocks["Ls"], blocks["Lr"]
            if self.T is not None:
                Lr = self.T @ Lr @ self.T.T
            self._L[:3, :3] = Ls
            self._L[3:, 3:] = Lr

    # -- matrix assembly ----------------------------------------------------

    def inductance_matrices(self, theta: float):
        """Full (L, dL) at one rotor angle, loop reduction applied.

        Returns fresh arrays, so a shared engine may be queried from several
        threads; simulate() uses its own per-run buffers.
        """
        which = ("Lsr", "dLsr") if self.uniform else ("Ls", "Lr", "Lsr",
                                                      "dLs", "dLr", "dLsr")
        blocks = self.model.blocks(self.cfg, float(theta), which=which)
        Lsr, dLsr = blocks["Lsr"], blocks["dLsr"]
        if self.T is not None:
            Tt = self.T.T
            Lsr = Lsr @ Tt
            dLsr = dLsr @ Tt
        L, dL = self._L.copy(), self._dL.copy()
        L[:3, 3:] = Lsr
        L[3:, :3] = Lsr.T
        dL[:3, 3:] = dLsr
        dL[3:, :3] = dLsr.T
        if not self.uniform:
            Ls, Lr = blocks["Ls"], blocks["Lr"]
            dLs, dLr = blocks["dLs"], blocks["dLr"]
            if self.T is not None:
                Lr = self.T @ Lr @ self.T.T
                dLr = self.T @ dLr @ self.T.T
            L[:3, :3] = Ls
            L[3:, 3:] = Lr
            dL[:3, :3] = dLs
            dL[3:, 3:] = dLr
        return L, dL

    def supply_voltage(self, t):
        """Balanced sinusoidal phase voltages; phase i leads by (i-1)*2pi/3."""
        w = self.params.omega_supply
        v = self.params.supply_voltage
        t = np.asarray(t, dtype=float)
        shifts = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
        return v * np.cos(np.add.outer(w * t, shifts))

    def state_derivative(self, t: float, y: np.ndarray) -> np.ndarray:
        """Time derivative of [currents, speed, angle]."""
        m = 3 + self.n_loops
        i_all = y[:m]
        omega, theta = y[m], y[m + 1]
        L, dL = self.inductance_matrices(theta)
        emf = dL @ i_all
        rhs = -self._R @ i_all - omega * emf
        w = self.params.omega_supply
        vt = w * t
        v = self.params.supply_voltage
        rhs[0] += v * math.cos(vt)
        rhs[1] += v * math.cos(vt + 2 * np.pi / 3)
        rhs[2] += v * math.cos(vt + 4 * np.pi / 3)
        try:
            didt = np.linalg.solve(L, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericalConditioningError(
                f"singular inductance matrix at theta={theta:.6f}") from exc
        torque = 0.5 * float(i_all @ emf)
        dy = np.empty_like(y)
        dy[:m] = didt
        dy[m] = (torque - self.params.load_torque) / self.params.inertia
        dy[m + 1] = omega
        return dy

    def torque(self, theta: float, currents: np.ndarray) -> float:
        """Coenergy torque 0.5 * i' (dL/dtheta) i at one state."""
        _, dL = self.inductance_matrices(theta)
        return 0.5 * float(currents @ dL @ currents)

    def _make_fast_rhs(self):
        """Step function with hoisted constants and per-run work buffers.

        Algebraically identical to state_derivative (tested against it); owns
        its buffers so concurrent simulate() calls never share state.
        """
        model = self.model
        cfg = self.cfg
        params = self.params
        n = model.n
        N = model.N
        m = 3 + self.n_loops
        nl = self.n_loops
        k2pl = model.k2pl
        p0l = model.p0l
        inv2pi = 1.0 / (2 * np.pi)
        g = model.layout.bar_angle
        x0_pair = model._x0_used.value_and_derivative
        map_flat = model._map.ravel()
        oj3 = np.tile(model._oj, 3)
        ci = model._ci
        cij = model._cij
        oj_ab = model._oj + np.pi / n + g / 2
        oj_cr = model._oj + g / 2
        ar1, ar2 = model._ar
        br1, br2 = model._br
        cr1, cr2 = model._cr
        sk1, sk2 = model._sk_r if model.mutual_skew else (1.0, 1.0)
        cas, cbs = 6 * N / np.pi**2, 12 * N**2 / np.pi**2
        bs0, cs0, ccs = 16 * N**2 / 9, 2 * N**2 / 3, 6 * N**2 / np.pi**2
        ar0, br0, cr0 = 1.0 / n, 1.0 / n - g / (6 * np.pi), g / (12 * np.pi)
        mean_off = 2 * np.pi * N / n

        nt = len(model._m_odd)
        Vp = np.empty((nt, 4), dtype=complex)
        Vn = np.empty((nt, 4), dtype=complex)
        v0row = np.zeros(4, dtype=complex)
        for col, c in ((0, 1), (1, 2)):
            v0, vp, vn, dvp, dvn = model._series[c]
            Vp[:, col], Vn[:, col] = vp, vn
            Vp[:, col + 2], Vn[:, col + 2] = dvp, dvn
            v0row[col] = v0

        R_full = self._R.copy()
        L = np.zeros((m, m))
        dL = np.zeros((m, m))
        if self.uniform:
            L[:3, :3] = self._L[:3, :3]
            L[3:, 3:] = self._L[3:, 3:]
        di3 = np.arange(3)
        idx = np.arange(n)
        prev = (idx - 1) % n
        Tt = None if self.T is None else self.T.T
        Tm = self.T
        leak_r = model._leak_r
        leak_s = model._leak_s
        load = params.load_torque
        inertia = params.inertia
        wsup = params.omega_supply
        vamp = params.supply_voltage
        base = np.empty((3 * n, nt), dtype=complex)

        def rhs(t, y):
            i_all = y[:m]
            omega, theta = y[m], y[m + 1]
            if self.uniform:
                u = theta + map_flat
                x0v, dx0v = x0_pair(u)
                Lsr = (p0l * (x0v - mean_off)).reshape(3, n)
                dLsr = (p0l * dx0v).reshape(3, n)
                if Tt is not None:
                    Lsr = Lsr @ Tt
                    dLsr = dLsr @ Tt
                L[:3, 3:] = Lsr
                L[3:, :3] = Lsr.T
                dL[:3, 3:] = dLsr
                dL[3:, :3] = dLsr.T
            else:
                gs = gap_state(cfg, theta)
                A, B, C = gs.A, gs.B, gs.C
                dA, dB, dC = gs.dA, gs.dB, gs.dC
                al, dal = gs.alpha, gs.d_alpha
                invA = 1.0 / A

                arg = 2.0 * (al - ci)
                ca, sa = np.cos(arg), np.sin(arg)
                was = A * N + cas * C * ca
                dwas = dA * N + cas * (dC * ca - 2 * C * dal * sa)
                wbs = bs0 * A + cbs * C * ca
                dwbs = bs0 * dA + cbs * (dC * ca - 2 * C * dal * sa)
                argij = 2.0 * (al - cij)
                cj, sj = np.cos(argij), np.sin(argij)
                Ms = cs0 * A - ccs * C * cj
                dMs = cs0 * dA - ccs * (dC * cj - 2 * C * dal * sj)
                Ms[di3, di3] = wbs
                dMs[di3, di3] = dwbs
                cross_s = np.outer(was, was) * invA
                dcross_s = ((np.outer(dwas, was) + np.outer(was, dwas))
                            - cross_s * dA) * invA
                L[:3, :3] = k2pl * (Ms - cross_s) + leak_s
                dL[:3, :3] = k2pl * (dMs - dcross_s)

                ae = al - theta
                dae = dal - 1.0
                psi = ae - oj_ab
                c1, s1 = np.cos(psi), np.sin(psi)
                c2, s2 = np.cos(2 * psi), np.sin(2 * psi)
                war = A * ar0 + B * ar1 * c1 + C * ar2 * c2
                dwar = dA * ar0 + ar1 * (dB * c1 - B * dae * s1) \
                    + ar2 * (dC * c2 - 2 * C * dae * s2)
                wbr = A * br0 + B * br1 * c1 + C * br2 * c2
                dwbr = dA * br0 + br1 * (dB * c1 - B * dae * s1) \
                    + br2 * (dC * c2 - 2 * C * dae * s2)
                psic = ae - oj_cr
                cc1, sc1 = np.cos(psic), np.sin(psic)
                cc2, sc2 = np.cos(2 * psic), np.sin(2 * psic)
                wcr = A * cr0 + B * cr1 * cc1 + C * cr2 * cc2
                dwcr = dA * cr0 + cr1 * (dB * cc1 - B * dae * sc1) \
                    + cr2 * (dC * cc2 - 2 * C * dae * sc2)
                cross_r = np.outer(war, war) * invA
                dcross_r = ((np.outer(dwar, war) + np.outer(war, dwar))
                            - cross_r * dA) * invA
                Mr = -cross_r
                Mr[idx, idx] += wbr
                Mr[idx, prev] += wcr
                Mr[prev, idx] += wcr
                dMr = -dcross_r
                dMr[idx, idx] += dwbr
                dMr[idx, prev] += dwcr
                dMr[prev, idx] += dwcr
                Lr = k2pl * Mr + leak_r
                dLr = k2pl * dMr
                if Tm is not None:
                    Lr = Tm @ Lr @ Tt
                    dLr = Tm @ dLr @ Tt
                L[3:, 3:] = Lr
                dL[3:, 3:] = dLr

                u = theta + map_flat
                x0v, dx0v = x0_pair(u)
                f0 = x0v * inv2pi
                df0 = dx0v * inv2pi
                z = np.exp(2j * u)
                base[:, 0] = z
                base[:, 1:] = (z * z)[:, None]
                E = np.multiply.accumulate(base, axis=1)
                G = E @ Vp + np.conj(E) @ Vn + v0row
                F1, F2, dF1, dF2 = G[:, 0], G[:, 1], G[:, 2], G[:, 3]
                ph1 = np.exp(1j * (theta + oj3 - al))
                ph2 = ph1 * ph1
                omdal = 1.0 - dal
                p1f = ph1 * F1
                p2f = ph2 * F2
                w = A * f0 + B * p1f.real + C * p2f.real
                dw = (dA * f0 + A * df0 + dB * p1f.real + dC * p2f.real
                      + B * (ph1 * (1j * omdal * F1 + dF1)).real
                      + C * (ph2 * (2j * omdal * F2 + dF2)).real)
                # skew-scaled rotor averages feed the mutual cross term
                if sk1 != 1.0 or sk2 != 1.0:
                    war_k = A * ar0 + B * (sk1 * ar1) * c1 + C * (sk2 * ar2) * c2
                    dwar_k = dA * ar0 + (sk1 * ar1) * (dB * c1 - B * dae * s1) \
                        + (sk2 * ar2) * (dC * c2 - 2 * C * dae * s2)
                else:
                    war_k, dwar_k = war, dwar
                cross_m = np.outer(was, war_k) * invA
                dcross_m = ((np.outer(dwas, war_k) + np.outer(was, dwar_k))
                            - cross_m * dA) * invA
                Lsr = k2pl * (w.reshape(3, n) - cross_m)
                dLsr = k2pl * (dw.reshape(3, n) - dcross_m)
                if Tt is not None:
                    Lsr = Lsr @ Tt
                    dLsr = dLsr @ Tt
                L[:3, 3:] = Lsr
                L[3:, :3] = Lsr.T
                dL[:3, 3:] = dLsr
                dL[3:, :3] = dLsr.T

            emf = dL @ i_all
            rhs_v = -(R_full @ i_all) - omega * emf
            vt = wsup * t
            rhs_v[0] += vamp * math.cos(vt)
            rhs_v[1] += vamp * math.cos(vt + 2 * np.pi / 3)
            rhs_v[2] += vamp * math.cos(vt + 4 * np.pi / 3)
            try:
                didt = np.linalg.solve(L, rhs_v)
            except np.linalg.LinAlgError as exc:
                raise NumericalConditioningError(
                    f"singular inductance matrix at theta={theta:.6f}") from exc
            torque = 0.5 * float(i_all @ emf)
            dy = np.empty_like(y)
            dy[:m] = didt
            dy[m] = (torque - load) / inertia
            dy[m + 1] = omega
            return dy

        return rhs

    def simulate(self, t_end: float, rtol: float = 1e-6, atol: float = 1e-6,
                 resample_rate: float = 5120.0) -> "SimulationRecord":
        """Integrate from standstill with zero currents; resample uniformly."""
        if t_end <= 0:
            raise ValueError("t_end must be positive")
        t_eval = np.arange(0.0, t_end, 1.0 / resample_rate)
        sol = solve_ivp(self._make_fast_rhs(), (0.0, t_end),
                        np.zeros(self.n_states), method="RK45",
                        rtol=rtol, atol=atol, t_eval=t_eval)
        if not sol.success:
            raise StiffFailureError(f"integration aborted: {sol.message}")
        m = 3 + self.n_loops
        y = sol.y
        torque = self._torque_series(y[m + 1], y[:m])
        return SimulationRecord(
            t=sol.t, i_s=y[:3].T.copy(), i_r=y[3:m].T.copy(),
            omega=y[m].copy(), theta=y[m + 1].copy(), torque=torque,
            sample_rate=resample_rate, params=self.params, fault=self.fault,
            rtol=rtol, atol=atol)

    def _torque_series(self, thetas, currents, chunk: int = 128):
        nT = len(thetas)
        out = np.empty(nT)
        Tt = None if self.T is None else self.T.T
        for lo in range(0, nT, chunk):
            sl = slice(lo, min(lo + chunk, nT))
            th = thetas[sl]
            i_all = currents[:, sl]            # (m, c)
            i_s, i_r = i_all[:3], i_all[3:]
            which = ("dLsr",) if self.uniform else ("dLs", "dLr", "dLsr")
            blocks = self.model.blocks(self.cfg, th, which=which)
            dLsr = blocks["dLsr"]              # (c, 3, n)
            if Tt is not None:
                dLsr = dLsr @ Tt
            tq = np.einsum("ic,cij,jc->c", i_s, dLsr, i_r)
            if not self.uniform:
                dLs, dLr = blocks["dLs"], blocks["dLr"]
                if self.T is not None:
                    dLr = np.einsum("ka,cab,lb->ckl", self.T, dLr, self.T)
                tq = tq + 0.5 * np.einsum("ic,cij,jc->c", i_s, dLs, i_s)
                tq = tq + 0.5 * np.einsum("ic,cij,jc->c", i_r, dLr, i_r)
            out[sl] = tq
        return out


def simulate(params: MotorParameters, fault: FaultSpec = HEALTHY,
             t_end: float = 1.0, rtol: float = 1e-6, atol: float = 1e-6,
             resample_rate: float = 5120.0, mutual_skew: bool = True) -> "SimulationRecord":
    """One transient run from standstill under the given fault condition."""
    return SimulationEngine(params, fault, mutual_skew=mutual_skew).simulate(
        t_end, rtol=rtol, atol=atol, resample_rate=resample_rate)


@dataclass
class SimulationRecord:
    """Uniformly sampled transient run with derived steady-state metrics."""

    t: np.ndarray
    i_s: np.ndarray       # (T, 3)
    i_r: np.ndarray       # (T, n_loops)
    omega: np.ndarray
    theta: np.ndarray
    torque: np.ndarray
    sample_rate: float
    params: MotorParameters
    fault: FaultSpec
    rtol: float = 1e-6
    atol: float = 1e-6

    # -- steady-state extraction and metrics --------------------------------

    def steady_slice(self, fraction: float = 0.5,
                     speed_std_tol: float = 1e-3) -> slice:
        """Last `fraction` of the run, verified quasi-steady by speed ripple."""
        start = int(len(self.t) * (1.0 - fraction))
        sl = slice(start, len(self.t))
        w = self.omega[sl]
        mean = float(np.mean(w))
        if mean == 0.0 or np.std(w) / abs(mean) > speed_std_tol:
            raise ValueError(
                "run has not settled: speed ripple "
                f"{np.std(w) / max(abs(mean), 1e-12):.2e} over the window")
        return sl

    def measured_slip(self, sl: slice | None = None) -> float:
        sl = sl if sl is not None else self.steady_slice()
        w = float(np.mean(self.omega[sl]))
        return 1.0 - self.params.pole_pairs * w / self.params.omega_supply

    def settle_time(self, band: float = 0.02) -> float:
        """Time after which speed stays inside +-band of its final value."""
        final = float(np.mean(self.omega[int(0.9 * len(self.omega)):]))
        outside = np.abs(self.omega - final) > band * abs(final)
        if not outside.any():
            return 0.0
        return float(self.t[np.nonzero(outside)[0][-1]] + 1.0 / self.sample_rate)

    def first_overshoot_time(self) -> float:
        """Time of the first local speed maximum after the initial rise."""
        w = self.omega
        peak = float(np.max(w))
        rising = np.nonzero((w[1:-1] > w[2:]) & (w[1:-1] >= w[:-2])
                            & (w[1:-1] > 0.5 * peak))[0]
        if len(rising) == 0:
            return float(self.t[int(np.argmax(w))])
        return float(self.t[rising[0] + 1])

    def startup_peak_current(self, skip: float = 0.0) -> float:
        """Largest phase-current magnitude; `skip` seconds may be dropped to
        look past the first-cycle switching transient at the run-up envelope."""
        sel = self.t >= skip
        return float(np.abs(self.i_s[sel]).max())

    def phase_rms(self, phase: int = 0, sl: slice | None = None) -> float:
        sl = sl if sl is not None else self.steady_slice()
        return float(np.sqrt(np.mean(self.i_s[sl, phase] ** 2)))

    # -- serialization -------------------------------------------------------

    def to_csv(self, path):
        cols = np.column_stack([self.t, self.i_s, self.omega, self.torque,
                                self.theta])
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(TIMESERIES_CSV_HEADER + "\n")
            fh.write("t,ia,ib,ic,omega,torque,theta\n")
            for row in cols:
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")

    def to_npz(self, path):
        meta = {
            "sample_rate": self.sample_rate, "rtol": self.rtol, "atol": self.atol,
            "params": self.params.__dict__,
            "fault": {"eccentricity": self.fault.eccentricity.__dict__,
                      "broken_bars": list(self.fault.broken_bars),
                      "bar_model": self.fault.bar_model,
                      "broken_factor": self.fault.broken_factor},
        }
        np.savez_compressed(path, t=self.t, i_s=self.i_s, i_r=self.i_r,
                            omega=self.omega, theta=self.theta,
                            torque=self.torque,
                            meta=np.frombuffer(
                                json.dumps(meta, sort_keys=True).encode(),
                                dtype=np.uint8))

    @classmethod
    def from_npz(cls, path) -> "SimulationRecord":
        with np.load(path) as data:
            meta = json.loads(bytes(data["meta"]).decode())
            params = MotorParameters(**meta["params"])
            f = meta["fault"]
            fault = FaultSpec(eccentricity=EccentricityConfig(**f["eccentricity"]),
                              broken_bars=tuple(f["broken_bars"]),
                              bar_model=f["bar_model"],
                              broken_factor=f["broken_factor"])
            return cls(t=data["t"], i_s=data["i_s"], i_r=data["i_r"],
                       omega=data["omega"], theta=data["theta"],
                       torque=data["torque"], sample_rate=meta["sample_rate"],
                       params=params, fault=fault,
                       rtol=meta["rtol"], atol=meta["atol"])
