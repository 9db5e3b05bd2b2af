"""Stator-current spectra and fault-harmonic families.

The spectrum uses the raw FFT of a steady-state window with the 2|X|/N
amplitude normalization (a unit sinusoid on a bin reads 0 dB). Predicted
fault frequencies come from the slot/eccentricity harmonic lattice and the
broken-bar sideband formula, evaluated at the slip measured from each run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import SimulationRecord

SPECTRUM_CSV_HEADER = "# cagesim spectrum v1: f_hz,mag_db"

DB_FLOOR_MAG = 1e-12


@dataclass(frozen=True)
class FaultHarmonic:
    family: str
    frequency: float


@dataclass(frozen=True)
class LabeledPeak:
    family: str
    predicted_hz: float
    measured_hz: float
    mag_db: float
    present: bool

    def to_dict(self) -> dict:
        return {"family": self.family, "predicted_hz": self.predicted_hz,
                "measured_hz": self.measured_hz, "mag_db": self.mag_db,
                "present": self.present}


@dataclass
class SpectrumRecord:
    """One-sided amplitude spectrum in dB on a uniform frequency grid."""

    f: np.ndarray
    mag_db: np.ndarray
    resolution: float
    sample_rate: float
    labeled_peaks: list[LabeledPeak] = field(default_factory=list)

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(SPECTRUM_CSV_HEADER + "\n")
            fh.write("f_hz,mag_db\n")
            for fr, db in zip(self.f, self.mag_db):
                fh.write(f"{fr:.12g},{db:.12g}\n")

    def peaks_to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump([p.to_dict() for p in self.labeled_peaks], fh, indent=2,
                      sort_keys=True)
            fh.write("\n")


def fault_harmonics(f0: float, s: float, p: int, R: int, n_d: int = 1,
                    k_max: int = 1, eta_max: int = 1) -> list[FaultHarmonic]:
    """Predicted fault-related stator-current frequencies, tagged by family.

    Families: 'ecc0' low-frequency eccentricity pair around f0; 'PSH' the
    principal slot harmonics; 'ecc1' the eccentricity companions around the
    PSH; 'broken_bar' the (1 +- 2s) f0 sidebands. The generic slot/order
    lattice for k <= k_max, dynamic order up to n_d and odd eta <= eta_max is
    tagged 'general'. Frequencies are deduplicated and non-negative (finite
    even at s = 0, where the broken-bar pair degenerates onto f0).
    """
    if not 0 <= s < 1:
        raise ValueError("slip must lie in [0, 1)")
    rev = (1.0 - s) / p
    out: list[FaultHarmonic] = []
    seen: set[tuple[str, float]] = set()

    def add(family, freq):
        freq = abs(float(freq))
        key = (family, round(freq, 9))
        if key not in seen:
            seen.add(key)
            out.append(FaultHarmonic(family, freq))

    for sign in (-1.0, 1.0):
        add("ecc0", (1.0 + sign * rev) * f0)
        add("PSH", (rev * R + sign) * f0)
        add("broken_bar", (1.0 + sign * 2.0 * s) * f0)
    for s_nd in (-1.0, 1.0):
        for s_eta in (-1.0, 1.0):
            add("ecc1", ((R + s_nd) * rev + s_eta) * f0)
    named = {round(h.frequency, 9) for h in out}
    for k in range(0, k_max + 1):
        for nd in range(0, n_d + 1):
            for eta in range(1, eta_max + 1, 2):
                for s_nd in (-1.0, 1.0):
                    for s_eta in (-1.0, 1.0):
                        freq = abs(((k * R + s_nd * nd) * rev + s_eta * eta) * f0)
                        if round(freq, 9) not in named:
                            add("general", freq)
    return out


def broken_bar_sidebands(f0: float, s: float) -> tuple[float, float]:
    """The (1 - 2s) f0 and (1 + 2s) f0 cage-asymmetry sidebands."""
    return (1.0 - 2.0 * s) * f0, (1.0 + 2.0 * s) * f0


def compute_spectrum(signal, sample_rate: float, hann: bool = False,
                     min_cycles: float = 20.0, f0: float | None = None) -> SpectrumRecord:
    """Amplitude spectrum of a steady-state window.

    The window length must be a power of two and span at least `min_cycles`
    fundamental periods when f0 is given. Normalization is 2|FFT|/N with
    magnitudes clamped at 1e-12 before the dB conversion; the DC bin is kept
    in the grid but excluded from peak searches.
    """
    x = np.asarray(signal, dtype=float)
    n = len(x)
    if n < 2 or n & (n - 1):
        raise ValueError(f"window length {n} is not a power of two")
    if f0 is not None and n / sample_rate * f0 < min_cycles:
        raise ValueError(
            f"window spans {n / sample_rate * f0:.1f} cycles of {f0} Hz; "
            f"need at least {min_cycles}")
    if hann:
        x = x * np.hanning(n)
    X = np.fft.rfft(x)
    mag = 2.0 * np.abs(X) / n
    mag_db = 20.0 * np.log10(np.maximum(mag, DB_FLOOR_MAG))
    f = np.fft.rfftfreq(n, d=1.0 / sample_rate)
    return SpectrumRecord(f=f, mag_db=mag_db, resolution=sample_rate / n,
                          sample_rate=sample_rate)


def steady_state_window(record: SimulationRecord, fraction: float = 0.5,
                        speed_std_tol: float = 1e-3) -> np.ndarray:
    """Largest power-of-two slice of phase-1 current from the settled tail."""
    sl = record.steady_slice(fraction=fraction, speed_std_tol=speed_std_tol)
    x = record.i_s[sl, 0]
    n = 1 << (len(x).bit_length() - 1)
    return x[-n:]


def spectrum_of_record(record: SimulationRecord, hann: bool = False,
                       fraction: float = 0.5,
                       speed_std_tol: float = 1e-3) -> SpectrumRecord:
    window = steady_state_window(record, fraction=fraction,
                                 speed_std_tol=speed_std_tol)
    return compute_spectrum(window, record.sample_rate, hann=hann,
                            f0=record.params.supply_frequency)


def measure_family(spec: SpectrumRecord, predicted, tolerance_bins: int = 2,
                   family: str = "", min_prominence_db: float = 6.0,
                   floor_halfwidth_bins: int = 40) -> list[LabeledPeak]:
    """Locate predicted peaks by local-maximum search around each frequency.

    A peak is 'present' when a local maximum inside +-tolerance_bins rises at
    least min_prominence_db above the local floor (median dB of the
    surrounding neighborhood). Absent predictions report the floor level at
    the predicted bin.
    """
    db = spec.mag_db
    nbin = len(db)
    peaks = []
    preds = predicted if np.ndim(predicted) else [predicted]
    for pf in np.atleast_1d(np.asarray(preds, dtype=float)):
        k0 = int(round(pf / spec.resolution))
        lo = max(k0 - tolerance_bins, 1)          # skip DC
        hi = min(k0 + tolerance_bins + 1, nbin - 1)
        floor_lo = max(k0 - floor_halfwidth_bins, 1)
        floor_hi = min(k0 + floor_halfwidth_bins, nbin)
        floor = float(np.median(db[floor_lo:floor_hi]))
        best = None
        for k in range(lo, hi):
            if db[k] >= db[k - 1] and db[k] >= db[k + 1]:
                if best is None or db[k] > db[best]:
                    best = k
        if best is not None and db[best] >= floor + min_prominence_db:
            peaks.append(LabeledPeak(family, float(pf), float(spec.f[best]),
                                     float(db[best]), True))
        else:
            k0 = min(max(k0, 0), nbin - 1)
            peaks.append(LabeledPeak(family, float(pf), float(spec.f[k0]),
                                     floor, False))
    return peaks


def label_fault_peaks(spec: SpectrumRecord, f0: float, slip: float, p: int,
                      R: int, tolerance_bins: int = 2) -> list[LabeledPeak]:
    """Measure all four named harmonic families and attach them to the record."""
    peaks = []
    for h in fault_harmonics(f0, slip, p, R):
        if h.family == "general":
            continue
        peaks.extend(measure_family(spec, h.frequency, tolerance_bins,
                                    family=h.family))
    spec.labeled_peaks = peaks
    return peaks
