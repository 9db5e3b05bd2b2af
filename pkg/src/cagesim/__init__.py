"""Transient simulation and current-signature analysis of cage induction motors."""

from .geometry import (EccentricityConfig, GapGeometry, GapState,
                       RotorContactError, composite_eccentricity, gap_length,
                       gap_state, permeance_coefficients)
from .winding import (FourierSeriesSet, WindingLayout, basic_function_value,
                      fourier_set, generalized_winding_function,
                      rotor_turn_integrals, shifted)
from .inductance import (InductanceBundle, InductanceModel, oracle_matrices,
                         quadrature_oracle, skew_correct)
from .dynamics import (FaultSpec, MotorParameters, SimulationEngine,
                       SimulationRecord, reduced_matrices_loop_elimination,
                       resistance_matrices, simulate)
from .spectrum import (SpectrumRecord, broken_bar_sidebands, compute_spectrum,
                       fault_harmonics, label_fault_peaks, measure_family,
                       spectrum_of_record)
from .config import RunConfig, load_config

__version__ = "0.1.0"
