"""Dynamic transitions of the Brusselator reaction-diffusion system.

Linear stability and critical numbers, classification of the first
transition (steady pitchfork, mixed or Hopf) with its cubic coefficient,
a spectral Galerkin simulator and independent numerical oracles.
"""

from .analysis import AnalysisReport, analyze
from .criticality import CriticalLengths, CriticalNumbers, Regime, critical_lengths, regime
from .errors import (BlowUpError, BrusselatorError, ContaminationError, DegenerateError, NoCriticalScale,
                     NotCyclic, NotSteady, ResonanceError, ValidationError)
from .hopf_transition import classify_hopf, periodic_expansion
from .model import BC, BrusselatorParams, DomainSpec
from .simulate import InitialCondition, SimConfig, detect_cycle, detect_steady, integrate
from .steady_transition import classify_steady, psi_solve

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "BC", "BlowUpError", "BrusselatorError", "BrusselatorParams", "ContaminationError",
    "CriticalLengths", "CriticalNumbers", "DegenerateError", "DomainSpec", "InitialCondition", "NoCriticalScale",
    "NotCyclic", "NotSteady", "Regime", "ResonanceError", "SimConfig", "ValidationError", "analyze",
    "classify_hopf", "classify_steady", "critical_lengths", "detect_cycle", "detect_steady", "integrate",
    "periodic_expansion", "psi_solve", "regime",
]
