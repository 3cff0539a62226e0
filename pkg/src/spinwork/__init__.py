"""Work extraction from a spin coupled to a harmonic bath by pulse sequences.

The spin starts at its own temperature and the bath at another.  Fast
pulses then act on the spin alone.  The package gives closed-form work,
energy bookkeeping and efficiency for two-pulse and spin-echo sequences.
A brute-force simulator of small baths serves as an independent check.
"""
from .disorder import DisorderModel, averaged_two_pulse_work, ensemble_moments, t2_star
from .errors import (CutoffTooSmall, DegenerateTemperatures, DimensionTooLarge, DomainError,
                     InvalidInput, NotUnitary, ParseError, PoleError, QuadratureNotConverged,
                     RestrictionViolated, SpinWorkError, UnsupportedSpectrum)
from .kernels import (Discrete, KernelSet, Ohmic, chi_three, chi_two, decay_regimes, decoherence,
                      decoherence_rate, discretize_ohmic, g_infinity, noise_kernel, phase_kernel,
                      spin_bath_kernel)
from .pulses import (Pulse, PulseCoefficients, coefficients, compose, from_euler, identity,
                     parse_pulse, pi_pulse, rotation)
from .special import digamma, loggamma, trigamma
from .thermo import assert_restrictions, carnot, check_restrictions, efficiency
from .work import (EnsembleMoments, SystemConfig, WorkBreakdown, polarization, work_echo,
                   work_echo_finite_t, work_first_pulse, work_two_pulse)

__version__ = "0.1.0"

__all__ = [
    "DisorderModel", "averaged_two_pulse_work", "ensemble_moments", "t2_star",
    "CutoffTooSmall", "DegenerateTemperatures", "DimensionTooLarge", "DomainError",
    "InvalidInput", "NotUnitary", "ParseError", "PoleError", "QuadratureNotConverged",
    "RestrictionViolated", "SpinWorkError", "UnsupportedSpectrum",
    "Discrete", "KernelSet", "Ohmic", "chi_three", "chi_two", "decay_regimes", "decoherence",
    "decoherence_rate", "discretize_ohmic", "g_infinity", "noise_kernel", "phase_kernel",
    "spin_bath_kernel",
    "Pulse", "PulseCoefficients", "coefficients", "compose", "from_euler", "identity",
    "parse_pulse", "pi_pulse", "rotation",
    "digamma", "loggamma", "trigamma",
    "assert_restrictions", "carnot", "check_restrictions", "efficiency",
    "EnsembleMoments", "SystemConfig", "WorkBreakdown", "polarization", "work_echo",
    "work_echo_finite_t", "work_first_pulse", "work_two_pulse",
]
