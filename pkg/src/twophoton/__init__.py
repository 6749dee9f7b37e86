"""Stationary photon statistics under competing one- and two-photon processes."""

from .distribution import PhotonDistribution
from .errors import (ConvergenceError, DegenerateFamilyError, DomainError, NegativeRateError,
                     NonUniqueSteadyStateError, UnsupportedStructureError)
from .gf import (AnalyticSolution, GfClosedForm, No2aForm, PaeosParams, closed_form,
                 negbin_limit, no_two_photon_absorption, paeos_limit, paeos_mandel_q,
                 paeos_mandel_q_weak, paeos_probabilities, photon_probabilities,
                 stationary_distribution, sub_poisson_threshold)
from .oracle import SteadyReport, choose_truncation, evolve_to_steady, steady_state
from .rates import (DimensionlessParams, GeneratorMatrix, RawRates, SaturatedEmission,
                    assemble_generator)
from .wigner import purity_paeos, wigner_mixture_radial, wigner_paeos_radial

__version__ = "0.1.0"
