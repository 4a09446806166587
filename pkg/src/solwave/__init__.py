"""Persistence of solitary waves of the delayed regularized long-wave equation
under Kuramoto-Sivashinsky (KS) and Marangoni (ME) perturbations."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    EquilibriumKind,
    EquilibriumSet,
    HomoclinicOrbit,
    ModelParams,
    classify_equilibrium,
    equilibria,
    first_integral,
    orbit_phi,
    orbit_y,
    solitary_wave,
)
from .errors import *  # noqa: E402,F401,F403
from .melnikov import MelnikovEval, RootResult, find_c_star, zero_existence  # noqa: E402
from .slowfast import PerturbationKind  # noqa: E402
