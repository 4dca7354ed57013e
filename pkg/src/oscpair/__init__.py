"""Quantum dynamics of two coupled harmonic oscillators.

Oscillator #1 starts in its ground state and oscillator #2 in a coherent
state displaced by ``x0``; everything here describes how the spread and
mean of oscillator #1 evolve once the coupling is switched on.
"""

from .core import (
    OBSERVABLE_COLUMNS,
    Gaussian1D,
    NormalModes,
    ObservablePoint,
    OscillatorPair,
    ParameterError,
    derive_normal_modes,
    mode_matrix,
)
from .general import (
    GeneralState,
    IdentityCheckError,
    XiBounds,
    build_matrices,
    general_observables,
    general_reduced_distribution,
    general_wavefunction,
    identity_residuals,
    matrix_observables,
    xi,
    xi_bounds,
)
from .oracle import oracle_observables, quadrature_normalize
from .resonance import (
    ResonanceState,
    resonance_bounds,
    resonance_observables,
    resonance_params,
    resonance_product,
)
from .symmetric import (
    SymmetricState,
    ground_state_reduced,
    symmetric_bounds,
    symmetric_observables,
    symmetric_reduced_distribution,
    symmetric_wavefunction,
    thermal_reduced,
    uncertainty_product_forms,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
