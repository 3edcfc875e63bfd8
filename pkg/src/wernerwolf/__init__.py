"""Werner-Wolf entanglement witnesses for n qubits.

Walsh spectra of facet functions, closed-form GHZ-block eigenvalues,
norm maximization over measurement angles, a dense-matrix oracle and
Monte Carlo checks of how large a typical witness norm is.
"""
from .boolfn import (
    SignFunction,
    SymmetryElement,
    WalshSpectrum,
    apply_symmetry,
    inverse_walsh,
    is_trivial_facet,
    mermin_klyshko_f,
    orbit,
    random_f,
    walsh_beta,
)
from .errors import (
    BoundViolated,
    ConstructionInvalid,
    DidNotConverge,
    NotASignFunction,
    NumericalFailure,
    TooLarge,
)
from .spectrum import (
    AngleConfig,
    OptimizeReport,
    SpectrumResult,
    bell_polynomial,
    eigenvalue,
    full_spectrum,
    g_vector,
    maximize_norm,
)

__version__ = "0.1.0"
