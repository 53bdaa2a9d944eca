"""
prepotential - spectra, Bethe ansatz roots and wavefunctions of the
exactly solvable Coulomb, Eckart and Rosen-Morse potentials.

This package provides:
- Closed-form spectra and potentials of the four models
- A Newton solver for the Bethe ansatz equations of the polynomial roots
- Laguerre/Jacobi companion-matrix roots as an independent check
- Wavefunction sampling, normalization and node counting
- A finite-difference eigensolver used as a spectrum oracle
"""

__version__ = "0.1.0"

from .core.framework import VerificationFramework, VerificationReport
from .core.models import ModelKind, ModelParams, RootSet
from .suites.base import SuiteContext, SuiteResult, VerificationSuite

__all__ = [
    "ModelKind",
    "ModelParams",
    "RootSet",
    "SuiteContext",
    "SuiteResult",
    "VerificationFramework",
    "VerificationReport",
    "VerificationSuite",
]
