from .base import SuiteContext, SuiteRecorder, SuiteResult, VerificationSuite
from .properties import (
    BaeEquivalenceSuite,
    NodeCountSuite,
    OracleSuite,
    PoleCancellationSuite,
    SchrodingerResidualSuite,
    SumRuleSuite,
    SymmetrySuite,
    default_suites,
)

__all__ = [
    "SuiteContext",
    "SuiteRecorder",
    "SuiteResult",
    "VerificationSuite",
    "BaeEquivalenceSuite",
    "NodeCountSuite",
    "OracleSuite",
    "PoleCancellationSuite",
    "SchrodingerResidualSuite",
    "SumRuleSuite",
    "SymmetrySuite",
    "default_suites",
]
