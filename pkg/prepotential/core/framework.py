"""
Verification framework - registers property suites and runs them in order.
"""

import time
from typing import Any, Dict, List, Optional

from loguru import logger

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from ..config.settings import Settings, get_settings
from ..suites.base import SuiteContext, SuiteResult, VerificationSuite
from ..suites.properties import default_suites


class VerificationReport(BaseModel):
    """Outcome of one verification run."""

    passed: bool
    results: List[SuiteResult] = Field(default_factory=list)
    first_failure: Optional[str] = None
    runtime: float = 0.0

    def failed_suites(self) -> List[str]:
        return [result.name for result in self.results if not result.passed]


class VerificationFramework:
    """
    Runs registered verification suites against the solvers.

    Suites run in registration order; ``initialize`` registers the default
    set unless ``register_defaults`` is false.
    """

    def __init__(
        self, settings: Optional[Settings] = None, register_defaults: bool = True
    ):
        self.settings = settings or get_settings()
        self.register_defaults = register_defaults
        self._initialized = False
        self.suites: Dict[str, VerificationSuite] = {}

    async def initialize(self) -> None:
        if self._initialized:
            logger.warning("Framework already initialized")
            return
        if self.register_defaults:
            for suite in default_suites():
                if suite.name not in self.suites:
                    self.register_suite(suite)
        self._initialized = True
        logger.info(f"verification framework ready with {len(self.suites)} suites")

    async def cleanup(self) -> None:
        self.suites.clear()
        self._initialized = False
        logger.debug("verification framework cleaned up")

    def register_suite(self, suite: VerificationSuite) -> None:
        """Register a suite; a suite of the same name is replaced."""
        self.suites[suite.name] = suite
        logger.debug(f"Registered suite: {suite.name}")

    def unregister_suite(self, suite_name: str) -> None:
        if suite_name in self.suites:
            del self.suites[suite_name]
            logger.debug(f"Unregistered suite: {suite_name}")

    def get_available_suites(self) -> List[str]:
        return list(self.suites.keys())

    def default_context(self, **overrides: Any) -> SuiteContext:
        """A context seeded from the settings; keyword arguments override."""
        values: Dict[str, Any] = {
            "seed": self.settings.random_seed,
            "draws": self.settings.equivalence_draws,
            "max_level": self.settings.equivalence_max_level,
        }
        values.update(
            {key: value for key, value in overrides.items() if value is not None}
        )
        return SuiteContext(**values)

    async def run(
        self,
        context: Optional[SuiteContext] = None,
        names: Optional[List[str]] = None,
    ) -> VerificationReport:
        """Run the selected suites (all by default) and collect a report."""
        if not self._initialized:
            await self.initialize()
        context = context or self.default_context()

        selected = names or self.get_available_suites()
        unknown = [name for name in selected if name not in self.suites]
        if unknown:
            raise ValueError(
                f"unknown suites: {', '.join(unknown)}; "
                f"available: {', '.join(self.suites)}"
            )

        started = time.perf_counter()
        results = []
        for name in self.get_available_suites():
            if name in selected:
                results.append(await self.suites[name].arun(context))

        failed = [result for result in results if not result.passed]
        first_failure = None
        if failed:
            detail = failed[0].first_failure
            name = failed[0].name
            first_failure = name if detail is None else f"{name}: {detail}"
        report = VerificationReport(
            passed=not failed,
            results=results,
            first_failure=first_failure,
            runtime=time.perf_counter() - started,
        )
        if report.passed:
            logger.success(f"all {len(results)} suites passed in {report.runtime:.1f}s")
        else:
            logger.error(f"verification failed: {first_failure}")
        return report

    async def health_check(self) -> Dict[str, Any]:
        return {
            "framework": "healthy" if self._initialized else "not_initialized",
            "suites": self.get_available_suites(),
            "suites_count": len(self.suites),
        }

    async def __aenter__(self):
        """Async context manager entry."""
        await self.initialize()
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        """Async context manager exit."""
        await self.cleanup()
