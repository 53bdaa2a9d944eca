"""
Base class for verification suites.
"""

import time
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from loguru import logger

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from ..config.model_config import DEFAULT_CASES, ModelCase
from ..core.exceptions import PrepotentialError
from ..core.models import ModelKind


class SuiteContext(BaseModel):
    """Inputs shared by all suites of one verification run."""

    cases: List[ModelCase] = Field(default_factory=lambda: list(DEFAULT_CASES.values()))
    seed: int = 20080930
    draws: int = Field(default=20, ge=1)
    max_level: int = Field(default=10, ge=1)
    perturb_roots: float = Field(default=0.0, ge=0.0)
    models: Optional[List[ModelKind]] = None

    def selected_kinds(self) -> List[ModelKind]:
        return list(self.models) if self.models else list(ModelKind)

    def selected_cases(self) -> List[ModelCase]:
        kinds = self.selected_kinds()
        return [case for case in self.cases if case.kind in kinds]


class SuiteResult(BaseModel):
    """Outcome of one suite."""

    name: str
    passed: bool
    checks: int = 0
    failures: List[str] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    runtime: float = 0.0

    @property
    def first_failure(self) -> Optional[str]:
        return self.failures[0] if self.failures else None


class SuiteRecorder:
    """Collects check outcomes while a suite runs."""

    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: List[str] = []
        self.details: Dict[str, Any] = {}

    def check(self, condition: bool, message: str) -> bool:
        self.checks += 1
        if not condition:
            self.failures.append(message)
            logger.debug(f"[{self.name}] failed: {message}")
        return bool(condition)

    def fail(self, message: str) -> None:
        self.check(False, message)

    def result(self) -> SuiteResult:
        return SuiteResult(
            name=self.name,
            passed=not self.failures,
            checks=self.checks,
            failures=self.failures,
            details=self.details,
        )


class VerificationSuite(BaseModel, ABC):
    """Base class for property suites run by the verification framework."""

    name: str = ""
    description: str = ""

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if not self.name:
            raise ValueError("Suite name must be defined")
        if not self.description:
            raise ValueError("Suite description must be defined")

    @abstractmethod
    def _run(self, context: SuiteContext) -> SuiteResult:
        """Execute the suite synchronously."""

    async def _arun(self, context: SuiteContext) -> SuiteResult:
        """Execute the suite asynchronously."""
        # Default implementation calls sync version
        return self._run(context)

    def _finish(self, result: SuiteResult, started: float) -> SuiteResult:
        result = result.copy(update={"runtime": time.perf_counter() - started})
        if result.passed:
            logger.info(
                f"suite {self.name}: {result.checks} checks passed "
                f"in {result.runtime:.2f}s"
            )
        else:
            logger.warning(
                f"suite {self.name}: "
                f"{len(result.failures)} of {result.checks} checks failed"
            )
        return result

    def _failed(self, exc: PrepotentialError, started: float) -> SuiteResult:
        logger.error(f"suite {self.name} aborted: {exc}")
        result = SuiteResult(
            name=self.name,
            passed=False,
            checks=1,
            failures=[f"{type(exc).__name__}: {exc}"],
        )
        return self._finish(result, started)

    def run(self, context: Optional[SuiteContext] = None) -> SuiteResult:
        """Run the suite; solver failures become a failed result."""
        context = context or SuiteContext()
        started = time.perf_counter()
        logger.info(f"running suite {self.name}")
        try:
            return self._finish(self._run(context), started)
        except PrepotentialError as exc:
            return self._failed(exc, started)

    async def arun(self, context: Optional[SuiteContext] = None) -> SuiteResult:
        context = context or SuiteContext()
        started = time.perf_counter()
        logger.info(f"running suite {self.name}")
        try:
            return self._finish(await self._arun(context), started)
        except PrepotentialError as exc:
            return self._failed(exc, started)
