from .exceptions import PrepotentialError
from .models import ModelKind, ModelParams, RootSet

__all__ = ["PrepotentialError", "ModelKind", "ModelParams", "RootSet"]
