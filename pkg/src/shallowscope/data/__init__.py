"""Result envelope schema."""

from shallowscope.data.schema import ResultEnvelope

__all__ = ["ResultEnvelope"]
