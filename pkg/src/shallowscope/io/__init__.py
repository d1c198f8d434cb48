"""File formats for shots, states, circuits, Hamiltonians and estimates."""

from shallowscope.io.shots import ShotFileParser, ShotFileWriter

__all__ = ["ShotFileParser", "ShotFileWriter"]
