"""Desk-scale simulation and learning of shallow-circuit quantum states."""

__version__ = "0.1.0"
