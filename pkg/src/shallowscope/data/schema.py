"""Result envelope shared by every command."""

import json
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from shallowscope import __version__


def _to_python_type(value: Any) -> Any:
    """Convert numpy and domain values to JSON-native types."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer, np.floating)):
        return value.item()
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return _to_python_type(value.tolist())
    if isinstance(value, dict):
        return {str(k): _to_python_type(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_python_type(v) for v in value]
    if hasattr(value, "to_dict"):
        return _to_python_type(value.to_dict())
    return value


@dataclass
class ResultEnvelope:
    """Provenance wrapper around a command payload.

    ``payload`` holds only deterministic results, so two runs with the same
    config serialize it to identical bytes. Wall-clock data lives in
    ``timing``.
    """

    command: str
    config: Dict[str, Any]
    seed: int
    payload: Dict[str, Any]
    version: str = __version__
    timing: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": _to_python_type(self.config),
            "seed": int(self.seed),
            "payload": _to_python_type(self.payload),
            "version": self.version,
            "timing": _to_python_type(self.timing),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def payload_json(self) -> str:
        """Canonical payload bytes used for reproducibility checks."""
        return json.dumps(_to_python_type(self.payload), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResultEnvelope":
        return cls(
            command=data["command"],
            config=data.get("config", {}),
            seed=data["seed"],
            payload=data.get("payload", {}),
            version=data.get("version", __version__),
            timing=data.get("timing", {}),
        )
