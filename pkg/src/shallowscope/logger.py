"""ExperimentLogger for writing result envelopes to TensorBoard event files."""

import glob as glob_module
import json
import logging
import os
import time
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

from tensorboard.compat.proto.event_pb2 import Event as TBEvent
from tensorboard.compat.proto.summary_pb2 import Summary
from tensorboard.summary.writer.event_file_writer import EventFileWriter

from shallowscope.data.schema import ResultEnvelope

logger = logging.getLogger(__name__)

PLUGIN_NAME = "shallowscope"


def scalar_fields(payload: Dict, prefix: str = "") -> Iterator[Tuple[str, float]]:
    """Numeric leaves of ``payload`` as ``("a/b", value)`` pairs; booleans are skipped."""
    for key in sorted(payload):
        value = payload[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from scalar_fields(value, prefix=f"{name}/")
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            yield name, float(value)


class ExperimentLogger:
    """Write every :class:`ResultEnvelope` of a session to one event file.

    Example:
        >>> with ExperimentLogger(log_dir="runs/ghz8") as tb:
        >>>     tb.log_envelope(envelope)
    """

    def __init__(self, log_dir: Union[str, Path]):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.writer = EventFileWriter(str(self.log_dir))
        self.step = 0
        self._closed = False

    def log_envelope(self, envelope: ResultEnvelope) -> None:
        """Store the envelope JSON under ``shallowscope/<command>/envelope`` plus payload scalars."""
        if self._closed:
            raise RuntimeError("ExperimentLogger is closed")

        data = envelope.to_dict()
        summary = Summary()
        value = summary.value.add()
        value.tag = f"{PLUGIN_NAME}/{envelope.command}/envelope"
        plugin_data = value.metadata.plugin_data
        plugin_data.plugin_name = PLUGIN_NAME
        plugin_data.content = json.dumps(data, sort_keys=True).encode("utf-8")

        for name, number in scalar_fields(data["payload"]):
            scalar = summary.value.add()
            scalar.tag = f"{PLUGIN_NAME}/{envelope.command}/{name}"
            scalar.simple_value = number

        event = TBEvent(wall_time=time.time(), step=self.step, summary=summary)
        self.writer.add_event(event)
        self.writer.flush()
        logger.debug("logged %s envelope at step %d to %s", envelope.command, self.step, self.log_dir)
        self.step += 1

    def flush(self) -> None:
        self.writer.flush()

    def close(self) -> None:
        if not self._closed:
            self.writer.flush()
            self.writer.close()
            self._closed = True

    def __enter__(self) -> "ExperimentLogger":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def load_envelopes(log_dir: Union[str, Path]) -> List[ResultEnvelope]:
    """Read back every envelope written under ``log_dir``, in step order per file."""
    from tensorboard.backend.event_processing.event_file_loader import EventFileLoader

    envelopes = []
    for event_file in sorted(glob_module.glob(os.path.join(str(log_dir), "events.out.tfevents.*"))):
        loader = EventFileLoader(event_file)
        for event in loader.Load():
            if not event.HasField("summary"):
                continue
            for value in event.summary.value:
                if value.metadata.plugin_data.plugin_name != PLUGIN_NAME:
                    continue
                if not value.tag.endswith("/envelope"):
                    continue
                content = value.metadata.plugin_data.content.decode("utf-8")
                envelopes.append(ResultEnvelope.from_dict(json.loads(content)))
    return envelopes
