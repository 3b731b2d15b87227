"""Mission events: the audited stream consumed by the scoring engine.

JSON-lines on disk, one event per line, keys (t, kind, payload, source).
Sources: "simulator-truth" for facts observed from authoritative state,
"controller-claim" for what the autonomous client believes it did.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

SIM_TRUTH = "simulator-truth"
CONTROLLER = "controller-claim"

TAKEOFF = "TakeOff"
LANDED = "Landed"
LINE_LEAVE = "LineLeave"
LINE_REGAIN = "LineRegain"
BEHAVIOR_COMPLETED = "BehaviorCompleted"
RECORDING_STARTED = "RecordingStarted"
RECORDING_STOPPED = "RecordingStopped"
VICTIM_PICKUP = "VictimPickup"
RING_TOUCH = "RingTouch"
RING_PASS = "RingPass"
PHASE_COMPLETE = "PhaseComplete"
COLLISION = "Collision"
FALL = "Fall"
COMMAND_REJECTED = "CommandRejected"
ABORT = "Abort"

KINDS = (
    TAKEOFF, LANDED, LINE_LEAVE, LINE_REGAIN, BEHAVIOR_COMPLETED,
    RECORDING_STARTED, RECORDING_STOPPED, VICTIM_PICKUP, RING_TOUCH,
    RING_PASS, PHASE_COMPLETE, COLLISION, FALL, COMMAND_REJECTED, ABORT,
)


class EventFormatError(ValueError):
    pass


@dataclass(frozen=True)
class MissionEvent:
    t: float
    kind: str
    payload: dict = field(default_factory=dict)
    source: str = SIM_TRUTH

    def to_json(self) -> str:
        return json.dumps(
            {"t": round(self.t, 3), "kind": self.kind,
             "payload": self.payload, "source": self.source},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "MissionEvent":
        try:
            doc = json.loads(line)
            return cls(float(doc["t"]), str(doc["kind"]),
                       dict(doc.get("payload", {})), str(doc["source"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise EventFormatError(f"bad event line {line!r}: {e}") from None


def write_events(path, events) -> None:
    with open(path, "w") as f:
        for ev in events:
            f.write(ev.to_json())
            f.write("\n")


def read_events(path) -> list:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            out.append(MissionEvent.from_json(line))
    return out
