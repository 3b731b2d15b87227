"""The eight competition marker-to-behavior pairings."""

from __future__ import annotations

from typing import Optional

START_RECORDING = "StartRecording"
STOP_RECORDING = "StopRecording"
ASCEND_HIGH = "AscendHigh"
DESCEND_LOW = "DescendLow"
SPIN_LEFT = "Spin360Left"
SPIN_RIGHT = "Spin360Right"
PICK_VICTIM = "PickVictim"
LAND_GOAL = "LandGoal"

BEHAVIORS = (
    START_RECORDING, STOP_RECORDING, ASCEND_HIGH, DESCEND_LOW,
    SPIN_LEFT, SPIN_RIGHT, PICK_VICTIM, LAND_GOAL,
)

_TABLE = {
    ("rectangle", "red"): START_RECORDING,
    ("rectangle", "blue"): STOP_RECORDING,
    ("circle", "red"): ASCEND_HIGH,
    ("circle", "blue"): DESCEND_LOW,
    ("triangle", "red"): SPIN_LEFT,
    ("triangle", "blue"): SPIN_RIGHT,
    ("circle", "green"): PICK_VICTIM,
    ("circle", "yellow"): LAND_GOAL,
}


def marker_semantics(shape: str, color: str) -> Optional[str]:
    """Behavior for a (shape, color) pair; None for any other combination."""
    return _TABLE.get((shape.lower(), color.lower()))
