from .control import LineLost, follow_line_control
from .controller import MissionController, MissionState
from .detector import MarkerSighting, detect_markers
from .link import DirectLink, UdpLink
from .semantics import BEHAVIORS, marker_semantics
from .waypoints import CommandRejected, WaypointRunner, load_mission_script
