"""Named tuning constants. Tests pin these defaults; change with care."""

from __future__ import annotations

from dataclasses import dataclass

# --- simulation timing ---------------------------------------------------
DT = 0.02                       # s, fixed physics step
VIDEO_FPS = 10
STEPS_PER_FRAME = int(round(1.0 / (VIDEO_FPS * DT)))   # 5

# --- flight kinematics ---------------------------------------------------
HOVER_ALTITUDE_M = 0.8          # altitude reached by "takeoff"
TAKEOFF_SPEED_MPS = 0.5
LAND_SPEED_MPS = 0.5
ROTATION_RATE_DPS = 90.0        # cw/ccw command rate
FLIP_DURATION_S = 0.8
FLIP_DISPLACEMENT_M = 0.2       # canned flip drifts this far, <= 0.30
RC_HORIZ_MPS = 1.0              # channel 100 -> 1 m/s
RC_VERT_MPS = 0.8               # channel 100 -> 0.8 m/s
RC_YAW_DPS = 100.0              # channel 100 -> 100 deg/s
VELOCITY_TAU_S = 0.15           # first-order velocity response
MIN_FLIGHT_CLEARANCE_M = 0.03   # rc cannot push a flying drone below this
DEFAULT_SPEED_CMS = 50          # speed_setting after boot

# --- battery -------------------------------------------------------------
BATTERY_SECONDS_PER_PCT = 7.8   # ~13 min endurance

# --- airframe / environment ----------------------------------------------
DRONE_RADIUS_M = 0.10           # collision bounding sphere
CEILING_M = 2.5                 # virtual ceiling
TOF_FLOOR_CM = 30               # tof sensor saturates at this minimum
RING_TOUCH_CLEARANCE_M = 0.05   # pass closer than this to the tube = touch

# --- visual positioning system --------------------------------------------
VPS_PATCH_FOOTPRINT_M = 0.5     # ground square the VPS looks at
VPS_PATCH_PX = 24               # sampling resolution of that square
VPS_VARIANCE_THRESHOLD = 50.0   # intensity variance; >= threshold -> locked
VPS_SIGMA_UNIFORM_M = 0.012     # per-step drift sigma when unlocked
VPS_SIGMA_LOCKED_M = 0.00025    # per-step drift sigma when locked

# --- synthetic camera ----------------------------------------------------
CAMERA_HFOV_DEG = 60.0
CAMERA_WIDTH = 320
CAMERA_HEIGHT = 240
OUT_OF_FIELD_COLOR = (128, 128, 128)

# --- vision pipeline -----------------------------------------------------
# hue degrees [lo, hi] (wrapping when lo > hi), s and v minima
HSV_RANGES = {
    "red": (340.0, 20.0, 0.4, 1.0, 0.3, 1.0),
    "blue": (200.0, 260.0, 0.4, 1.0, 0.3, 1.0),
    "green": (90.0, 150.0, 0.4, 1.0, 0.3, 1.0),
    "yellow": (40.0, 70.0, 0.4, 1.0, 0.3, 1.0),
}
BLACK_V_MAX = 0.25              # value ceiling for the line threshold
MIN_REGION_AREA = 80            # px; smaller regions classify Unknown
CIRCULARITY_MIN = 0.85
RDP_EPSILON_FRACTION = 0.03     # epsilon = fraction * contour perimeter
RECT_ANGLE_LO = 70.0
RECT_ANGLE_HI = 110.0
LINE_BAND_MIN_PX = 20           # per-band pixel floor for "line visible"

# --- mission controller ---------------------------------------------------
CRUISE_ALT_M = 1.2              # following altitude (DescendLow must differ)
HIGH_ALT_M = 2.1                # AscendHigh target (>= 2 m rule)
LOW_ALT_M = 0.7                 # DescendLow target (< 1 m rule)
PICKUP_ALT_M = 0.5
PICKUP_HOVER_S = 2.0
VICTIM_CENTER_TOL_M = 0.15
TRIGGER_RADIUS_M = 0.40         # marker fires within this ground distance
DEDUPE_CELL_M = 0.30            # markers never re-trigger within this
BEHAVIOR_TRAVEL_M = 1.15        # commanded travel for altitude legs (>1 m true)
SEARCH_YAW_RATE = 20            # rc yaw channel while line lost
SEARCH_MAX_DEG = 360.0
LOST_TICKS_BEFORE_SEARCH = 8    # consecutive blind ticks before spiraling
ABORT_BATTERY_PCT = 10


@dataclass
class ControlGains:
    """Proportional line-following law; overridable via a gains JSON file."""

    k_heading: float = 1.2      # yaw channel per degree of heading error
    k_lateral: float = 0.8      # lr channel per unit offset x100
    cruise_fb: int = 25
    k_alt: float = 150.0        # ud channel per metre of altitude error
    yaw_limit: int = 60
    lr_limit: int = 40
    ud_limit: int = 50


# --- referee / scoring -----------------------------------------------------
LINE_LEAVE_TOL_M = 0.30         # ground distance from line that counts as off
COVERAGE_BIN_M = 0.05
COVERAGE_DIST_TOL_M = 0.15
HEADING_ALIGN_TOL_DEG = 30.0
ALIGNED_MIN_FRACTION = 0.8      # of covered bins, for the following tiers
COVERAGE_TIERS = ((0.95, 25), (0.75, 20), (0.50, 15))
ASCEND_ALT_M = 2.0              # referee threshold for AscendHigh
DESCEND_ALT_M = 1.0             # referee threshold for DescendLow
BEHAVIOR_MIN_TRAVEL_M = 1.0
SPIN_WINDOW_S = 6.0
SPIN_MIN_DEG = 350.0
VICTIM_PICKUP_RADIUS_M = 0.20
VICTIM_PICKUP_ALT_M = 0.6
VICTIM_PICKUP_HOLD_S = 1.5
LANDING_TIER_10_CM = 10.0
LANDING_TIER_5_CM = 20.0
RING_TOUCH_PENALTY = -2
LINE_LEAVE_PENALTY = -5

# --- network defaults ------------------------------------------------------
COMMAND_PORT = 8889
VIDEO_PORT = 11111
PORTS_ENV_VAR = "TELLO_ARENA_PORTS"

# --- match harness ---------------------------------------------------------
MATCH_SIM_TIME_LIMIT_S = 300.0
