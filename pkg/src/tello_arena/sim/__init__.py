from .framing import FrameDecoder, TruncatedStream, encode_frame, read_frames
from .referee import Referee
from .state import DroneState, MotionPlan
from .world import SimWorld
