"""Text-conditioned 3D hand motion toolkit."""

__version__ = "0.1.0"

from .motion import MotionSequence, read_motion, write_motion
from .skeleton import Skeleton, default_skeleton, forward_kinematics

__all__ = [
    "MotionSequence",
    "read_motion",
    "write_motion",
    "Skeleton",
    "default_skeleton",
    "forward_kinematics",
]
