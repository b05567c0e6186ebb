"""HandMotionScript: rule-based posecode extraction and rendering."""

from .codes import axis_code, distance_code, palm_orientation
from .extract import PosecodeTable, anchors_for_locations, extract_framecodes
from .postprocess import postprocess
from .render import render_hms_block

__all__ = [
    "axis_code",
    "distance_code",
    "palm_orientation",
    "PosecodeTable",
    "anchors_for_locations",
    "extract_framecodes",
    "postprocess",
    "render_hms_block",
]
