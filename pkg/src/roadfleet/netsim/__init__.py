from .bucket import ShapeResult, TokenBucket
from .clock import VirtualClock
from .link import Fabric, Link, TrafficClass
from .sfbuffer import EnqueueResult, SfBuffer
from .trace import TraceLog

__all__ = [
    "VirtualClock",
    "TokenBucket",
    "ShapeResult",
    "SfBuffer",
    "EnqueueResult",
    "TrafficClass",
    "Link",
    "Fabric",
    "TraceLog",
]
