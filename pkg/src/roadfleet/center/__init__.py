from .balancer import WorkerPool
from .faults import CentralDecision, DecisionKind, FaultLogEntry
from .planner import (
    Action,
    Activate,
    Assignment,
    Configure,
    Deactivate,
    DesiredState,
    Install,
    Remove,
    ReportedState,
    apply_actions,
    compute_actions,
)
from .repository import PackageRepository
from .service import ManagementCenter
from .store import FleetStore, StationRecord

__all__ = [
    "Assignment", "DesiredState", "ReportedState",
    "Action", "Install", "Remove", "Configure", "Activate", "Deactivate",
    "compute_actions", "apply_actions",
    "PackageRepository", "FleetStore", "StationRecord",
    "WorkerPool", "CentralDecision", "DecisionKind", "FaultLogEntry",
    "ManagementCenter",
]
