from .logbuf import LogBuffer, LogLine
from .recovery import LADDER_RUNGS, StrategyLadder, StrategyOutcome
from .station import AgentConfig, AgentState, BootReport, StationAgent
from .storage import InstallResult, StationStorage
from .verify import CHECK_SEVERITY, CheckContext, LocalCheckResult, run_local_checks

__all__ = [
    "StationAgent", "AgentConfig", "AgentState", "BootReport",
    "StrategyLadder", "StrategyOutcome", "LADDER_RUNGS",
    "StationStorage", "InstallResult",
    "LocalCheckResult", "CheckContext", "run_local_checks", "CHECK_SEVERITY",
    "LogBuffer", "LogLine",
]
