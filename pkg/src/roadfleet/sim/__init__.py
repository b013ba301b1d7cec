from .harness import SimulationHarness
from .report import RunReport
from .scenario import (Directive, Scenario, ScenarioPackage, fleet_bootstrap,
                       inject, load_scenario, parse_scenario)

__all__ = [
    "Scenario", "ScenarioPackage", "Directive",
    "load_scenario", "parse_scenario", "fleet_bootstrap", "inject",
    "SimulationHarness", "RunReport",
]
