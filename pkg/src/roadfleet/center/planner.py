"""Desired/reported state reconciliation.

compute_actions diffs what the center wants against what a station last
reported and emits the ordered action list that closes the gap: removes,
installs in dependency order, config updates, deactivations, activations.
The output is deterministic; ties break by name ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from ..model import SYSTEM_APP, Activation, ConfigSet, Version

DependsFn = Callable[[str, Version], tuple[tuple[str, Version], ...]]


@dataclass(frozen=True)
class Assignment:
    version: Version
    activation: Activation


@dataclass
class DesiredState:
    """What the center wants on one station; survives hardware swaps."""

    assignments: dict[str, Assignment] = field(default_factory=dict)
    configs: dict[str, ConfigSet] = field(default_factory=dict)

    def copy(self) -> DesiredState:
        return DesiredState(dict(self.assignments), dict(self.configs))

    def to_dict(self) -> dict:
        return {
            "assignments": {n: {"version": str(a.version), "activation": a.activation.value}
                            for n, a in sorted(self.assignments.items())},
            "configs": {app: cfg.to_dict() for app, cfg in sorted(self.configs.items())},
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> DesiredState:
        return cls(
            assignments={n: Assignment(Version.parse(a["version"]), Activation(a["activation"]))
                         for n, a in raw.get("assignments", {}).items()},
            configs={app: ConfigSet.from_dict(c) for app, c in raw.get("configs", {}).items()},
        )


@dataclass
class ReportedState:
    """A station's last self-reported actual configuration."""

    installed: dict[str, Version] = field(default_factory=dict)
    active: set[str] = field(default_factory=set)
    applied_config_versions: dict[str, int] = field(default_factory=dict)
    health: dict[str, str] = field(default_factory=dict)  # function -> RUNNING/STOPPED/FAULTED

    def copy(self) -> ReportedState:
        return ReportedState(dict(self.installed), set(self.active),
                             dict(self.applied_config_versions), dict(self.health))

    def to_dict(self) -> dict:
        return {
            "installed": {n: str(v) for n, v in sorted(self.installed.items())},
            "active": sorted(self.active),
            "applied_config_versions": dict(sorted(self.applied_config_versions.items())),
            "health": dict(sorted(self.health.items())),
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> ReportedState:
        return cls(
            installed={n: Version.parse(v) for n, v in raw.get("installed", {}).items()},
            active=set(raw.get("active", [])),
            applied_config_versions={k: int(v) for k, v in
                                     raw.get("applied_config_versions", {}).items()},
            health=dict(raw.get("health", {})),
        )


# -- actions -------------------------------------------------------------------

@dataclass(frozen=True)
class Install:
    name: str
    version: Version


@dataclass(frozen=True)
class Remove:
    name: str


@dataclass(frozen=True)
class Configure:
    app: str
    config: ConfigSet


@dataclass(frozen=True)
class Activate:
    name: str


@dataclass(frozen=True)
class Deactivate:
    name: str


Action = Install | Remove | Configure | Activate | Deactivate


def action_to_dict(action: Action) -> dict:
    if isinstance(action, Install):
        return {"op": "install", "name": action.name, "version": str(action.version)}
    if isinstance(action, Remove):
        return {"op": "remove", "name": action.name}
    if isinstance(action, Configure):
        return {"op": "configure", "app": action.app, "config": action.config.to_dict()}
    if isinstance(action, Activate):
        return {"op": "activate", "name": action.name}
    if isinstance(action, Deactivate):
        return {"op": "deactivate", "name": action.name}
    raise TypeError(f"not an action: {action!r}")


def action_from_dict(raw: Mapping) -> Action:
    op = raw["op"]
    if op == "install":
        return Install(raw["name"], Version.parse(raw["version"]))
    if op == "remove":
        return Remove(raw["name"])
    if op == "configure":
        return Configure(raw["app"], ConfigSet.from_dict(raw["config"]))
    if op == "activate":
        return Activate(raw["name"])
    if op == "deactivate":
        return Deactivate(raw["name"])
    raise ValueError(f"unknown action op {op!r}")


# -- planning ----------------------------------------------------------------------

def _topo_order(names: set[str], versions: Mapping[str, Version],
                depends_of: DependsFn) -> list[str]:
    """Dependencies first; ties and (defensively) cycles resolve by name asc."""
    indeg = {n: 0 for n in names}
    dependents: dict[str, list[str]] = {n: [] for n in names}
    for name in names:
        for dep_name, _min in depends_of(name, versions[name]):
            if dep_name in names and dep_name != name:
                indeg[name] += 1
                dependents[dep_name].append(name)
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        changed = False
        for m in dependents[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
                changed = True
        if changed:
            ready.sort()
    leftover = sorted(n for n in names if n not in order)
    return order + leftover


def compute_actions(desired: DesiredState, reported: ReportedState | None,
                    depends_of: DependsFn) -> list[Action]:
    """Plan the actions that bring `reported` in line with `desired`.

    A fresh or wiped station (reported None) gets the full build-out. The
    result is empty exactly when there is nothing to do, which doubles as
    the fleet's convergence test.
    """
    state = reported if reported is not None else ReportedState()
    actions: list[Action] = []

    # stray packages
    for name in sorted(state.installed):
        if name not in desired.assignments:
            actions.append(Remove(name))

    # wrong or missing versions; a reinstall implicitly deactivates
    to_install = {name: a.version for name, a in desired.assignments.items()
                  if state.installed.get(name) != a.version}
    for name in _topo_order(set(to_install), to_install, depends_of):
        actions.append(Install(name, to_install[name]))

    # configs lag when the applied version is behind; configs for apps that
    # are not assigned (and not the station-level "system" app) stay latent
    for app in sorted(desired.configs):
        if app != SYSTEM_APP and app not in desired.assignments:
            continue
        cfg = desired.configs[app]
        if state.applied_config_versions.get(app, 0) < cfg.version:
            actions.append(Configure(app, cfg))

    for name in sorted(state.active):
        a = desired.assignments.get(name)
        if (a is not None and a.activation is Activation.INACTIVE
                and name not in to_install):
            actions.append(Deactivate(name))

    to_activate = {name: a.version for name, a in desired.assignments.items()
                   if a.activation is Activation.ACTIVE
                   and (name not in state.active or name in to_install)}
    for name in _topo_order(set(to_activate), to_activate, depends_of):
        actions.append(Activate(name))

    return actions


def apply_actions(reported: ReportedState | None, actions: list[Action]) -> ReportedState:
    """Reference semantics of applying an action list to a reported state.

    Mirrors what a healthy agent does; used for fixpoint checks and tests.
    """
    state = reported.copy() if reported is not None else ReportedState()
    for action in actions:
        if isinstance(action, Install):
            state.installed[action.name] = action.version
            state.active.discard(action.name)
            state.health[action.name] = "STOPPED"
        elif isinstance(action, Remove):
            state.installed.pop(action.name, None)
            state.active.discard(action.name)
            state.health.pop(action.name, None)
        elif isinstance(action, Configure):
            state.applied_config_versions[action.app] = action.config.version
        elif isinstance(action, Activate):
            if action.name in state.installed:
                state.active.add(action.name)
                state.health[action.name] = "RUNNING"
        elif isinstance(action, Deactivate):
            state.active.discard(action.name)
            if action.name in state.installed:
                state.health[action.name] = "STOPPED"
    return state


def matches(desired: DesiredState, reported: ReportedState | None,
            depends_of: DependsFn) -> bool:
    return not compute_actions(desired, reported, depends_of)
