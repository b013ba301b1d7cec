"""Scenario files: fleet spec, packages, timeline, assertions.

YAML because timelines are written and annotated by humans. Parsing is
strict about structure; unknown directive kinds or metrics fail the load,
so a typo cannot silently turn into a vacuous run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from ..errors import ScenarioError, UnknownTarget
from ..model import RegionClass, builtin_link_profiles

DIRECTIVE_KINDS = ("ASSIGN", "CONFIGURE", "INJECT_FAULT", "KILL_WORKER",
                   "REPLACE_HARDWARE", "POST_V2I", "SET_CHANNEL_LOAD", "ASSERT")

ASSERT_OPS = ("==", "!=", "<=", ">=", "<", ">")

# kept in sync with sim.metrics.METRICS; validated at parse time
KNOWN_METRICS = ("drift_count", "converged_count", "all_converged",
                 "online_count", "suspect_count", "offline_count",
                 "open_critical", "heartbeats_delivered", "reports_processed",
                 "max_ping_rtt", "under_redundancy_count", "broadcast_count",
                 "fault_count", "notification_count", "dispatch_spread",
                 "station_state", "quarantined_count", "decision_count",
                 "strategy_count", "function_bytes_delivered")

DEFAULT_LINK_ROTATION = tuple(p.name for p in builtin_link_profiles())


@dataclass(frozen=True)
class FleetGroup:
    count: int
    region: RegionClass
    link: str


@dataclass(frozen=True)
class ScenarioPackage:
    name: str
    version: str
    pkg_type: str
    priority: int
    depends: tuple[tuple[str, str], ...]
    payload_size: int
    quota: dict
    behavior: dict

    def manifest_fields(self) -> dict:
        return {
            "name": self.name, "version": self.version, "type": self.pkg_type,
            "priority": self.priority, "depends": [list(d) for d in self.depends],
            "quota": self.quota,
        }


@dataclass(frozen=True)
class Directive:
    at: float
    kind: str
    params: dict


@dataclass
class Scenario:
    name: str
    seed: int
    duration: float
    fleet: list[FleetGroup]
    packages: list[ScenarioPackage]
    timeline: list[Directive]
    workers: tuple[str, ...] = ("w1", "w2", "w3")
    reserved_share: float = 0.10
    ping_interval: float = 0.0  # 0 disables the management reachability probe
    ping_stations: tuple[str, ...] = ()
    boot_stagger: float = 0.05
    neighbor_count: int = 1

    def station_ids(self) -> list[str]:
        total = sum(g.count for g in self.fleet)
        return [f"irs-{i:03d}" for i in range(total)]

    def station_plan(self) -> list[tuple[str, str, RegionClass, str]]:
        """(logical_id, hardware_id, region, link) per station, in id order."""
        plan = []
        i = 0
        for group in self.fleet:
            for _ in range(group.count):
                plan.append((f"irs-{i:03d}", f"hw-{i:03d}", group.region, group.link))
                i += 1
        return plan


def fleet_bootstrap(count: int, mix: dict[str, float],
                    links: tuple[str, ...] = DEFAULT_LINK_ROTATION) -> list[FleetGroup]:
    """Apportion `count` stations over region classes by largest remainder.

    Link profiles rotate over the station index so a large fleet exercises
    the whole catalogue. A single station lands in the largest-share class
    (ties by class name).
    """
    if count < 1:
        raise ScenarioError("fleet count must be >= 1")
    regions = []
    shares = []
    for key in sorted(mix):
        region = RegionClass(key)
        share = Fraction(str(mix[key]))
        if share < 0:
            raise ScenarioError(f"negative share for {key}")
        regions.append(region)
        shares.append(share)
    total_share = sum(shares)
    if total_share <= 0:
        raise ScenarioError("mix shares must sum to something positive")

    exact = [Fraction(count) * s / total_share for s in shares]
    counts = [int(e) for e in exact]
    leftover = count - sum(counts)
    order = sorted(range(len(regions)),
                   key=lambda i: (-(exact[i] - counts[i]), -shares[i], regions[i].value))
    for i in range(leftover):
        counts[order[i % len(order)]] += 1

    groups: list[FleetGroup] = []
    idx = 0
    for region, n in zip(regions, counts):
        for _ in range(n):
            groups.append(FleetGroup(1, region, links[idx % len(links)]))
            idx += 1
    return groups


def inject(target: str, fault: dict, known_stations: set[str],
           at: float = 0.0) -> Directive:
    """Build an INJECT_FAULT directive, validating the target exists."""
    if target != "all" and target not in known_stations:
        raise UnknownTarget(target)
    params = {"station": target}
    params.update(fault)
    return Directive(at=at, kind="INJECT_FAULT", params=params)


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ScenarioError(f"{context}: missing {key!r}")
    return mapping[key]


def parse_scenario(doc: dict, name: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")

    fleet: list[FleetGroup] = []
    fleet_raw = doc.get("fleet", [])
    if isinstance(fleet_raw, dict):
        fleet = fleet_bootstrap(int(_require(fleet_raw, "count", "fleet")),
                                _require(fleet_raw, "mix", "fleet"))
    else:
        for i, group in enumerate(fleet_raw):
            try:
                fleet.append(FleetGroup(int(group.get("count", 1)),
                                        RegionClass(group["region"]),
                                        str(group.get("link", "XDSL"))))
            except (KeyError, ValueError) as exc:
                raise ScenarioError(f"fleet[{i}]: {exc}") from exc

    packages = []
    for i, raw in enumerate(doc.get("packages", [])):
        try:
            payload_size = int(raw.get("payload_size", 256))
            quota = dict(raw.get("quota", {}))
            quota.setdefault("disk", payload_size * 10)
            quota.setdefault("ram", 1 << 20)
            quota.setdefault("cpu_share", 100)
            quota.setdefault("bandwidth_up", 1000)
            quota.setdefault("bandwidth_v2i", 1000)
            packages.append(ScenarioPackage(
                name=str(raw["name"]),
                version=str(raw.get("version", "1.0.0")),
                pkg_type=str(raw.get("type", "FUNCTION")),
                priority=int(raw.get("priority",
                                     255 if raw.get("type") == "MANAGEMENT" else 100)),
                depends=tuple((str(d[0]), str(d[1])) for d in raw.get("depends", [])),
                payload_size=payload_size,
                quota=quota,
                behavior=dict(raw.get("behavior", {})),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"packages[{i}]: {exc}") from exc

    timeline: list[Directive] = []
    last_at = float("-inf")
    for i, raw in enumerate(doc.get("timeline", [])):
        if not isinstance(raw, dict) or "at" not in raw:
            raise ScenarioError(f"timeline[{i}]: needs an 'at' time")
        at = float(raw["at"])
        if at < last_at:
            raise ScenarioError(f"timeline[{i}]: times must be nondecreasing")
        last_at = at
        body = {k: v for k, v in raw.items() if k != "at"}
        if len(body) != 1:
            raise ScenarioError(f"timeline[{i}]: exactly one directive per entry")
        key, params = next(iter(body.items()))
        kind = key.upper()
        if kind not in DIRECTIVE_KINDS:
            raise ScenarioError(f"timeline[{i}]: unknown directive {key!r}")
        if not isinstance(params, dict):
            raise ScenarioError(f"timeline[{i}]: directive body must be a mapping")
        if kind == "ASSERT":
            metric = _require(params, "metric", f"timeline[{i}]")
            if metric not in KNOWN_METRICS:
                raise ScenarioError(f"timeline[{i}]: unknown metric {metric!r}")
            op = params.get("op", "==")
            if op not in ASSERT_OPS:
                raise ScenarioError(f"timeline[{i}]: unknown op {op!r}")
            _require(params, "value", f"timeline[{i}]")
        timeline.append(Directive(at=at, kind=kind, params=params))

    probes = doc.get("probes", {}) or {}
    scenario = Scenario(
        name=str(doc.get("name", name)),
        seed=int(doc.get("seed", 0)),
        duration=float(doc.get("duration", 60.0)),
        fleet=fleet,
        packages=packages,
        timeline=timeline,
        workers=tuple(doc.get("workers", ("w1", "w2", "w3"))),
        reserved_share=float(doc.get("reserved_share", 0.10)),
        ping_interval=float(probes.get("ping_interval", 0.0)),
        ping_stations=tuple(probes.get("ping_stations", ())),
        boot_stagger=float(doc.get("boot_stagger", 0.05)),
        neighbor_count=int(doc.get("neighbor_count", 1)),
    )

    known = set(scenario.station_ids())
    for i, directive in enumerate(scenario.timeline):
        target = directive.params.get("station")
        if target is not None and target != "all" and target not in known:
            raise ScenarioError(f"timeline[{i}]: unknown station {target!r}")
        for target in directive.params.get("stations", []):
            if target not in known:
                raise ScenarioError(f"timeline[{i}]: unknown station {target!r}")
        if directive.kind == "KILL_WORKER":
            worker = _require(directive.params, "worker", f"timeline[{i}]")
            if worker not in scenario.workers:
                raise ScenarioError(f"timeline[{i}]: unknown worker {worker!r}")
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    return parse_scenario(doc or {}, name=path.stem)
