"""Named metrics for ASSERT directives and run reports.

Every metric is a pure read over the harness state, so assertion results
are reproducible from the same run state.
"""

from __future__ import annotations

import operator

OPS = {"==": operator.eq, "!=": operator.ne, "<=": operator.le,
       ">=": operator.ge, "<": operator.lt, ">": operator.gt}


def _summary(harness):
    return harness.center.fleet_summary()


def _drift(harness, params):
    return _summary(harness).drift


def _converged(harness, params):
    s = _summary(harness)
    return s.total - s.drift


def _all_converged(harness, params):
    return int(_summary(harness).drift == 0)


def _liveness(key):
    def fn(harness, params):
        return _summary(harness).liveness[key]
    return fn


def _max_ping_rtt(harness, params):
    rtts = harness.center.ping_rtts
    return max(rtts) if rtts else 0.0


def _under_redundancy(harness, params):
    return sum(1 for agent in harness.agents.values()
               for removal in agent.sf_buffer.removals
               if removal.kind == "expired")


def _broadcasts(harness, params):
    return sum(len(agent.broadcasts) for agent in harness.agents.values())


def _station_state(harness, params):
    return harness.agents[params["station"]].state.value


def _dispatch_spread(harness, params):
    pool = harness.center.pool
    counts = [pool.dispatch_counts[w] for w in pool.healthy_workers()]
    return max(counts) - min(counts) if counts else 0


def _decision_count(harness, params):
    kind = params.get("kind")
    total = 0
    for entry in harness.center.store.faults.entries:
        kinds = [k.value for k in entry.decision.kinds]
        if kind is None or kind in kinds:
            total += 1
    return total


def _strategy_count(harness, params):
    rung = params.get("rung")
    station = params.get("station")
    total = 0
    for sid, agent in harness.agents.items():
        if station is not None and sid != station:
            continue
        for outcome in agent.ladder.applications:
            if rung is None or outcome.rung == rung:
                total += 1
    return total


def _function_bytes(harness, params):
    app = params["app"]
    station = params.get("station")
    total = 0
    for sid in harness.agents:
        if station is not None and sid != station:
            continue
        links = harness.fabric.links(sid)
        total += links.up.delivered_bytes_by_class.get(f"fn:{app}", 0)
    return total


METRICS = {
    "drift_count": _drift,
    "converged_count": _converged,
    "all_converged": _all_converged,
    "online_count": _liveness("ONLINE"),
    "suspect_count": _liveness("SUSPECT"),
    "offline_count": _liveness("OFFLINE"),
    "open_critical": lambda h, p: _summary(h).open_critical,
    "heartbeats_delivered": lambda h, p: h.center.reports_processed,
    "reports_processed": lambda h, p: h.center.reports_processed,
    "max_ping_rtt": _max_ping_rtt,
    "under_redundancy_count": _under_redundancy,
    "broadcast_count": _broadcasts,
    "fault_count": lambda h, p: len(h.center.store.faults.entries),
    "notification_count": lambda h, p: len(h.center.store.notifications),
    "dispatch_spread": _dispatch_spread,
    "station_state": _station_state,
    "quarantined_count": lambda h, p: sum(len(a.quarantined)
                                          for a in h.agents.values()),
    "decision_count": _decision_count,
    "strategy_count": _strategy_count,
    "function_bytes_delivered": _function_bytes,
}


def evaluate(harness, metric: str, params: dict):
    return METRICS[metric](harness, params)


def check(harness, params: dict) -> tuple[bool, object]:
    actual = evaluate(harness, params["metric"], params)
    op = OPS[params.get("op", "==")]
    return bool(op(actual, params["value"])), actual
