"""Operator command line: run scenarios, bootstrap fleets, serve the API."""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

import click
import yaml

from .errors import ScenarioError
from .netsim.trace import digest_of, parse_trace
from .sim import SimulationHarness, fleet_bootstrap, load_scenario

EXIT_OK = 0
EXIT_ASSERT_FAILED = 1
EXIT_PARSE_ERROR = 2


@click.group()
def main():
    """Fleet management simulator for roadside stations."""


@main.command()
@click.argument("scenario_file", type=click.Path())
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--trace", "trace_out", type=click.Path(), default=None,
              help="Write the full event trace to this file.")
@click.option("--report-json", "json_out", type=click.Path(), default=None,
              help="Write the report as JSON to this file.")
def run(scenario_file, seed, trace_out, json_out):
    """Execute a scenario on the virtual clock; exit 0 only if asserts pass."""
    try:
        scenario = load_scenario(scenario_file)
    except ScenarioError as exc:
        click.echo(f"scenario error: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    if seed is not None:
        scenario.seed = seed
    harness = SimulationHarness(scenario)
    report = harness.run()
    if trace_out:
        Path(trace_out).write_text(harness.trace.render())
    if json_out:
        Path(json_out).write_text(json.dumps(report.to_dict(), indent=2,
                                             sort_keys=True))
    click.echo(report.render())
    sys.exit(EXIT_OK if report.passed else EXIT_ASSERT_FAILED)


@main.command()
@click.option("--count", type=int, required=True, help="Total station count.")
@click.option("--mix", default="HIGHWAY_DENSE:0.3,HIGHWAY_SPARSE:0.2,RURAL:0.2,URBAN:0.3",
              help="region:share pairs, comma separated.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the fleet fragment to a file instead of stdout.")
def bootstrap(count, mix, out):
    """Generate a fleet fragment apportioned over the four region classes."""
    try:
        shares = {}
        for part in mix.split(","):
            region, share = part.split(":")
            shares[region.strip()] = float(share)
        groups = fleet_bootstrap(count, shares)
    except (ValueError, ScenarioError) as exc:
        click.echo(f"bootstrap error: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    fragment = {"fleet": [{"count": g.count, "region": g.region.value,
                           "link": g.link} for g in groups]}
    text = yaml.safe_dump(fragment, sort_keys=False)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text)


@main.command()
@click.argument("scenario_file", type=click.Path())
@click.option("--port", type=int, default=8080)
@click.option("--host", default="127.0.0.1")
@click.option("--timescale", type=float, default=1.0,
              help="Virtual seconds per wall second.")
def serve(scenario_file, port, host, timescale):
    """Start the management API over a live fleet advancing in real time."""
    import uvicorn

    from .center.api import LiveSimulation, create_app

    try:
        scenario = load_scenario(scenario_file)
    except ScenarioError as exc:
        click.echo(f"scenario error: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    harness = SimulationHarness(scenario)
    sim = LiveSimulation(harness, timescale=timescale)
    app = create_app(sim)
    sim.start()
    click.echo(f"serving fleet of {len(harness.agents)} stations "
               f"on http://{host}:{port} (timescale {timescale}x)")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        sim.stop()


@main.command()
@click.argument("trace_file", type=click.Path())
def report(trace_file):
    """Summarize a trace file and verify its digest."""
    try:
        text = Path(trace_file).read_text()
    except OSError as exc:
        click.echo(f"cannot read trace: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    lines, recorded = parse_trace(text)
    actual = digest_of(lines)
    kinds = Counter()
    for line in lines:
        parts = line.split()
        if len(parts) >= 3 and parts[1] == "EVENT":
            kinds[parts[2]] += 1
    click.echo(f"events: {sum(kinds.values())}")
    for kind in sorted(kinds):
        click.echo(f"  {kind}: {kinds[kind]}")
    if recorded is None:
        click.echo("digest: (none recorded)")
    else:
        status = "OK" if recorded == actual else "MISMATCH"
        click.echo(f"digest: {actual} [{status}]")
        if status == "MISMATCH":
            sys.exit(EXIT_PARSE_ERROR)


if __name__ == "__main__":
    main()
