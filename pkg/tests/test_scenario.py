"""Scenario schema, fleet bootstrap apportionment, inject construction."""

from fractions import Fraction

import pytest

from roadfleet.errors import ScenarioError, UnknownTarget
from roadfleet.model import RegionClass
from roadfleet.sim import fleet_bootstrap, inject, parse_scenario

CANONICAL_MIX = {"URBAN": 0.3, "HIGHWAY_DENSE": 0.3,
                 "HIGHWAY_SPARSE": 0.2, "RURAL": 0.2}


def rounding_oracle(count, mix):
    """Independent largest-remainder apportionment over region names."""
    keys = sorted(mix)
    total = sum(Fraction(str(mix[k])) for k in keys)
    exact = {k: Fraction(count) * Fraction(str(mix[k])) / total for k in keys}
    counts = {k: int(exact[k]) for k in keys}
    leftovers = count - sum(counts.values())
    order = sorted(keys, key=lambda k: (-(exact[k] - counts[k]),
                                        -Fraction(str(mix[k])), k))
    for i in range(leftovers):
        counts[order[i % len(order)]] += 1
    return counts


class TestBootstrap:
    def test_exact_proportions_at_100(self):
        groups = fleet_bootstrap(100, CANONICAL_MIX)
        got = {}
        for g in groups:
            got[g.region.value] = got.get(g.region.value, 0) + g.count
        assert got == {"URBAN": 30, "HIGHWAY_DENSE": 30,
                       "HIGHWAY_SPARSE": 20, "RURAL": 20}
        assert got == rounding_oracle(100, CANONICAL_MIX)

    @pytest.mark.parametrize("count", [1, 3, 7, 33, 99, 101])
    def test_matches_rounding_oracle(self, count):
        groups = fleet_bootstrap(count, CANONICAL_MIX)
        got = {}
        for g in groups:
            got[g.region.value] = got.get(g.region.value, 0) + g.count
        oracle = rounding_oracle(count, CANONICAL_MIX)
        assert got == {k: v for k, v in oracle.items() if v}
        assert sum(got.values()) == count

    def test_single_station_lands_in_largest_share_class(self):
        groups = fleet_bootstrap(1, CANONICAL_MIX)
        assert len(groups) == 1
        # 0.3 tie between HIGHWAY_DENSE and URBAN resolves by name
        assert groups[0].region is RegionClass.HIGHWAY_DENSE

    def test_link_profiles_rotate_over_catalogue(self):
        groups = fleet_bootstrap(8, CANONICAL_MIX)
        assert sorted({g.link for g in groups}) == ["FIBER", "GPRS", "UMTS", "XDSL"]

    def test_zero_count_rejected(self):
        with pytest.raises(ScenarioError):
            fleet_bootstrap(0, CANONICAL_MIX)


class TestInject:
    def test_builds_directive(self):
        d = inject("irs-001", {"layer": "FUNCTION", "subject": "f", "repeat": 5,
                               "spacing": 30.0}, {"irs-000", "irs-001"}, at=12.0)
        assert d.kind == "INJECT_FAULT"
        assert d.at == 12.0
        assert d.params["station"] == "irs-001"
        assert d.params["repeat"] == 5

    def test_unknown_target(self):
        with pytest.raises(UnknownTarget):
            inject("irs-999", {}, {"irs-000"})


class TestParse:
    def base_doc(self):
        return {
            "name": "t", "seed": 1, "duration": 10.0,
            "fleet": [{"count": 2, "region": "URBAN", "link": "XDSL"}],
            "packages": [{"name": "p", "version": "1.0.0"}],
            "timeline": [
                {"at": 1.0, "assign": {"station": "all", "package": "p",
                                       "version": "1.0.0"}},
                {"at": 9.0, "assert": {"metric": "drift_count", "op": "==",
                                       "value": 0}},
            ],
        }

    def test_happy_path(self):
        s = parse_scenario(self.base_doc())
        assert s.station_ids() == ["irs-000", "irs-001"]
        assert len(s.timeline) == 2
        assert s.packages[0].quota["disk"] > 0  # defaulted from payload size

    def test_times_must_be_nondecreasing(self):
        doc = self.base_doc()
        doc["timeline"].append({"at": 0.5, "assert": {"metric": "drift_count",
                                                      "op": "==", "value": 0}})
        with pytest.raises(ScenarioError):
            parse_scenario(doc)

    def test_unknown_metric_rejected(self):
        doc = self.base_doc()
        doc["timeline"][1]["assert"]["metric"] = "vibes"
        with pytest.raises(ScenarioError):
            parse_scenario(doc)

    def test_unknown_directive_rejected(self):
        doc = self.base_doc()
        doc["timeline"].append({"at": 9.5, "explode": {}})
        with pytest.raises(ScenarioError):
            parse_scenario(doc)

    def test_unknown_station_target_rejected(self):
        doc = self.base_doc()
        doc["timeline"].append({"at": 9.5, "configure": {
            "station": "irs-777", "app": "p", "entries": {}}})
        with pytest.raises(ScenarioError):
            parse_scenario(doc)

    def test_unknown_worker_rejected(self):
        doc = self.base_doc()
        doc["timeline"].append({"at": 9.5, "kill_worker": {"worker": "w9"}})
        with pytest.raises(ScenarioError):
            parse_scenario(doc)

    def test_fleet_bootstrap_form(self):
        doc = self.base_doc()
        doc["fleet"] = {"count": 10, "mix": CANONICAL_MIX}
        doc["timeline"] = []
        s = parse_scenario(doc)
        assert len(s.station_ids()) == 10
