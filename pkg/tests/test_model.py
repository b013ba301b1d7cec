import pytest
from hypothesis import given
from hypothesis import strategies as st

from roadfleet.errors import InvariantViolation, MalformedManifest
from roadfleet.model import (
    ConfigSet,
    LinkProfile,
    MessageOrigin,
    MessageType,
    ResourceQuota,
    V2IMessage,
    Version,
    builtin_link_profiles,
    link_profile,
    validate_manifest,
)


def manifest_doc(**overrides):
    doc = {
        "name": "tls-demo",
        "version": "1.0.0",
        "type": "FUNCTION",
        "depends": [],
        "priority": 100,
        "quota": {"cpu_share": 100, "ram": 1 << 20, "disk": 1 << 20,
                  "bandwidth_up": 1000, "bandwidth_v2i": 1000},
    }
    doc.update(overrides)
    return doc


class TestVersion:
    def test_parse_and_str_roundtrip(self):
        v = Version.parse("1.2.3")
        assert (v.major, v.minor, v.patch) == (1, 2, 3)
        assert str(v) == "1.2.3"

    @pytest.mark.parametrize("bad", ["1.2", "1.2.3.4", "a.b.c", "1.2.x", "", "1..3"])
    def test_rejects_bad_syntax(self, bad):
        with pytest.raises(MalformedManifest):
            Version.parse(bad)

    def test_numeric_not_lexicographic(self):
        assert Version.parse("1.10.0") > Version.parse("1.9.0")
        assert Version.parse("2.0.0") > Version.parse("1.99.99")

    @given(st.tuples(st.integers(0, 99), st.integers(0, 99), st.integers(0, 99)),
           st.tuples(st.integers(0, 99), st.integers(0, 99), st.integers(0, 99)))
    def test_total_order_matches_tuple_order(self, a, b):
        va, vb = Version(*a), Version(*b)
        assert (va < vb) == (a < b)
        assert (va == vb) == (a == b)
        assert (va > vb) == (a > b)
        # exactly one of the three holds
        assert sum([va < vb, va == vb, va > vb]) == 1


class TestValidateManifest:
    def test_minimal_wellformed(self):
        m = validate_manifest(manifest_doc())
        assert m.name == "tls-demo"
        assert str(m.version) == "1.0.0"
        assert m.priority == 100

    def test_management_priority_enforced(self):
        with pytest.raises(InvariantViolation):
            validate_manifest(manifest_doc(name="fm-agent", type="MANAGEMENT", priority=10))

    def test_management_at_255_passes(self):
        m = validate_manifest(manifest_doc(name="fm-agent", type="MANAGEMENT", priority=255))
        assert m.priority == 255

    def test_self_dependency_rejected(self):
        with pytest.raises(InvariantViolation):
            validate_manifest(manifest_doc(name="a", depends=[("a", "1.0.0")]))

    def test_missing_field(self):
        with pytest.raises(MalformedManifest):
            validate_manifest({"name": "x", "version": "1.0.0"})

    def test_bad_priority(self):
        with pytest.raises(MalformedManifest):
            validate_manifest(manifest_doc(priority=300))

    def test_idempotent(self):
        m1 = validate_manifest(manifest_doc(depends=[("lib", "0.9.0")]))
        m2 = validate_manifest(m1.to_dict())
        assert m1 == m2


class TestLinkProfiles:
    def test_catalogue_members(self):
        names = [p.name for p in builtin_link_profiles()]
        assert names == ["FIBER", "XDSL", "UMTS", "GPRS"]

    def test_fiber_bandwidth(self):
        # roughly 10 MB/s of fiber at the fast end of the catalogue
        assert link_profile("FIBER").bandwidth == 10_000_000

    def test_gprs_bandwidth(self):
        # a couple of KB/s at the slow end
        assert link_profile("GPRS").bandwidth == 2_000

    def test_all_profiles_satisfy_invariants(self):
        for p in builtin_link_profiles():
            assert p.bandwidth > 0
            assert p.delay_ms >= 0
            assert 0 <= p.loss_rate < 1

    def test_custom_profile_validation(self):
        with pytest.raises(InvariantViolation):
            LinkProfile("bad", 0, 1.0, 0.0)
        with pytest.raises(InvariantViolation):
            LinkProfile("bad", 10, 1.0, 1.0)
        with pytest.raises(InvariantViolation):
            LinkProfile("bad", 10, -1.0, 0.0)


class TestQuotaAndValues:
    def test_quota_rejects_negative(self):
        with pytest.raises(InvariantViolation):
            ResourceQuota(ram=-1)

    def test_config_set_invariants(self):
        with pytest.raises(InvariantViolation):
            ConfigSet("app", 0, {})
        with pytest.raises(InvariantViolation):
            ConfigSet("app", 1, {"": "v"})

    def test_v2i_message_invariants(self):
        ok = V2IMessage("m1", MessageType.DENM_LIKE, 100, 64, 0.0, 5.0, 2,
                        MessageOrigin.CENTER)
        assert ok.redundancy == 2
        with pytest.raises(InvariantViolation):
            V2IMessage("m2", MessageType.DENM_LIKE, 100, 0, 0.0, 5.0, 2,
                       MessageOrigin.CENTER)
        with pytest.raises(InvariantViolation):
            V2IMessage("m3", MessageType.DENM_LIKE, 100, 64, 0.0, 5.0, 0,
                       MessageOrigin.CENTER)
        with pytest.raises(InvariantViolation):
            V2IMessage("m4", MessageType.DENM_LIKE, 100, 64, 5.0, 5.0, 1,
                       MessageOrigin.CENTER)
