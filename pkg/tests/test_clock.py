import pytest

from roadfleet.netsim import VirtualClock


def test_no_pending_events_advances_now():
    clock = VirtualClock()
    assert clock.advance(5.0) == []
    assert clock.now == 5.0


def test_same_timestamp_runs_in_insertion_order():
    clock = VirtualClock()
    seen = []
    clock.schedule(1.0, seen.append, "first")
    clock.schedule(1.0, seen.append, "second")
    clock.schedule(0.5, seen.append, "earlier")
    clock.advance(2.0)
    assert seen == ["earlier", "first", "second"]


def test_events_scheduled_during_advance_run_in_window():
    clock = VirtualClock()
    seen = []

    def chain():
        seen.append(clock.now)
        if clock.now < 3.0:
            clock.schedule_in(1.0, chain)

    clock.schedule(1.0, chain)
    clock.advance(10.0)
    assert seen == [1.0, 2.0, 3.0]
    assert clock.now == 10.0


def test_cancel():
    clock = VirtualClock()
    seen = []
    eid = clock.schedule(1.0, seen.append, "x")
    assert clock.cancel(eid) is True
    assert clock.cancel(eid) is False
    clock.advance(2.0)
    assert seen == []


def test_cannot_schedule_or_advance_backwards():
    clock = VirtualClock()
    clock.advance(5.0)
    with pytest.raises(ValueError):
        clock.schedule(1.0, lambda: None)
    with pytest.raises(ValueError):
        clock.advance(4.0)


def test_identical_schedules_give_identical_execution_order():
    def run():
        clock = VirtualClock()
        order = []
        for i in range(20):
            clock.schedule((i * 7 % 5) * 0.5, order.append, i)
        clock.advance(10.0)
        return order

    assert run() == run()
