"""Round-robin worker pool: rotation, failover, exact fairness windows."""

import itertools

import pytest

from roadfleet.center.balancer import WorkerPool
from roadfleet.errors import NoWorkerAvailable, UnknownWorker


def test_round_robin_sequence():
    pool = WorkerPool(["w1", "w2", "w3"])
    got = [pool.dispatch() for _ in range(7)]
    assert got == ["w1", "w2", "w3", "w1", "w2", "w3", "w1"]


def test_down_worker_skipped_matches_enumeration_oracle():
    pool = WorkerPool(["w1", "w2", "w3"])
    pool.set_health("w2", False)
    got = [pool.dispatch() for _ in range(6)]
    oracle = list(itertools.islice(itertools.cycle(["w1", "w3"]), 6))
    assert got == oracle


def test_all_down():
    pool = WorkerPool(["w1", "w2"])
    pool.set_health("w1", False)
    pool.set_health("w2", False)
    with pytest.raises(NoWorkerAvailable):
        pool.dispatch()


def test_recovered_worker_rejoins_at_its_list_position():
    pool = WorkerPool(["w1", "w2", "w3"])
    pool.set_health("w2", False)
    assert [pool.dispatch() for _ in range(3)] == ["w1", "w3", "w1"]
    pool.set_health("w2", True)
    # cursor sits after w1; w2 is next in list order again
    assert [pool.dispatch() for _ in range(3)] == ["w2", "w3", "w1"]


def test_exact_fairness_over_full_rotation_windows():
    pool = WorkerPool(["a", "b", "c", "d"])
    pool.set_health("b", False)
    k = 3  # healthy workers
    n = 5
    window = [pool.dispatch() for _ in range(n * k)]
    for w in ("a", "c", "d"):
        assert window.count(w) == n


def test_fairness_holds_from_any_window_start():
    pool = WorkerPool(["a", "b", "c"])
    for start in range(5):
        pool.dispatch()  # shift the cursor
        window = [pool.dispatch() for _ in range(6)]
        assert {window.count(w) for w in ("a", "b", "c")} == {2}


def test_counts_stay_within_one_across_a_mid_run_failure():
    pool = WorkerPool(["w1", "w2", "w3"])
    for _ in range(10):
        pool.dispatch()
    pool.set_health("w2", False)
    for _ in range(11):
        pool.dispatch()
    counts = pool.dispatch_counts
    assert abs(counts["w1"] - counts["w3"]) <= 1


def test_unknown_worker():
    pool = WorkerPool(["w1"])
    with pytest.raises(UnknownWorker):
        pool.set_health("nope", False)
    with pytest.raises(UnknownWorker):
        pool.is_healthy("nope")
