import math

import frogsim


def test_sample_w_inverse():
    w = frogsim.sample_W(1.0, 0.5)
    assert w == 1.0
    assert abs(frogsim.wake_threshold_cdf(2.0, frogsim.sample_W(2.0, 0.3)) - 0.3) < 1e-14


def test_survival():
    s = frogsim.survival_mass_analytic(-1.0, 0.0, 1.0)
    assert abs(s - math.erf(1.0 / math.sqrt(2.0))) < 1e-14


def test_space_run_stalls_at_ustar():
    piles = [(0.1, 0.3), (0.2, 0.2), (0.3, 0.4)]
    ws = [0.2, 0.5, 2.0]
    run = frogsim.simulate(piles, x1_mass=0.6, thresholds=ws)
    assert run["stalled"]
    assert len(run["events"]) == 2
    assert run["stall_position"] == frogsim.compute_ustar(ws, piles, 0.6)


def test_hazard_run_deterministic():
    piles = frogsim.discretize_uniform(0.1)
    a = frogsim.simulate(piles, seed=3, stream=2, horizon=10.0)
    b = frogsim.simulate(piles, seed=3, stream=2, horizon=10.0)
    assert a["events"] == b["events"]
    assert a["max_conservation_error"] < 1e-9


def test_wake_threshold():
    assert frogsim.wake_threshold([1.0, 2.0], [0.5, 0.0]) == 1.5


def test_sample_j_sorted():
    pts = frogsim.sample_J(0.05, seed=4)
    zs = [z for z, _ in pts]
    assert zs == sorted(zs)
    assert all(r >= 0.05 for _, r in pts)


def test_criterion_nine():
    rep = frogsim.run_criterion(9)
    assert rep["pass"]
    assert frogsim.criterion_title(9)
