import numpy as np
from pygoalnet import (
    LoopSpec, LoopSynthesis, synthesize_loop, CovarianceLadder, AoiTracker,
    PriorityMatrix, coil, voi, aoi_update, aoi_summary, aoi_area_ratio,
    priority_matrix, loop_metric, DomainError, DimensionError, EmptyTrace)
from pygoalnet.utils.raises_util import raises

def _gamma_only(Gamma):
    Gamma = np.array(Gamma, dtype=float)
    n = Gamma.shape[0]
    zeros = np.zeros((n, n))
    return LoopSynthesis(zeros, np.zeros((1, n)), Gamma, zeros,
                         np.zeros((n, 1)))

def _random_loop(rng, n):
    A = rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    return LoopSpec(A, np.eye(n), np.eye(n), G @ G.T + 0.1*np.eye(n),
                    np.eye(n), np.eye(n), np.eye(n))

def test_coil():
    loop = LoopSpec(1, 1, 1, 1, 0, 1, 1)
    synth = synthesize_loop(loop)
    assert abs(synth.Gamma_inf[0, 0] - 1) < 1e-9
    assert abs(coil(synth, 0, loop) - 1) < 1e-9
    assert abs(coil(synth, 1, loop) - 2) < 1e-9
    zero = LoopSpec(0.5, 0, 1, 1, 1, 1, 1)
    zero_synth = synthesize_loop(zero)
    assert all(coil(zero_synth, t, zero) == 0.0 for t in range(10))
    assert raises(DomainError, lambda: coil(synth, -1, loop))

def test_coil_monotone():
    rng = np.random.default_rng(29)
    for trial in range(50):
        loop = _random_loop(rng, 1 + trial % 3)
        synth = synthesize_loop(loop)
        ladder = CovarianceLadder(synth, loop)
        values = [coil(synth, t, loop, ladder) for t in range(21)]
        assert all(v >= 0.0 for v in values)
        assert all(b >= a - 1e-9*(1 + abs(a)) for a, b in zip(values, values[1:]))
        assert abs(values[3] - coil(synth, 3, loop)) <= 1e-9*(1 + values[3])

def test_voi():
    assert voi(_gamma_only([[2.0]]), [0.0]) == 0.0
    assert voi(_gamma_only([[2.0]]), [3.0]) == 18.0
    assert voi(_gamma_only([[1.0, 0.0], [0.0, 0.0]]), [0.0, 7.0]) == 0.0
    rng = np.random.default_rng(31)
    for _ in range(100):
        G = rng.standard_normal((3, 3))
        assert voi(_gamma_only(G @ G.T), rng.standard_normal(3)) >= 0.0
    assert raises(DimensionError, lambda: voi(_gamma_only([[1.0]]), [1.0, 2.0]))

def test_aoi_update():
    tracker = aoi_update(AoiTracker(5), True)
    assert (tracker.age, tracker.peaks) == (0, [5])
    assert aoi_update(AoiTracker(), False).age == 1
    tracker = AoiTracker()
    for k in range(12):
        aoi_update(tracker, k % 4 == 3)
    assert tracker.ages_trace[4:8] == [1, 2, 3, 0]
    assert raises(DomainError, lambda: AoiTracker(-1))

def test_aoi_summary():
    tracker = AoiTracker(3)
    for k in range(4000):
        aoi_update(tracker, k % 4 == 0)
    assert aoi_summary(tracker) == (1.5, 3.0)
    tracker = AoiTracker()
    for _ in range(100):
        aoi_update(tracker, True)
    assert aoi_summary(tracker) == (0.0, 0.0)
    tracker = AoiTracker()
    for _ in range(4):
        aoi_update(tracker, False)
    assert tracker.ages_trace == [1, 2, 3, 4]
    assert aoi_summary(tracker) == (2.5, None)
    assert raises(EmptyTrace, lambda: aoi_summary(AoiTracker()))

def test_aoi_area_ratio():
    rng = np.random.default_rng(37)
    for q in (0.05, 0.3, 0.9):
        tracker = AoiTracker(int(rng.integers(0, 5)))
        for received in rng.random(10**4) < q:
            aoi_update(tracker, bool(received))
        aaoi, _ = aoi_summary(tracker)
        assert abs(aoi_area_ratio(tracker) - aaoi) <= 1e-12*(1 + aaoi)
    broken = AoiTracker()
    broken.ages_trace.extend([1, 3])
    assert raises(DomainError, lambda: aoi_area_ratio(broken))
    assert raises(EmptyTrace, lambda: aoi_area_ratio(AoiTracker()))

def test_priority_matrix():
    m = priority_matrix([1, 2], [[1, 0.5], [0.2, 1]])
    assert np.allclose(m.m, [[1, 0.5], [0.4, 2]], atol=1e-15)
    m = priority_matrix([3.0, 0.5, 2.0], np.ones((3, 2)))
    assert np.all(m.m[:, 0] == m.m[:, 1])
    assert np.all(priority_matrix([0, 0], np.ones((2, 3))).m == 0.0)
    assert m.objective([[1, 0], [0, 1], [0, 0]]) == 3.5
    assert raises(DimensionError, lambda: priority_matrix([1], np.ones((2, 2))))
    assert raises(DomainError, lambda: PriorityMatrix([[-1.0]]))

def test_loop_metric():
    loop = LoopSpec(1, 1, 1, 1, 0, 1, 1)
    synth = synthesize_loop(loop)
    assert loop_metric('aoi', synth, loop, 4, np.zeros(1)) == 5.0
    assert loop_metric('coil', synth, loop, 1, np.zeros(1)) == \
        coil(synth, 1, loop)
    assert loop_metric('voi', synth, loop, 1, np.array([3.0])) == \
        voi(synth, [3.0])
    assert raises(NotImplementedError,
                  lambda: loop_metric('random', synth, loop, 0, np.zeros(1)))
