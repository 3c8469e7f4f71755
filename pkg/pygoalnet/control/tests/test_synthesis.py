import math
import numpy as np
from scipy import linalg
from pygoalnet import (
    LoopSpec, solve_control_dare, solve_filter_riccati, gamma_infinity,
    cov_propagate, synthesize_loop, synthesize, CovarianceLadder, Scenario,
    NoConvergence, DomainError)
from pygoalnet.control.synthesis import _measurement_update, _time_update
from pygoalnet.utils.misc_util import _min_eig
from pygoalnet.utils.raises_util import raises

GOLDEN = (1 + math.sqrt(5))/2

def _random_loop(rng, n):
    """
    Fully actuated and fully observed loops are stabilizable
    and detectable for any A.
    """
    A = rng.standard_normal((n, n))
    B = np.eye(n) + 0.1*rng.standard_normal((n, n))
    C = np.eye(n) + 0.1*rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    W = G @ G.T + 0.1*np.eye(n)
    return LoopSpec(A, B, C, W, np.eye(n), np.eye(n), np.eye(n))

def test_solve_control_dare():
    Pi, L = solve_control_dare(1, 1, 1, 1)
    assert abs(Pi[0, 0] - GOLDEN) < 1e-8
    assert abs(L[0, 0] + (GOLDEN - 1)) < 1e-8
    Pi, L = solve_control_dare(0.5, 0, 1, 1)
    assert abs(Pi[0, 0] - 4/3) < 1e-8 and L[0, 0] == 0.0
    Pi, _ = solve_control_dare(np.eye(2), np.eye(2), np.eye(2), np.eye(2))
    assert np.allclose(Pi, GOLDEN*np.eye(2), atol=1e-8)
    assert raises(NoConvergence, lambda: solve_control_dare(2, 0, 1, 1,
                                                            max_iter=50))
    assert raises(DomainError, lambda: solve_control_dare(1, 1, 1, 1, tol=0))

def test_solve_control_dare_residual():
    rng = np.random.default_rng(11)
    for trial in range(50):
        loop = _random_loop(rng, 1 + trial % 4)
        A, B, Q, R = loop.A, loop.B, loop.Q, loop.R
        Pi, L = solve_control_dare(A, B, Q, R)
        S = B.T @ Pi @ B + R
        residual = A.T @ Pi @ A + Q - \
            A.T @ Pi @ B @ np.linalg.solve(S, B.T @ Pi @ A) - Pi
        assert np.linalg.norm(residual) <= 1e-6*(1 + np.linalg.norm(Pi))
        assert _min_eig(Pi) >= -1e-9

def test_solve_control_dare_matches_scipy():
    rng = np.random.default_rng(17)
    for trial in range(20):
        loop = _random_loop(rng, 1 + trial % 4)
        Pi, _ = solve_control_dare(loop.A, loop.B, loop.Q, loop.R)
        expected = linalg.solve_discrete_are(loop.A, loop.B, loop.Q, loop.R)
        assert np.linalg.norm(Pi - expected) <= \
            1e-6*np.linalg.norm(expected)

def test_solve_control_dare_initial_point():
    rng = np.random.default_rng(5)
    for _ in range(10):
        loop = _random_loop(rng, 3)
        n = loop.n
        results = [solve_control_dare(loop.A, loop.B, loop.Q, loop.R,
                                      init=init)[0]
                   for init in (None, np.eye(n), 10*np.eye(n))]
        for Pi in results[1:]:
            assert np.linalg.norm(Pi - results[0]) <= \
                1e-6*np.linalg.norm(results[0])

def test_solve_filter_riccati():
    P, K = solve_filter_riccati(1, 1, 1, 1)
    assert abs(P[0, 0] - (GOLDEN - 1)) < 1e-8
    assert abs(K[0, 0] - (GOLDEN - 1)) < 1e-8
    P, K = solve_filter_riccati(1, 1, 1, 0)
    assert abs(P[0, 0]) < 1e-12 and abs(K[0, 0] - 1) < 1e-12
    P, K = solve_filter_riccati(0.5, 0, 1, 1)
    assert abs(P[0, 0] - 4/3) < 1e-8 and K[0, 0] == 0.0

def test_filter_residual_and_duality():
    rng = np.random.default_rng(13)
    for trial in range(50):
        loop = _random_loop(rng, 1 + trial % 4)
        P, K = solve_filter_riccati(loop.A, loop.C, loop.W, loop.V)
        X = _time_update(P, loop.A, loop.W)
        again, _ = _measurement_update(X, loop.C, loop.V)
        assert np.linalg.norm(again - P) <= 1e-6*(1 + np.linalg.norm(P))
        Pi, _ = solve_control_dare(loop.A.T, loop.C.T, loop.W, loop.V)
        assert np.linalg.norm(Pi - X) <= 1e-6*np.linalg.norm(X)

def test_measurement_update_contracts():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n, p = rng.integers(1, 5), rng.integers(1, 4)
        G = rng.standard_normal((n, n))
        X = G @ G.T
        C = rng.standard_normal((p, n))
        H = rng.standard_normal((p, p))
        V = H @ H.T + 0.1*np.eye(p)
        g, _ = _measurement_update(X, C, V)
        assert _min_eig(X - g) >= -1e-9

def test_gamma_infinity():
    Pi, L = solve_control_dare(1, 1, 1, 1)
    assert abs(gamma_infinity(Pi, L, 1, 1)[0, 0] - 1) < 1e-9
    assert np.all(gamma_infinity(Pi, 0, 1, 1) == 0.0)
    Pi, L = solve_control_dare(np.eye(2), np.eye(2), np.eye(2), np.eye(2))
    assert np.allclose(gamma_infinity(Pi, L, np.eye(2), np.eye(2)), np.eye(2),
                       atol=1e-9)

def test_cov_propagate():
    assert cov_propagate(0.25, 0, 1, 1).tolist() == [[0.25]]
    assert cov_propagate(0, 3, 1, 1).tolist() == [[3.0]]
    assert cov_propagate(0, 2, 2, 1).tolist() == [[5.0]]
    assert raises(DomainError, lambda: cov_propagate(0, -1, 1, 1))

def test_covariance_chain_monotone():
    rng = np.random.default_rng(19)
    for trial in range(20):
        loop = _random_loop(rng, 1 + trial % 4)
        synth = synthesize_loop(loop)
        ladder = CovarianceLadder(synth, loop)
        costs = []
        for t in range(21):
            step = ladder[t + 1] - ladder[t]
            assert _min_eig(step) >= -1e-9*(1 + np.linalg.norm(ladder[t]))
            costs.append(np.trace(synth.Gamma_inf @ ladder[t]))
        assert all(b >= a - 1e-9*(1 + abs(a)) for a, b in zip(costs, costs[1:]))

def test_CovarianceLadder():
    loop = LoopSpec(2, 1, 1, 1, 1, 1, 1)
    synth = synthesize_loop(loop)
    ladder = CovarianceLadder(synth, loop)
    assert len(ladder) == 1
    assert np.allclose(ladder[4], cov_propagate(synth.P_bar, 4, 2, 1))
    assert len(ladder) == 5
    assert raises(IndexError, lambda: ladder[-1])

def test_synthesize():
    loop = LoopSpec(1, 1, 1, 1, 1, 1, 1)
    synth = synthesize_loop(loop)
    assert abs(synth.stationary_cost(loop) - math.sqrt(5)) < 1e-8
    assert raises(ValueError, lambda: synth.P_bar.__setitem__((0, 0), 1.0))
    scenario = Scenario([loop, LoopSpec(1.2, 1, 1, 1, 1, 1, 1)], 1,
                        [[1], [1]], 10, 0, 'coil')
    synths = synthesize(scenario)
    assert len(synths) == 2
    assert np.array_equal(synths[0].Pi_inf, synth.Pi_inf)
