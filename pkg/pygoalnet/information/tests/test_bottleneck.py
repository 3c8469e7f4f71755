import itertools
import numpy as np
from pygoalnet import (
    IbResult, ib_solve, ib_curve, ib_lagrangian, mutual_information,
    DiscreteJoint, DomainError, InvalidDistribution, ParseError)
from pygoalnet.utils.raises_util import raises

COPY = [[0.5, 0.0], [0.0, 0.5]]

def _random_joint(rng, shape):
    p = rng.random(shape)
    return p/p.sum()

def _best_deterministic(joint, T_size, beta):
    nx = joint.shape[0]
    best = np.inf
    for labels in itertools.product(range(T_size), repeat=nx):
        encoder = np.zeros((nx, T_size))
        encoder[np.arange(nx), labels] = 1.0
        best = min(best, ib_lagrangian(joint, encoder, beta))
    return best

def test_ib_lagrangian():
    assert ib_lagrangian(COPY, [[1, 0], [0, 1]], 2.0) == -1.0
    assert ib_lagrangian(COPY, [[1, 0], [1, 0]], 2.0) == 0.0
    assert ib_lagrangian(COPY, [[0.5, 0.5], [0.5, 0.5]], 5.0) == 0.0
    assert raises(ParseError, lambda: ib_lagrangian(COPY, [[1, 0], [1]], 1.0))

def test_ib_solve_zero_beta():
    rng = np.random.default_rng(83)
    for _ in range(10):
        joint = _random_joint(rng, (3, 3))
        result = ib_solve(joint, 2, 0.0, restarts=3)
        assert result.I_xt <= 1e-9
        assert abs(result.lagrangian - result.I_xt) < 1e-12

def test_ib_solve_copy():
    encoder, I_xt, I_ty, L = ib_solve(COPY, 2, 10.0)
    assert abs(I_xt - 1.0) < 1e-6
    assert abs(I_ty - 1.0) < 1e-6
    assert abs(L - (I_xt - 10.0*I_ty)) < 1e-12
    assert np.allclose(encoder.sum(axis=1), 1.0)
    result = ib_solve(DiscreteJoint(COPY), 2, 10.0)
    assert abs(result.I_ty - 1.0) < 1e-6
    assert str(result) == "(I_xt=1, I_ty=1)"

def test_ib_solve_data_processing():
    rng = np.random.default_rng(89)
    for _ in range(100):
        joint = _random_joint(rng, (3, 3))
        beta = 20.0*rng.random()
        result = ib_solve(joint, 2, beta, restarts=2, rng=rng)
        assert result.I_ty <= mutual_information(joint) + 1e-9
        assert result.I_ty <= result.I_xt + 1e-9
        assert np.all(result.encoder >= 0.0)
        assert np.allclose(result.encoder.sum(axis=1), 1.0)

def test_ib_solve_beats_deterministic_encoders():
    rng = np.random.default_rng(97)
    for _ in range(20):
        nx, ny = rng.integers(2, 5, size=2)
        T_size = int(rng.integers(2, 4))
        joint = _random_joint(rng, (nx, ny))
        beta = 10.0*rng.random()
        result = ib_solve(joint, T_size, beta, restarts=3)
        assert result.lagrangian <= _best_deterministic(joint, T_size,
                                                        beta) + 1e-6

def test_ib_solve_reproducible():
    joint = _random_joint(np.random.default_rng(101), (4, 3))
    first = ib_solve(joint, 3, 4.0, rng=7)
    second = ib_solve(joint, 3, 4.0, rng=7)
    assert np.array_equal(first.encoder, second.encoder)

def test_ib_solve_errors():
    assert raises(InvalidDistribution, lambda: ib_solve([[0.5, 0.6]], 2, 1.0))
    assert raises(DomainError, lambda: ib_solve(COPY, 0, 1.0))
    assert raises(DomainError, lambda: ib_solve(COPY, 2, -1.0))
    assert raises(DomainError, lambda: ib_solve(COPY, 2, 1.0, restarts=-1))

def test_ib_curve():
    joint = [[0.4, 0.1], [0.1, 0.4]]
    curve = ib_curve(joint, 2, [0.0, 1.0, 10.0])
    assert [beta for beta, _ in curve] == [0.0, 1.0, 10.0]
    relevance = [result.I_ty for _, result in curve]
    assert relevance[0] <= 1e-9
    assert all(b >= a - 1e-9 for a, b in zip(relevance, relevance[1:]))
    assert 0.0 < relevance[-1] <= mutual_information(joint) + 1e-9
    assert all(isinstance(result, IbResult) for _, result in curve)
