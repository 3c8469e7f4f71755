import numpy as np
from pygoalnet import (
    DiscreteJoint, entropy, binary_entropy, joint_entropy, conditional_entropy,
    kl_divergence, mutual_information, conditional_mi, gaussian_rd,
    gaussian_rd_parallel, DimensionError, DomainError, InvalidDistribution,
    ParseError)
from pygoalnet.utils.raises_util import raises

def _random_joint(rng, shape):
    p = rng.random(shape)
    return p/p.sum()

def test_entropy():
    assert entropy([0.25]*4) == 2.0
    assert entropy([0.0, 1.0, 0.0]) == 0.0
    assert entropy([0.5, 0.25, 0.25]) == 1.5
    assert raises(InvalidDistribution, lambda: entropy([0.5, 0.6]))
    assert raises(InvalidDistribution, lambda: entropy([1.5, -0.5]))
    assert raises(InvalidDistribution, lambda: entropy([]))
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert raises(DomainError, lambda: binary_entropy(1.5))

def test_joint_and_conditional_entropy():
    diagonal = [[0.5, 0.0], [0.0, 0.5]]
    assert joint_entropy(diagonal) == 1.0
    assert conditional_entropy(diagonal) == 0.0
    product = np.outer([0.5, 0.5], [0.25, 0.75])
    assert abs(conditional_entropy(product) - 1.0) < 1e-12

def test_kl_divergence():
    assert kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == 1.0
    assert raises(DomainError, lambda: kl_divergence([0.5, 0.5], [1.0, 0.0]))
    assert raises(DimensionError, lambda: kl_divergence([1.0], [0.5, 0.5]))

def test_mutual_information():
    assert mutual_information(np.outer([0.3, 0.7], [0.4, 0.6])) < 1e-12
    assert mutual_information([[0.5, 0.0], [0.0, 0.5]]) == 1.0
    bsc = [[0.45, 0.05], [0.05, 0.45]]
    assert abs(mutual_information(bsc) - (1 - binary_entropy(0.1))) < 1e-9
    assert abs(mutual_information(bsc) - 0.5310) < 1e-4
    assert mutual_information(DiscreteJoint(bsc)) == mutual_information(bsc)
    assert raises(DimensionError, lambda: mutual_information([0.5, 0.5]))

def test_mutual_information_bounds():
    rng = np.random.default_rng(71)
    for _ in range(100):
        p = _random_joint(rng, tuple(rng.integers(1, 6, size=2)))
        I = mutual_information(p)
        assert abs(I - mutual_information(p.T)) < 1e-10
        assert -1e-10 <= I <= min(entropy(p.sum(axis=1)),
                                  entropy(p.sum(axis=0))) + 1e-10

def test_conditional_mi():
    xor = np.zeros((2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            xor[x, y, x ^ y] = 0.25
    assert abs(mutual_information(xor.sum(axis=2))) < 1e-10
    assert abs(conditional_mi(xor) - 1.0) < 1e-10
    copy = np.zeros((2, 2, 2))
    for x in (0, 1):
        for z in (0, 1):
            copy[x, x, z] = 0.25
    assert abs(conditional_mi(copy) - 1.0) < 1e-12
    same = np.zeros((2, 2, 2))
    same[0, 0, 0] = same[1, 1, 1] = 0.5
    assert conditional_mi(same) == 0.0
    assert raises(DimensionError, lambda: conditional_mi([[0.5, 0.5]]))

def test_chain_rule():
    rng = np.random.default_rng(73)
    for _ in range(100):
        n1, n2, ny = rng.integers(1, 4, size=3)
        p = _random_joint(rng, (n1, n2, ny))
        whole = mutual_information(p.reshape(n1*n2, ny))
        first = mutual_information(p.sum(axis=1))
        second = conditional_mi(p.transpose(1, 2, 0))
        assert abs(whole - (first + second)) < 1e-10

def test_DiscreteJoint():
    j = DiscreteJoint(np.full((2, 3, 2), 1/12))
    assert j.shape == (2, 3, 2)
    assert np.allclose(j.marginal(1), [1/3]*3)
    assert np.allclose(j.marginal(0, 2), np.full((2, 2), 0.25))
    assert raises(DimensionError, lambda: DiscreteJoint([0.5, 0.5]))
    assert raises(InvalidDistribution, lambda: DiscreteJoint([[0.5, 0.6]]))

def test_gaussian_rd():
    assert gaussian_rd(1.0, 0.25) == 1.0
    assert gaussian_rd(1.0, 2.0) == 0.0
    assert gaussian_rd(4.0, 1.0) == 1.0
    assert raises(DomainError, lambda: gaussian_rd(1.0, 0.0))
    assert raises(DomainError, lambda: gaussian_rd(-1.0, 1.0))

def test_gaussian_rd_parallel():
    rate, d = gaussian_rd_parallel([4.0, 1.0], 3.0)
    assert rate == 0.5 and d.tolist() == [2.0, 1.0]
    rate, d = gaussian_rd_parallel([4.0, 1.0], 6.0)
    assert rate == 0.0 and d.tolist() == [4.0, 1.0]
    rate, _ = gaussian_rd_parallel([1.0], 0.25)
    assert rate == gaussian_rd(1.0, 0.25)
    assert raises(ParseError, lambda: gaussian_rd_parallel([1.0, "x"], 1.0))
    rng = np.random.default_rng(79)
    for _ in range(20):
        variances = 0.1 + rng.random(5)
        D = rng.random()*variances.sum()
        rate, d = gaussian_rd_parallel(variances, D)
        assert abs(d.sum() - D) < 1e-12
        assert np.all(d <= variances)
    assert raises(DomainError, lambda: gaussian_rd_parallel([1.0, 0.0], 0.5))
    assert raises(DomainError, lambda: gaussian_rd_parallel([1.0], 0.0))
