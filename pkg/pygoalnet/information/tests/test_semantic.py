import math
import numpy as np
from pygoalnet import (
    TruthTable, semantic_mi, semantic_distortion, mutual_information,
    DiscreteJoint, DimensionError, DomainError, InvalidDistribution)
from pygoalnet.utils.raises_util import raises

def test_TruthTable():
    tt = TruthTable([[1.0, 0.5], [0.0, 1.0]], [0.25, 0.75])
    assert tt.logical_probability().tolist() == [0.25, 0.875]
    assert str(tt) == "[[1.0, 0.5], [0.0, 1.0]]"
    assert raises(DomainError, lambda: TruthTable([[1.5, 0.0]], [1.0]))
    assert raises(DomainError, lambda: TruthTable([[-0.1, 1.0]], [1.0]))
    assert raises(DomainError,
                  lambda: TruthTable([[0.0, 0.0], [1.0, 1.0]], [0.5, 0.5]))
    assert raises(DimensionError,
                  lambda: TruthTable([[1.0, 1.0]], [0.5, 0.5]))
    assert raises(InvalidDistribution,
                  lambda: TruthTable([[1.0, 1.0]], [0.5]))

def test_semantic_mi_reduces_to_mutual_information():
    rng = np.random.default_rng(103)
    for _ in range(100):
        nx, ny = rng.integers(1, 6, size=2)
        p = rng.random((nx, ny))
        p /= p.sum()
        p_x = p.sum(axis=1)
        tt = TruthTable(p/p_x[:, None], p_x)
        assert abs(semantic_mi(tt, p) - mutual_information(p)) < 1e-12

def test_semantic_mi():
    tt = TruthTable([[1.0, 0.5], [0.5, 1.0]], [0.5, 0.5])
    diagonal = [[0.5, 0.0], [0.0, 0.5]]
    assert abs(semantic_mi(tt, diagonal) - math.log2(4/3)) < 1e-12
    assert semantic_mi(tt, DiscreteJoint(diagonal)) == \
        semantic_mi(tt, diagonal)
    constant = TruthTable([[0.3, 0.9], [0.3, 0.9]], [0.5, 0.5])
    assert semantic_mi(constant, [[0.1, 0.4], [0.2, 0.3]]) == 0.0
    sharp = TruthTable([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5])
    assert raises(DomainError,
                  lambda: semantic_mi(sharp, [[0.25, 0.25], [0.25, 0.25]]))
    assert raises(DimensionError,
                  lambda: semantic_mi(tt, [[0.5, 0.25, 0.25]]))
    assert raises(TypeError, lambda: semantic_mi([[1.0]], [[1.0]]))

def test_semantic_distortion():
    tt = TruthTable([[1.0, 0.5, 0.0], [0.25, 1.0, 1.0]], [0.5, 0.5])
    d = semantic_distortion(tt)
    assert d.tolist() == [[0.0, 1.0, math.inf], [2.0, 0.0, 0.0]]
    assert raises(TypeError, lambda: semantic_distortion([[1.0]]))
