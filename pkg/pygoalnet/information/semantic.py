"""
Semantic mutual information under a truth function.
"""
import numpy as np
from pygoalnet.information.shannon import DiscreteJoint, _as_distribution
from pygoalnet.utils.misc_util import (
    _check_type, _as_matrix, DimensionError, DomainError)

__all__ = [
    'TruthTable',
    'semantic_mi',
    'semantic_distortion'
]

class TruthTable(object):
    """
    Represents a truth function T(y|x) with a prior over X.

    Parameters
    ==========

    T: array_like
        |X| x |Y| table with entries in [0, 1]. Rows need not
        sum to 1 but may not be all zero.
    prior: array_like
        Distribution of X.

    Examples
    ========

    >>> from pygoalnet import TruthTable
    >>> tt = TruthTable([[1.0, 0.5], [0.5, 1.0]], [0.5, 0.5])
    >>> tt.logical_probability().tolist()
    [0.75, 0.75]
    """

    __slots__ = ['T', 'prior']

    def __new__(cls, T, prior):
        obj = object.__new__(cls)
        obj.T = _as_matrix(T, 'T')
        if np.any(obj.T < 0.0) or np.any(obj.T > 1.0):
            raise DomainError("Truth values must lie in [0, 1].")
        if np.any(obj.T.max(axis=1) <= 0.0):
            raise DomainError("Every row of T needs a positive truth value.")
        obj.prior = _as_distribution(prior, "prior", 1)
        if obj.prior.size != obj.T.shape[0]:
            raise DimensionError("prior has %s entries for %s rows of T."
                                 %(obj.prior.size, obj.T.shape[0]))
        return obj

    def logical_probability(self):
        """
        T(y) = sum_x p(x) T(y|x).
        """
        return self.prior @ self.T

    def __str__(self):
        return str(self.T.tolist())

def semantic_mi(tt, joint):
    """
    Computes sum p(x, y) log2(T(y|x)/T(y)).

    Parameters
    ==========

    tt: TruthTable
    joint: DiscreteJoint or array_like
        p(x, y) over the same alphabets as tt.

    Raises
    ======

    DomainError
        When positive joint mass meets a zero truth value.

    Examples
    ========

    >>> from pygoalnet import TruthTable, semantic_mi
    >>> tt = TruthTable([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5])
    >>> semantic_mi(tt, [[0.5, 0.0], [0.0, 0.5]])
    1.0
    """
    if not _check_type(tt, TruthTable):
        raise TypeError("Expected a TruthTable, got %s."%(type(tt)))
    if _check_type(joint, DiscreteJoint):
        joint = joint.p
    p = _as_distribution(joint, "joint", 2)
    if p.shape != tt.T.shape:
        raise DimensionError("joint has shape %s but T has shape %s."
                             %(p.shape, tt.T.shape))
    ty = np.broadcast_to(tt.logical_probability(), p.shape)
    mask = p > 0.0
    if np.any(tt.T[mask] <= 0.0) or np.any(ty[mask] <= 0.0):
        raise DomainError("Positive joint mass on a zero truth value.")
    return float(np.sum(p[mask]*np.log2(tt.T[mask]/ty[mask])))

def semantic_distortion(tt):
    """
    The distortion -log2 T(y|x); +inf where T(y|x) = 0.

    Examples
    ========

    >>> from pygoalnet import TruthTable, semantic_distortion
    >>> semantic_distortion(TruthTable([[1.0, 0.5]], [1.0])).tolist()
    [[0.0, 1.0]]
    """
    if not _check_type(tt, TruthTable):
        raise TypeError("Expected a TruthTable, got %s."%(type(tt)))
    out = np.full(tt.T.shape, np.inf)
    positive = tt.T > 0.0
    out[positive] = -np.log2(tt.T[positive]) + 0.0
    return out
