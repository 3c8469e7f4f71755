"""
Shannon quantities over finite probability tables and the
Gaussian rate-distortion function. All results are in bits.
"""
import math
import numpy as np
from pygoalnet.utils.misc_util import (
    _as_float_array, _check_type, DimensionError, DomainError,
    InvalidDistribution)

__all__ = [
    'DiscreteJoint',
    'entropy',
    'binary_entropy',
    'joint_entropy',
    'conditional_entropy',
    'kl_divergence',
    'mutual_information',
    'conditional_mi',
    'gaussian_rd',
    'gaussian_rd_parallel'
]

MASS_TOL = 1e-12

def _as_distribution(p, name="distribution", ndim=None):
    try:
        p = np.asarray(p, dtype=float)
    except (TypeError, ValueError):
        raise InvalidDistribution("%s is not a rectangular numeric table."
                                  %(name))
    if ndim is not None and p.ndim != ndim:
        raise DimensionError("%s must have %s axes, got %s."
                             %(name, ndim, p.ndim))
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise InvalidDistribution("%s must be non-empty and finite."%(name))
    if np.any(p < 0.0):
        raise InvalidDistribution("%s has negative entries."%(name))
    if abs(float(p.sum()) - 1.0) > MASS_TOL:
        raise InvalidDistribution("%s sums to %.17g instead of 1."
                                  %(name, float(p.sum())))
    return p

def _plogp_ratio(p, q):
    """
    Elementwise p*log2(p/q) with 0*log(0/q) = 0; p > 0 = q
    is a DomainError.
    """
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float),
                               np.asarray(q, dtype=float))
    mask = p > 0.0
    if np.any(q[mask] <= 0.0):
        raise DomainError("Positive mass against zero reference mass.")
    out = np.zeros(p.shape)
    out[mask] = p[mask]*np.log2(p[mask]/q[mask])
    return out

class DiscreteJoint(object):
    """
    Represents a joint probability table over two or
    three finite alphabets.

    Parameters
    ==========

    p: array_like
        Non-negative table summing to 1 within 1e-12.

    Raises
    ======

    InvalidDistribution
        When p is not a distribution.

    Examples
    ========

    >>> from pygoalnet import DiscreteJoint
    >>> j = DiscreteJoint([[0.5, 0.0], [0.0, 0.5]])
    >>> j.marginal(0).tolist()
    [0.5, 0.5]
    """

    __slots__ = ['p']

    def __new__(cls, p):
        obj = object.__new__(cls)
        obj.p = _as_distribution(p, "joint")
        if obj.p.ndim not in (2, 3):
            raise DimensionError("A joint needs 2 or 3 axes, got %s."
                                 %(obj.p.ndim))
        return obj

    @property
    def shape(self):
        return self.p.shape

    def marginal(self, *axes):
        """
        Marginal over the kept axes, in their original order.
        """
        drop = tuple(a for a in range(self.p.ndim) if a not in axes)
        return self.p.sum(axis=drop)

    def __str__(self):
        return str(self.p.tolist())

def _joint(joint, ndim):
    if _check_type(joint, DiscreteJoint):
        joint = joint.p
    return _as_distribution(joint, "joint", ndim)

def entropy(p):
    """
    Shannon entropy -sum p log2 p.

    Examples
    ========

    >>> from pygoalnet import entropy
    >>> entropy([0.5, 0.25, 0.25])
    1.5
    """
    p = _as_distribution(p).ravel()
    nz = p[p > 0.0]
    return float(-np.sum(nz*np.log2(nz))) + 0.0

def binary_entropy(p):
    """
    Entropy of a Bernoulli(p) variable.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("p must lie in [0, 1], got %s."%(p))
    return entropy([p, 1.0 - p])

def joint_entropy(joint):
    return entropy(_joint(joint, None))

def conditional_entropy(joint):
    """
    H(X|Y) for a table with X along rows and Y along columns.
    """
    p = _joint(joint, 2)
    return joint_entropy(p) - entropy(p.sum(axis=0))

def kl_divergence(p, q):
    """
    Relative entropy D(p||q) in bits.

    Raises
    ======

    DomainError
        When p puts mass where q has none.
    """
    p = _as_distribution(p, "p")
    q = _as_distribution(q, "q")
    if p.shape != q.shape:
        raise DimensionError("p and q have shapes %s and %s."
                             %(p.shape, q.shape))
    return float(np.sum(_plogp_ratio(p, q)))

def mutual_information(joint):
    """
    I(X;Y) for a table with X along rows and Y along columns.

    Examples
    ========

    >>> from pygoalnet import mutual_information
    >>> mutual_information([[0.5, 0.0], [0.0, 0.5]])
    1.0
    """
    p = _joint(joint, 2)
    px, py = p.sum(axis=1), p.sum(axis=0)
    return max(float(np.sum(_plogp_ratio(p, np.outer(px, py)))), 0.0)

def conditional_mi(joint3):
    """
    I(X;Y|Z) for a table indexed [x, y, z]. Cells whose
    conditioning value has no mass contribute 0.

    Examples
    ========

    >>> from pygoalnet import conditional_mi
    >>> import numpy as np
    >>> p = np.zeros((2, 2, 2))
    >>> for x in (0, 1):
    ...     for y in (0, 1):
    ...         p[x, y, x ^ y] = 0.25
    >>> conditional_mi(p)
    1.0
    """
    p = _joint(joint3, 3)
    pz = p.sum(axis=(0, 1))
    pxz = p.sum(axis=1)
    pyz = p.sum(axis=0)
    reference = pxz[:, None, :]*pyz[None, :, :]
    scaled = np.divide(reference, pz[None, None, :],
                       out=np.zeros_like(reference), where=pz > 0.0)
    return max(float(np.sum(_plogp_ratio(p, scaled))), 0.0)

def gaussian_rd(variance, D):
    """
    Rate-distortion function of a Gaussian source under
    squared error: 0.5 log2(variance/D) if D <= variance,
    else 0.

    Examples
    ========

    >>> from pygoalnet import gaussian_rd
    >>> gaussian_rd(1.0, 0.25), gaussian_rd(1.0, 2.0)
    (1.0, 0.0)
    """
    if not variance > 0.0 or not D > 0.0:
        raise DomainError("Variance and distortion must be positive, got "
                          "%s and %s."%(variance, D))
    if D > variance:
        return 0.0
    return 0.5*math.log2(variance/D)

def gaussian_rd_parallel(variances, D):
    """
    Reverse water-filling over independent Gaussian components.

    Parameters
    ==========

    variances: array_like
        Positive component variances.
    D: float
        Total squared-error budget.

    Returns
    =======

    (rate, distortions)
        Total rate in bits and the per-component distortion
        min(level, variance) with the water level chosen so the
        distortions sum to D.

    Examples
    ========

    >>> from pygoalnet import gaussian_rd_parallel
    >>> rate, d = gaussian_rd_parallel([4.0, 1.0], 1.0)
    >>> rate, d.tolist()
    (2.0, [0.5, 0.5])
    """
    variances = _as_float_array(variances, "variances")
    if variances.ndim != 1 or variances.size == 0 or \
        not np.all(variances > 0.0):
        raise DomainError("Variances must be a non-empty positive vector.")
    if not D > 0.0:
        raise DomainError("Distortion must be positive, got %s."%(D))
    if D >= variances.sum():
        return 0.0, variances.copy()
    ordered = np.sort(variances)
    level = D/variances.size
    for k in range(variances.size):
        level = (D - ordered[:k].sum())/(variances.size - k)
        if level <= ordered[k]:
            break
    distortions = np.minimum(level, variances)
    rate = float(np.sum(0.5*np.log2(variances/distortions)))
    return rate, distortions
