"""
Memoryless Bernoulli packet-drop channels.
"""
import numpy as np
from pygoalnet.utils.misc_util import (
    _check_type, _as_matrix, DimensionError, DomainError)

__all__ = [
    'ChannelOutcome',
    'realize'
]

class ChannelOutcome(object):
    """
    Represents the result of one slot of transmissions.

    Parameters
    ==========

    gamma: numpy.ndarray
        N x M binary matrix of successful links.

    Note
    ====

    The following are the data members of the class:

    theta: numpy.ndarray
        Boolean N-vector, True for the sensors whose packet
        reached the controller. ACK/NACK feedback is error
        free, so sensor and controller both observe gamma.
    """

    __slots__ = ['gamma', 'theta']

    def __new__(cls, gamma):
        obj = object.__new__(cls)
        obj.gamma = np.asarray(gamma, dtype=np.int8)
        obj.theta = obj.gamma.sum(axis=1) == 1
        return obj

    def __str__(self):
        return str((self.gamma.tolist(), self.theta.tolist()))

def realize(delta, q_bar, rng):
    """
    Draws the link outcomes of a feasible decision.

    Parameters
    ==========

    delta: ScheduleDecision or array_like
    q_bar: array_like
        N x M success probabilities.
    rng: numpy.random.Generator
        Dedicated channel stream; exactly one uniform draw is
        consumed per scheduled link, in row-major order.

    Returns
    =======

    outcome: ChannelOutcome

    Examples
    ========

    >>> import numpy as np
    >>> from pygoalnet import realize
    >>> out = realize([[1, 0], [0, 1]], [[1, 1], [0, 0]],
    ...               np.random.default_rng(0))
    >>> out.theta.tolist()
    [True, False]
    """
    from pygoalnet.networks.scheduling import ScheduleDecision, is_feasible
    if _check_type(delta, ScheduleDecision):
        delta = delta.delta
    delta = np.asarray(delta)
    q_bar = _as_matrix(q_bar, 'q_bar')
    if delta.shape != q_bar.shape:
        raise DimensionError("delta has shape %s but q_bar has shape %s."
                             %(delta.shape, q_bar.shape))
    if not is_feasible(delta):
        raise DomainError("Channel realization needs a feasible decision.")
    gamma = np.zeros(delta.shape, dtype=np.int8)
    for i, j in zip(*np.nonzero(delta)):
        if rng.random() < q_bar[i, j]:
            gamma[i, j] = 1
    return ChannelOutcome(gamma)
