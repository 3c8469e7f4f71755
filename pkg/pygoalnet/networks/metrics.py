"""
Goal-oriented priority metrics (CoIL, VoI, AoI) and the
per-link priority weights built from them.
"""
import numpy as np
from pygoalnet.utils.misc_util import (
    _check_type, _as_matrix, _as_vector, DomainError, DimensionError,
    EmptyTrace)

__all__ = [
    'AoiTracker',
    'PriorityMatrix',
    'coil',
    'voi',
    'aoi_update',
    'aoi_summary',
    'aoi_area_ratio',
    'priority_matrix',
    'loop_metric'
]

class AoiTracker(object):
    """
    Tracks the age of information of one loop in slots.

    Parameters
    ==========

    age: int
        Optional, the age at the start. By default, 0.

    Note
    ====

    The following are the data members of the class:

    ages_trace: list
        The age recorded at the end of every slot.
    peaks: list
        The age in the slot immediately preceding each reception.

    Examples
    ========

    >>> from pygoalnet import AoiTracker, aoi_update
    >>> tracker = AoiTracker()
    >>> for received in (False, False, True):
    ...     _ = aoi_update(tracker, received)
    >>> tracker.ages_trace, tracker.peaks
    ([1, 2, 0], [2])
    """

    __slots__ = ['age', 'ages_trace', 'peaks']

    def __new__(cls, age=0):
        if not _check_type(age, int) or age < 0:
            raise DomainError("Age must be a non-negative integer, got %s."
                              %(age,))
        obj = object.__new__(cls)
        obj.age, obj.ages_trace, obj.peaks = age, [], []
        return obj

    def __len__(self):
        return len(self.ages_trace)

    def __str__(self):
        return str((self.age, len(self.ages_trace), len(self.peaks)))

class PriorityMatrix(object):
    """
    Represents the N x M per-link priority weights.

    Parameters
    ==========

    m: array_like
        Non-negative finite weights.
    """

    __slots__ = ['m']

    def __new__(cls, m):
        obj = object.__new__(cls)
        m = _as_matrix(m, 'priority matrix')
        if np.any(m < 0.0):
            raise DomainError("Priority weights must be non-negative.")
        obj.m = m
        return obj

    @property
    def shape(self):
        return self.m.shape

    def objective(self, delta):
        """
        Returns the sum of weights selected by delta.
        """
        return float(np.sum(self.m*np.asarray(delta)))

    def __str__(self):
        return str(self.m.tolist())

def coil(synth, t_prev, loop, ladder=None):
    """
    Cost of information loss: tr(Gamma [h^{t+1}(P_bar) - P_bar])
    with t the staleness at the end of the previous slot.

    Parameters
    ==========

    synth: LoopSynthesis
    t_prev: int
    loop: LoopSpec
    ladder: CovarianceLadder
        Optional, a cache of h^t(P_bar) for this loop.

    Examples
    ========

    >>> from pygoalnet import LoopSpec, synthesize_loop, coil
    >>> loop = LoopSpec(1, 1, 1, 1, 0, 1, 1)
    >>> synth = synthesize_loop(loop)
    >>> round(coil(synth, 0, loop), 9), round(coil(synth, 1, loop), 9)
    (1.0, 2.0)
    """
    if t_prev < 0:
        raise DomainError("t_prev must be non-negative, got %s."%(t_prev))
    if ladder is not None:
        P_next = ladder[t_prev + 1]
    else:
        from pygoalnet.control.synthesis import cov_propagate
        P_next = cov_propagate(synth.P_bar, t_prev + 1, loop.A, loop.W)
    value = float(np.trace(synth.Gamma_inf @ (P_next - synth.P_bar)))
    return max(value, 0.0)

def voi(synth, e_check):
    """
    Value of information: the quadratic form e' Gamma e of
    the innovation accumulator.

    Examples
    ========

    >>> from pygoalnet import LoopSpec, synthesize_loop, voi
    >>> synth = synthesize_loop(LoopSpec(1, 1, 1, 1, 0, 1, 1))
    >>> round(voi(synth, [3.0]), 9)
    9.0
    """
    e = _as_vector(e_check, 'e_check', synth.Gamma_inf.shape[0])
    return max(float(e @ synth.Gamma_inf @ e), 0.0)

def aoi_update(tracker, received):
    """
    Advances the tracker by one slot, in place.

    Returns
    =======

    tracker: AoiTracker
        The same object, for chaining.
    """
    if received:
        tracker.peaks.append(tracker.age)
        tracker.age = 0
    else:
        tracker.age += 1
    tracker.ages_trace.append(tracker.age)
    return tracker

def aoi_summary(tracker):
    """
    Returns (AAoI, PAoI); PAoI is None when no reception
    happened.

    Raises
    ======

    EmptyTrace
        When the tracker has not seen any slot.
    """
    if len(tracker.ages_trace) == 0:
        raise EmptyTrace("AoI summary requested for an empty trace.")
    aaoi = float(np.mean(tracker.ages_trace))
    paoi = float(np.mean(tracker.peaks)) if tracker.peaks else None
    return aaoi, paoi

def aoi_area_ratio(tracker):
    """
    Computes AAoI from the sawtooth decomposition of the age
    trace: the summed area under every tooth divided by the
    summed inter-reception lengths.
    """
    trace = tracker.ages_trace
    if len(trace) == 0:
        raise EmptyTrace("AoI area requested for an empty trace.")
    area, length, start = 0, 0, 0
    for k in range(1, len(trace) + 1):
        if k == len(trace) or trace[k] == 0:
            base, span = trace[start], k - start
            if trace[k - 1] != base + span - 1:
                raise DomainError("Age trace is not a sawtooth between "
                                  "slots %s and %s."%(start, k - 1))
            area += span*base + span*(span - 1)//2
            length += span
            start = k
    return area/length

def priority_matrix(metric_values, q_bar):
    """
    Builds the per-link weights m[i, j] = metric[i]*q_bar[i, j].

    Examples
    ========

    >>> from pygoalnet import priority_matrix
    >>> priority_matrix([1, 2], [[1, 0.5], [0.2, 1]]).m.tolist()
    [[1.0, 0.5], [0.4, 2.0]]
    """
    q_bar = _as_matrix(q_bar, 'q_bar')
    values = _as_vector(metric_values, 'metric_values')
    if values.shape[0] != q_bar.shape[0]:
        raise DimensionError("Got %s metric values for %s loops."
                             %(values.shape[0], q_bar.shape[0]))
    return PriorityMatrix(values[:, None]*q_bar)

def _metric_coil(synth, loop, t_prev, e_check, ladder):
    return coil(synth, t_prev, loop, ladder)

def _metric_voi(synth, loop, t_prev, e_check, ladder):
    return voi(synth, e_check)

def _metric_aoi(synth, loop, t_prev, e_check, ladder):
    return float(t_prev + 1)

def loop_metric(policy, synth, loop, t_prev, e_check, ladder=None):
    """
    Evaluates the priority metric of a goal-oriented policy
    for one loop.

    Parameters
    ==========

    policy: str
        'coil', 'voi' or 'aoi'. The AoI policy uses the
        current age t_prev + 1.
    synth: LoopSynthesis
    loop: LoopSpec
    t_prev: int
        Staleness at the end of the previous slot.
    e_check: numpy.ndarray
        Innovation accumulator after this slot's
        measurement update.
    ladder: CovarianceLadder
        Optional.
    """
    import pygoalnet.networks.metrics as metrics
    func = "_metric_" + policy
    if not hasattr(metrics, func):
        raise NotImplementedError(
        "Policy %s has no priority metric."%(policy))
    return getattr(metrics, func)(synth, loop, t_prev, e_check, ladder)
