"""
Channel-access decisions: feasibility, max-weight assignment
and baseline policies.
"""
import itertools
import numpy as np
from scipy.optimize import linear_sum_assignment
from pygoalnet.utils.misc_util import (
    _check_type, DimensionError, DomainError, InfeasibleAlways, TooLarge)

__all__ = [
    'ScheduleDecision',
    'BASELINES',
    'is_feasible',
    'assign_max_weight',
    'assign_baseline',
    'brute_force_schedule'
]

BASELINES = ('round_robin', 'random', 'always')

_REL_TOL = 1e-12
_BRUTE_FORCE_LIMIT = 4

class ScheduleDecision(object):
    """
    Represents the binary N x M assignment of sensors to channels.

    Parameters
    ==========

    delta: array_like
        Binary matrix; delta[i, j] = 1 when sensor i
        transmits on channel j.

    Examples
    ========

    >>> from pygoalnet import ScheduleDecision
    >>> d = ScheduleDecision([[0, 1], [0, 0]])
    >>> d.channel_of(0), d.channel_of(1)
    (1, None)
    """

    __slots__ = ['delta']

    def __new__(cls, delta):
        obj = object.__new__(cls)
        delta = np.asarray(delta)
        if delta.ndim != 2:
            raise DimensionError("delta must be a matrix.")
        if not np.all((delta == 0) | (delta == 1)):
            raise DomainError("delta must be binary.")
        obj.delta = delta.astype(np.int8)
        return obj

    @classmethod
    def from_pairs(cls, pairs, num_sensors, num_channels):
        delta = np.zeros((num_sensors, num_channels), dtype=np.int8)
        for i, j in pairs:
            delta[i, j] = 1
        return cls(delta)

    def pairs(self):
        """
        The (sensor, channel) pairs in row-major order.
        """
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.delta))]

    def channel_of(self, sensor):
        row = np.flatnonzero(self.delta[sensor])
        return int(row[0]) if row.size else None

    def __eq__(self, other):
        if not _check_type(other, ScheduleDecision):
            return NotImplemented
        return np.array_equal(self.delta, other.delta)

    def __str__(self):
        return str(self.delta.tolist())

def is_feasible(delta):
    """
    Checks that every channel carries at most one sensor and
    every sensor occupies at most one channel.

    Examples
    ========

    >>> from pygoalnet import is_feasible
    >>> is_feasible([[1, 0], [1, 0]])
    False
    """
    if _check_type(delta, ScheduleDecision):
        delta = delta.delta
    delta = np.asarray(delta)
    if delta.ndim != 2 or not np.all((delta == 0) | (delta == 1)):
        return False
    return bool(np.all(delta.sum(axis=0) <= 1) and
                np.all(delta.sum(axis=1) <= 1))

def _weights(m):
    from pygoalnet.networks.metrics import PriorityMatrix
    if not _check_type(m, PriorityMatrix):
        m = PriorityMatrix(m)
    if not np.all(np.isfinite(m.m)):
        raise DomainError("Priority weights must be finite.")
    return m.m

def _best_value(w, allowed):
    """
    Maximum weight of a (not necessarily perfect) matching that
    only uses allowed links. Every row may fall back to its own
    zero-weight dummy column, which makes the padded square
    problem exact for partial matchings.
    """
    N, M = w.shape
    big = 1.0 + 4.0*float(w.sum())*(N + M)
    padded = np.zeros((N + M, M + N))
    padded[:N, :M] = np.where(allowed, w, -big)
    padded[:N, M:] = -big
    padded[np.arange(N), M + np.arange(N)] = 0.0
    rows, cols = linear_sum_assignment(padded, maximize=True)
    picked = (rows < N) & (cols < M)
    picked &= allowed[np.minimum(rows, N - 1), np.minimum(cols, M - 1)]
    return float(w[rows[picked], cols[picked]].sum())

def _close_enough(value, best):
    return value >= best - _REL_TOL*(1.0 + abs(best))

def assign_max_weight(m):
    """
    Computes a feasible decision maximizing the summed weights
    of the selected links.

    Parameters
    ==========

    m: PriorityMatrix or array_like
        Non-negative finite weights.

    Returns
    =======

    decision: ScheduleDecision
        Among all maximizers, the one whose row-major flattened
        matrix is lexicographically largest, i.e. the earliest
        (sensor, channel) pairs win ties. Zero-weight links are
        still assigned.

    Examples
    ========

    >>> from pygoalnet import assign_max_weight
    >>> assign_max_weight([[5, 1], [4, 2]]).pairs()
    [(0, 0), (1, 1)]
    """
    w = _weights(m)
    N, M = w.shape
    if N == 1 or M == 1:
        flat = w.ravel()
        best = float(flat.max())
        first = int(np.flatnonzero(flat >= best - _REL_TOL*(1.0 + abs(best)))[0])
        pair = (0, first) if N == 1 else (first, 0)
        return ScheduleDecision.from_pairs([pair], N, M)
    allowed = np.ones((N, M), dtype=bool)
    best = _best_value(w, allowed)
    row_free = np.ones(N, dtype=bool)
    col_free = np.ones(M, dtype=bool)
    pairs, fixed = [], 0.0
    for i in range(N):
        for j in range(M):
            if not (row_free[i] and col_free[j]):
                continue
            trial = allowed.copy()
            trial[i, :] = False
            trial[:, j] = False
            trial[~row_free, :] = False
            trial[:, ~col_free] = False
            if _close_enough(fixed + w[i, j] + _best_value(w, trial), best):
                pairs.append((i, j))
                fixed += w[i, j]
                row_free[i] = col_free[j] = False
            else:
                allowed[i, j] = False
    return ScheduleDecision.from_pairs(pairs, N, M)

def _feasible_decisions(N, M):
    """
    Yields every feasible decision as a tuple of channel
    choices per sensor, None meaning silent.
    """
    for choice in itertools.product([None] + list(range(M)), repeat=N):
        used = [c for c in choice if c is not None]
        if len(used) == len(set(used)):
            yield choice

def _flatten(choice, M):
    flat = []
    for c in choice:
        flat.extend(1 if c == j else 0 for j in range(M))
    return tuple(flat)

def brute_force_schedule(m):
    """
    Enumerates every feasible decision and returns the
    maximizer under the same tie-break as assign_max_weight.

    Raises
    ======

    TooLarge
        When N or M exceeds 4.
    """
    w = _weights(m)
    N, M = w.shape
    if N > _BRUTE_FORCE_LIMIT or M > _BRUTE_FORCE_LIMIT:
        raise TooLarge("Brute force is limited to %sx%s instances, got %sx%s."
                       %(_BRUTE_FORCE_LIMIT, _BRUTE_FORCE_LIMIT, N, M))
    scored = []
    for choice in _feasible_decisions(N, M):
        value = sum(float(w[i, c]) for i, c in enumerate(choice)
                    if c is not None)
        scored.append((value, _flatten(choice, M)))
    best = max(value for value, _ in scored)
    flat = max(flat for value, flat in scored if _close_enough(value, best))
    return ScheduleDecision(np.array(flat, dtype=np.int8).reshape(N, M))

def _baseline_round_robin(k, N, M, rng):
    pairs, taken = [], set()
    for j in range(M):
        i = (k*M + j) % N
        if i not in taken:
            taken.add(i)
            pairs.append((i, j))
    return pairs

def _baseline_random(k, N, M, rng):
    count = min(N, M)
    sensors = rng.choice(N, size=count, replace=False)
    channels = rng.choice(M, size=count, replace=False)
    return [(int(i), int(j)) for i, j in zip(sensors, channels)]

def _baseline_always(k, N, M, rng):
    if M < N:
        raise InfeasibleAlways("The always policy needs at least as many "
                               "channels as sensors, got M=%s < N=%s."%(M, N))
    return [(i, i) for i in range(N)]

def assign_baseline(policy, k, N, M, rng=None):
    """
    Produces the decision of a baseline policy.

    Parameters
    ==========

    policy: str
        'round_robin' -> channel j goes to sensor (k*M + j) mod N,
                         skipping duplicates within the slot.
        'random'      -> min(N, M) distinct sensors matched uniformly
                         to distinct channels.
        'always'      -> sensor i on channel i.
    k: int
        The slot index.
    N, M: int
        Numbers of sensors and channels.
    rng: numpy.random.Generator
        Required by the random policy.

    Raises
    ======

    InfeasibleAlways
        For the always policy with M < N.

    Examples
    ========

    >>> from pygoalnet import assign_baseline
    >>> [assign_baseline('round_robin', k, 3, 1).pairs() for k in range(4)]
    [[(0, 0)], [(1, 0)], [(2, 0)], [(0, 0)]]
    """
    import pygoalnet.networks.scheduling as scheduling
    func = "_baseline_" + policy
    if not hasattr(scheduling, func):
        raise NotImplementedError(
        "%s is not a baseline policy."%(policy))
    if policy == 'random' and rng is None:
        raise ValueError("The random policy requires an rng stream.")
    return ScheduleDecision.from_pairs(
        getattr(scheduling, func)(k, N, M, rng), N, M)
