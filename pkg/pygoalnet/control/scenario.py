"""
Definition, parsing and validation of multi-loop
experiment instances.
"""
import json
import logging
import numpy as np
from pygoalnet.utils.misc_util import (
    _check_type, _as_matrix, _as_vector, _sym, _is_psd, _min_eig,
    ParseError, DimensionError, DomainError)

__all__ = [
    'LoopSpec',
    'Scenario',
    'POLICIES',
    'parse_and_validate',
    'load_scenario',
    'dump_scenario'
]

_logger = logging.getLogger(__name__)

POLICIES = ('coil', 'voi', 'aoi', 'round_robin', 'random', 'always')

_LOOP_KEYS = ('A', 'B', 'C', 'W', 'V', 'Q', 'R')

def _check_psd(X, name):
    if not _is_psd(X):
        raise DomainError("%s is not positive semi-definite (minimum "
                          "eigenvalue %s)."%(name, _min_eig(X)))
    return _sym(X)

class LoopSpec(object):
    """
    Represents one plant, its sensor and its quadratic cost.

    Parameters
    ==========

    A: array_like
        n x n state transition matrix.
    B: array_like
        n x m input matrix.
    C: array_like
        p x n output matrix.
    W: array_like
        n x n process-noise covariance, PSD.
    V: array_like
        p x p measurement-noise covariance, PSD.
    Q: array_like
        n x n state cost weight, PSD.
    R: array_like
        m x m input cost weight, positive definite.
    x0_mean: array_like
        Optional, initial state mean. By default zeros.
    x0_cov: array_like
        Optional, initial state covariance. By default identity.

    Raises
    ======

    DimensionError
        When the matrices do not agree on n, m and p.
    DomainError
        When a covariance or weight is not PSD, or R is
        not positive definite.

    Note
    ====

    Symmetric parts of W, V, Q, R and x0_cov are stored; PSD
    checks use a tolerance of 1e-9 on the minimum eigenvalue.

    Examples
    ========

    >>> from pygoalnet import LoopSpec
    >>> loop = LoopSpec(1, 1, 1, 1, 1, 1, 1)
    >>> (loop.n, loop.m, loop.p)
    (1, 1, 1)
    """

    __slots__ = ['A', 'B', 'C', 'W', 'V', 'Q', 'R', 'x0_mean', 'x0_cov']

    def __new__(cls, A, B, C, W, V, Q, R, x0_mean=None, x0_cov=None):
        obj = object.__new__(cls)
        obj.A = _as_matrix(A, 'A')
        n = obj.A.shape[0]
        if obj.A.shape[1] != n:
            raise DimensionError("A must be square, got shape %s."
                                 %(obj.A.shape,))
        obj.B = _as_matrix(B, 'B', rows=n)
        obj.C = _as_matrix(C, 'C', cols=n)
        m, p = obj.B.shape[1], obj.C.shape[0]
        obj.W = _check_psd(_as_matrix(W, 'W', n, n), 'W')
        obj.V = _check_psd(_as_matrix(V, 'V', p, p), 'V')
        obj.Q = _check_psd(_as_matrix(Q, 'Q', n, n), 'Q')
        R = _sym(_as_matrix(R, 'R', m, m))
        if m > 0 and _min_eig(R) <= 0.0:
            raise DomainError("R is not positive definite (minimum "
                              "eigenvalue %s)."%(_min_eig(R)))
        obj.R = R
        obj.x0_mean = np.zeros(n) if x0_mean is None else \
            _as_vector(x0_mean, 'x0_mean', n)
        obj.x0_cov = np.eye(n) if x0_cov is None else \
            _check_psd(_as_matrix(x0_cov, 'x0_cov', n, n), 'x0_cov')
        return obj

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def p(self):
        return self.C.shape[0]

    def is_open_loop_stable(self):
        """
        True when the largest singular value of A is at most one.
        """
        return float(np.linalg.norm(self.A, 2)) <= 1.0

    def to_dict(self):
        data = dict((key, getattr(self, key).tolist()) for key in _LOOP_KEYS)
        data['x0_mean'] = self.x0_mean.tolist()
        data['x0_cov'] = self.x0_cov.tolist()
        return data

    def __eq__(self, other):
        if not _check_type(other, LoopSpec):
            return NotImplemented
        return all(np.array_equal(getattr(self, key), getattr(other, key))
                   for key in self.__slots__)

    def __str__(self):
        return "LoopSpec(n=%s, m=%s, p=%s)"%(self.n, self.m, self.p)

class Scenario(object):
    """
    Represents a complete multi-loop experiment instance.

    Parameters
    ==========

    loops: list
        LoopSpec objects, one per control loop.
    num_channels: int
        The number of shared channels M.
    success_prob: array_like
        N x M matrix of link success probabilities.
    horizon: int
        The number of slots K.
    seed: int
        Unsigned 64-bit base seed.
    policy: str
        One of 'coil', 'voi', 'aoi', 'round_robin',
        'random' and 'always'.
    voi_q_weighting: bool
        Optional, whether VoI priorities are scaled by the
        success probabilities. By default, True.

    Raises
    ======

    DimensionError
        When success_prob is not N x M.
    DomainError
        When a probability lies outside [0, 1], the horizon
        is not positive, the seed is out of range or the
        policy is unknown.
    """

    __slots__ = ['loops', 'num_channels', 'success_prob', 'horizon',
                 'seed', 'policy', 'voi_q_weighting']

    def __new__(cls, loops, num_channels, success_prob, horizon, seed,
                policy, voi_q_weighting=True):
        obj = object.__new__(cls)
        loops = list(loops)
        if len(loops) < 1:
            raise DomainError("At least one loop is required.")
        for i, loop in enumerate(loops):
            if not _check_type(loop, LoopSpec):
                raise TypeError("Loop %s is not a LoopSpec."%(i))
        if not _check_type(num_channels, int) or _check_type(num_channels, bool) \
            or num_channels < 1:
            raise DomainError("Number of channels must be a positive "
                              "integer, got %s."%(num_channels,))
        q_bar = _as_matrix(success_prob, 'q_bar', len(loops), num_channels)
        if np.any(q_bar < 0.0) or np.any(q_bar > 1.0):
            raise DomainError("q_bar entries must lie in [0, 1], got %s."
                              %(q_bar[(q_bar < 0.0) | (q_bar > 1.0)][0]))
        if not _check_type(horizon, int) or _check_type(horizon, bool) \
            or horizon < 1:
            raise DomainError("Horizon must be a positive integer, got %s."
                              %(horizon,))
        if not _check_type(seed, int) or _check_type(seed, bool) \
            or not 0 <= seed < 2**64:
            raise DomainError("Seed must be an unsigned 64-bit integer, "
                              "got %s."%(seed,))
        if policy not in POLICIES:
            raise DomainError("Unknown policy %s, expected one of %s."
                              %(policy, ", ".join(POLICIES)))
        obj.loops, obj.num_channels, obj.success_prob = \
            loops, num_channels, q_bar
        obj.horizon, obj.seed, obj.policy = horizon, seed, policy
        obj.voi_q_weighting = bool(voi_q_weighting)
        return obj

    @property
    def num_loops(self):
        return len(self.loops)

    def replace(self, **changes):
        """
        Returns a validated copy with the given fields replaced.
        """
        fields = dict((key, getattr(self, key)) for key in self.__slots__)
        fields.update((key, value) for key, value in changes.items()
                      if value is not None)
        return Scenario(**fields)

    def to_dict(self):
        return {
            'loops': [loop.to_dict() for loop in self.loops],
            'channels': self.num_channels,
            'q_bar': self.success_prob.tolist(),
            'horizon': self.horizon,
            'seed': self.seed,
            'policy': self.policy,
            'voi_q_weighting': self.voi_q_weighting
        }

    def __eq__(self, other):
        if not _check_type(other, Scenario):
            return NotImplemented
        return (self.loops == other.loops and
                self.num_channels == other.num_channels and
                np.array_equal(self.success_prob, other.success_prob) and
                self.horizon == other.horizon and self.seed == other.seed and
                self.policy == other.policy and
                self.voi_q_weighting == other.voi_q_weighting)

    def __str__(self):
        return "Scenario(N=%s, M=%s, K=%s, policy=%s)"%(
            self.num_loops, self.num_channels, self.horizon, self.policy)

def _require(doc, key, where):
    if key not in doc:
        raise ParseError("Missing key '%s' in %s."%(key, where))
    return doc[key]

def _require_int(doc, key, where):
    value = _require(doc, key, where)
    if not _check_type(value, int) or _check_type(value, bool):
        raise ParseError("Key '%s' in %s must be an integer, got %r."
                         %(key, where, value))
    return value

def _parse_loop(doc, index):
    where = "loop %s"%(index)
    if not _check_type(doc, dict):
        raise ParseError("%s must be an object."%(where))
    args = [_require(doc, key, where) for key in _LOOP_KEYS]
    try:
        return LoopSpec(*args, x0_mean=doc.get('x0_mean'),
                        x0_cov=doc.get('x0_cov'))
    except (TypeError, ValueError) as err:
        if _check_type(err, (DimensionError, DomainError)):
            raise type(err)("%s: %s"%(where, err))
        raise ParseError("%s: %s"%(where, err))

def parse_and_validate(text):
    """
    Parses a JSON scenario document and validates it.

    Parameters
    ==========

    text: str
        The JSON document with keys 'loops', 'channels',
        'q_bar', 'horizon', 'seed', 'policy' and optionally
        'voi_q_weighting'.

    Returns
    =======

    scenario: Scenario

    Raises
    ======

    ParseError
        Malformed document or missing keys.
    DimensionError
        Inconsistent matrix shapes.
    DomainError
        Values outside their domain.

    Examples
    ========

    >>> from pygoalnet import parse_and_validate
    >>> doc = ('{"loops": [{"A": 1, "B": 1, "C": 1, "W": 1, "V": 1,'
    ...        ' "Q": 1, "R": 1}], "channels": 1, "q_bar": [[1]],'
    ...        ' "horizon": 10, "seed": 0, "policy": "coil"}')
    >>> parse_and_validate(doc).num_loops
    1
    """
    try:
        doc = json.loads(text)
    except (TypeError, ValueError) as err:
        raise ParseError("Scenario is not valid JSON: %s"%(err))
    if not _check_type(doc, dict):
        raise ParseError("Scenario document must be a JSON object.")
    where = "scenario"
    loops_doc = _require(doc, 'loops', where)
    if not _check_type(loops_doc, list):
        raise ParseError("Key 'loops' must be an array.")
    loops = [_parse_loop(loop, i) for i, loop in enumerate(loops_doc)]
    channels = _require_int(doc, 'channels', where)
    q_bar = _require(doc, 'q_bar', where)
    horizon = _require_int(doc, 'horizon', where)
    seed = _require_int(doc, 'seed', where)
    policy = _require(doc, 'policy', where)
    if not _check_type(policy, str):
        raise ParseError("Key 'policy' must be a string.")
    weighting = doc.get('voi_q_weighting', True)
    if not _check_type(weighting, bool):
        raise ParseError("Key 'voi_q_weighting' must be a boolean.")
    try:
        scenario = Scenario(loops, channels, q_bar, horizon, seed, policy,
                            voi_q_weighting=weighting)
    except (DimensionError, DomainError):
        raise
    except (TypeError, ValueError) as err:
        raise ParseError("q_bar: %s"%(err))
    for i, loop in enumerate(scenario.loops):
        if loop.is_open_loop_stable():
            _logger.warning("Loop %s has sigma_max(A) <= 1; the plant is "
                            "stable and scheduling matters less.", i)
    return scenario

def load_scenario(path):
    """
    Reads and validates the scenario stored at path.
    """
    with open(path, "r", encoding="utf-8") as file:
        return parse_and_validate(file.read())

def dump_scenario(scenario):
    """
    Serializes a scenario to JSON text accepted by
    parse_and_validate.
    """
    return json.dumps(scenario.to_dict(), indent=2)
