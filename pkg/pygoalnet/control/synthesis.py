"""
Offline synthesis of the LQG controller, the steady-state
Kalman filter and the error-cost weight of every loop.
"""
import logging
import numpy as np
from pygoalnet.utils.misc_util import (
    _check_type, _as_matrix, _sym, _solve_sym,
    DimensionError, DomainError, NoConvergence)

__all__ = [
    'LoopSynthesis',
    'CovarianceLadder',
    'solve_control_dare',
    'solve_filter_riccati',
    'gamma_infinity',
    'cov_propagate',
    'synthesize_loop',
    'synthesize'
]

_logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10**6

def _check_tol(tol, max_iter):
    if not tol > 0:
        raise DomainError("Tolerance must be positive, got %s."%(tol))
    if max_iter < 1:
        raise DomainError("max_iter must be positive, got %s."%(max_iter))

def _converged(new, old, tol):
    return np.linalg.norm(new - old) <= tol*(1.0 + np.linalg.norm(new))

def _control_gain(A, B, R, Pi):
    S = B.T @ Pi @ B + R
    return -_solve_sym(S, B.T @ Pi @ A, "B'PiB + R")

def solve_control_dare(A, B, Q, R, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                       init=None):
    """
    Solves the control DARE by value iteration of the
    Riccati recursion.

    Parameters
    ==========

    A, B, Q, R: array_like
        Plant and cost matrices.
    tol: float
        Relative Frobenius tolerance between iterates.
        By default, 1e-10.
    max_iter: int
        By default, 10**6.
    init: array_like
        Optional, starting point of the iteration. By default, Q.

    Returns
    =======

    (Pi_inf, L_inf)
        The fixed point and the gain
        L_inf = -(B'Pi B + R)^{-1} B'Pi A.

    Raises
    ======

    NoConvergence
        When max_iter is exhausted; signals data that is not
        stabilizable or not detectable.
    NumericalError
        When B'Pi B + R is too ill-conditioned.

    Examples
    ========

    >>> from pygoalnet import solve_control_dare
    >>> Pi, L = solve_control_dare(1, 1, 1, 1)
    >>> round(float(Pi[0, 0]), 4), round(float(L[0, 0]), 4)
    (1.618, -0.618)
    """
    A = _as_matrix(A, 'A')
    n = A.shape[0]
    B = _as_matrix(B, 'B', rows=n)
    Q = _as_matrix(Q, 'Q', n, n)
    R = _as_matrix(R, 'R', B.shape[1], B.shape[1])
    _check_tol(tol, max_iter)
    Pi = Q.copy() if init is None else _as_matrix(init, 'init', n, n)
    for it in range(max_iter):
        L = _control_gain(A, B, R, Pi)
        new = _sym(A.T @ Pi @ A + Q + A.T @ Pi @ B @ L)
        if not np.all(np.isfinite(new)):
            raise NoConvergence("Control Riccati iteration diverged after "
                                "%s steps; (A, B) may not be stabilizable."
                                %(it + 1))
        if _converged(new, Pi, tol):
            _logger.info("Control DARE converged in %s iterations.", it + 1)
            return new, _control_gain(A, B, R, new)
        Pi = new
    raise NoConvergence("Control Riccati iteration did not converge in %s "
                        "steps."%(max_iter))

def _measurement_update(X, C, V):
    """
    Returns g(X) and the gain X C'(C X C' + V)^{-1}.
    """
    if C.shape[0] == 0 or not np.any(X @ C.T):
        # nothing to learn from y: prior uncertainty is invisible to C
        return X, np.zeros((X.shape[0], C.shape[0]))
    S = C @ X @ C.T + V
    K = _solve_sym(S, C @ X, "innovation covariance").T
    return _sym(X - K @ C @ X), K

def _time_update(X, A, W):
    return _sym(A @ X @ A.T + W)

def solve_filter_riccati(A, C, W, V, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                         init=None):
    """
    Solves the fixed point g(h(P)) = P of the Kalman filter
    Riccati map, where h(X) = A X A' + W and
    g(X) = X - X C'(C X C' + V)^{-1} C X.

    Parameters
    ==========

    A, C, W, V: array_like
        Plant, output and noise covariance matrices.
    tol: float
        By default, 1e-10.
    max_iter: int
        By default, 10**6.
    init: array_like
        Optional, starting point. By default, identity.

    Returns
    =======

    (P_bar, K_gain)
        The a-posteriori steady-state covariance and
        K = h(P)C'(C h(P) C' + V)^{-1}.

    Raises
    ======

    NoConvergence
        When max_iter is exhausted.
    NumericalError
        When the innovation covariance is singular.

    Examples
    ========

    >>> from pygoalnet import solve_filter_riccati
    >>> P, K = solve_filter_riccati(1, 1, 1, 1)
    >>> round(float(P[0, 0]), 4), round(float(K[0, 0]), 4)
    (0.618, 0.618)
    """
    A = _as_matrix(A, 'A')
    n = A.shape[0]
    C = _as_matrix(C, 'C', cols=n)
    W = _as_matrix(W, 'W', n, n)
    V = _as_matrix(V, 'V', C.shape[0], C.shape[0])
    _check_tol(tol, max_iter)
    P = np.eye(n) if init is None else _as_matrix(init, 'init', n, n)
    for it in range(max_iter):
        new, K = _measurement_update(_time_update(P, A, W), C, V)
        if not np.all(np.isfinite(new)):
            raise NoConvergence("Filter Riccati iteration diverged after %s "
                                "steps; (A, C) may not be detectable."
                                %(it + 1))
        if _converged(new, P, tol):
            _logger.info("Filter Riccati converged in %s iterations.", it + 1)
            _, K = _measurement_update(_time_update(new, A, W), C, V)
            return new, K
        P = new
    raise NoConvergence("Filter Riccati iteration did not converge in %s "
                        "steps."%(max_iter))

def gamma_infinity(Pi_inf, L_inf, B, R):
    """
    Computes the error-cost weight L'(B'Pi B + R)L.

    Examples
    ========

    >>> from pygoalnet import solve_control_dare, gamma_infinity
    >>> Pi, L = solve_control_dare(1, 1, 1, 1)
    >>> round(float(gamma_infinity(Pi, L, 1, 1)[0, 0]), 9)
    1.0
    """
    Pi_inf = _as_matrix(Pi_inf, 'Pi_inf')
    n = Pi_inf.shape[0]
    B = _as_matrix(B, 'B', rows=n)
    m = B.shape[1]
    L_inf = _as_matrix(L_inf, 'L_inf', m, n)
    R = _as_matrix(R, 'R', m, m)
    return _sym(L_inf.T @ (B.T @ Pi_inf @ B + R) @ L_inf)

def cov_propagate(P_bar, t, A, W):
    """
    Returns h^t(P_bar), the t-fold composition of
    h(X) = A X A' + W, with h^0(X) = X.

    Examples
    ========

    >>> from pygoalnet import cov_propagate
    >>> float(cov_propagate(0, 2, 2, 1)[0, 0])
    5.0
    """
    if not _check_type(t, (int, np.integer)) or t < 0:
        raise DomainError("t must be a non-negative integer, got %s."%(t,))
    X = _as_matrix(P_bar, 'P_bar')
    A = _as_matrix(A, 'A', *X.shape)
    W = _as_matrix(W, 'W', *X.shape)
    for _ in range(t):
        X = _time_update(X, A, W)
    return X

class LoopSynthesis(object):
    """
    Represents the offline products of one loop.

    Parameters
    ==========

    Pi_inf: numpy.ndarray
        Control DARE solution.
    L_inf: numpy.ndarray
        Optimal feedback gain, m x n.
    Gamma_inf: numpy.ndarray
        Error-cost weight.
    P_bar: numpy.ndarray
        Steady-state a-posteriori filter covariance.
    K_gain: numpy.ndarray
        Steady-state Kalman gain, n x p.
    """

    __slots__ = ['Pi_inf', 'L_inf', 'Gamma_inf', 'P_bar', 'K_gain']

    def __new__(cls, Pi_inf, L_inf, Gamma_inf, P_bar, K_gain):
        obj = object.__new__(cls)
        obj.Pi_inf, obj.L_inf, obj.Gamma_inf = Pi_inf, L_inf, Gamma_inf
        obj.P_bar, obj.K_gain = P_bar, K_gain
        for key in obj.__slots__:
            getattr(obj, key).setflags(write=False)
        return obj

    def stationary_cost(self, loop):
        """
        tr(Pi W) + tr(Gamma P_bar), the average cost when every
        packet is delivered.
        """
        return float(np.trace(self.Pi_inf @ loop.W) +
                     np.trace(self.Gamma_inf @ self.P_bar))

    def __str__(self):
        return str(dict((key, getattr(self, key).tolist())
                        for key in self.__slots__))

class CovarianceLadder(object):
    """
    Lazily extended cache of h^t(P_bar) for t = 0, 1, ...

    Parameters
    ==========

    synth: LoopSynthesis
    loop: LoopSpec

    Examples
    ========

    >>> from pygoalnet import LoopSpec, synthesize_loop, CovarianceLadder
    >>> loop = LoopSpec(1, 1, 1, 1, 0, 1, 1)
    >>> ladder = CovarianceLadder(synthesize_loop(loop), loop)
    >>> float(ladder[3][0, 0])
    3.0
    """

    __slots__ = ['_rungs', '_A', '_W']

    def __new__(cls, synth, loop):
        obj = object.__new__(cls)
        obj._rungs = [np.array(synth.P_bar)]
        obj._A, obj._W = loop.A, loop.W
        return obj

    def __getitem__(self, t):
        if t < 0:
            raise IndexError("Index out of range.")
        while len(self._rungs) <= t:
            self._rungs.append(_time_update(self._rungs[-1], self._A, self._W))
        return self._rungs[t]

    def __len__(self):
        return len(self._rungs)

def synthesize_loop(loop, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Computes the LoopSynthesis of a LoopSpec.
    """
    Pi, L = solve_control_dare(loop.A, loop.B, loop.Q, loop.R, tol, max_iter)
    P, K = solve_filter_riccati(loop.A, loop.C, loop.W, loop.V, tol, max_iter)
    if P.shape != Pi.shape or L.shape != (loop.m, loop.n):
        raise DimensionError("Synthesis produced inconsistent shapes.")
    return LoopSynthesis(Pi, L, gamma_infinity(Pi, L, loop.B, loop.R), P, K)

def synthesize(scenario, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Computes the LoopSynthesis of every loop of a scenario.
    """
    synths = []
    for i, loop in enumerate(scenario.loops):
        synths.append(synthesize_loop(loop, tol, max_iter))
        _logger.info("Loop %s synthesized: stationary cost %.6g.",
                     i, synths[-1].stationary_cost(loop))
    return synths
