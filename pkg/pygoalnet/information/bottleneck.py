"""
Information Bottleneck by self-consistent iteration with
random restarts.
"""
import itertools
import logging
import math
import numpy as np
from pygoalnet.information.shannon import (
    DiscreteJoint, _as_distribution, _plogp_ratio)
from pygoalnet.utils.misc_util import (
    _as_matrix, _check_type, DomainError, NoConvergence)

__all__ = [
    'IbResult',
    'ib_solve',
    'ib_curve',
    'ib_lagrangian'
]

_logger = logging.getLogger(__name__)

_ENUMERATION_LIMIT = 4096

class IbResult(object):
    """
    Represents a solution of the Information Bottleneck.

    Parameters
    ==========

    encoder: numpy.ndarray
        Row-stochastic |X| x |T| map p(t|x).
    I_xt: float
        Compression term I(X;T) in bits.
    I_ty: float
        Relevance term I(T;Y) in bits.
    lagrangian: float
        I_xt - beta*I_ty.

    Note
    ====

    Unpacks as (encoder, I_xt, I_ty, lagrangian).
    """

    __slots__ = ['encoder', 'I_xt', 'I_ty', 'lagrangian']

    def __new__(cls, encoder, I_xt, I_ty, lagrangian):
        obj = object.__new__(cls)
        obj.encoder, obj.I_xt, obj.I_ty = encoder, I_xt, I_ty
        obj.lagrangian = lagrangian
        return obj

    def __iter__(self):
        return iter((self.encoder, self.I_xt, self.I_ty, self.lagrangian))

    def __str__(self):
        return "(I_xt=%.6g, I_ty=%.6g)"%(self.I_xt, self.I_ty)

def _mi(joint):
    a, b = joint.sum(axis=1), joint.sum(axis=0)
    return max(float(np.sum(_plogp_ratio(joint, np.outer(a, b)))), 0.0)

def _terms(p_xy, encoder):
    p_x = p_xy.sum(axis=1)
    joint_xt = p_x[:, None]*encoder
    joint_ty = encoder.T @ p_xy
    return _mi(joint_xt), _mi(joint_ty)

def ib_lagrangian(joint, encoder, beta):
    """
    Evaluates I(X;T) - beta*I(T;Y) of an encoder p(t|x) for a
    joint p(x, y) with the chain T - X - Y.

    Examples
    ========

    >>> from pygoalnet import ib_lagrangian
    >>> ib_lagrangian([[0.5, 0.0], [0.0, 0.5]], [[1, 0], [0, 1]], 2.0)
    -1.0
    """
    if _check_type(joint, DiscreteJoint):
        joint = joint.p
    p_xy = _as_distribution(joint, "joint", 2)
    encoder = _as_matrix(encoder, "encoder", rows=p_xy.shape[0])
    I_xt, I_ty = _terms(p_xy, encoder)
    return I_xt - beta*I_ty

def _sweep(p_xy, p_y_given_x, encoder, beta):
    """
    One self-consistent update p(t|x) ~ p(t) exp(-beta KL).
    """
    p_x = p_xy.sum(axis=1)
    p_t = p_x @ encoder
    p_ty = encoder.T @ p_xy
    p_y_given_t = np.divide(p_ty, p_t[:, None], out=np.zeros_like(p_ty),
                            where=p_t[:, None] > 0.0)
    with np.errstate(divide='ignore'):
        logits = np.broadcast_to(np.log(p_t), encoder.shape).copy()
        if beta > 0.0:
            own = np.sum(np.where(p_y_given_x > 0.0, p_y_given_x*np.log(
                np.where(p_y_given_x > 0.0, p_y_given_x, 1.0)), 0.0), axis=1)
            mass = p_y_given_x[:, None, :] > 0.0
            missing = np.any(mass & (p_y_given_t[None, :, :] <= 0.0), axis=2)
            safe_log = np.log(np.where(p_y_given_t > 0.0, p_y_given_t, 1.0))
            cross = p_y_given_x @ safe_log.T
            kl = own[:, None] - cross
            logits -= beta*np.where(missing, np.inf, kl)
    new = encoder.copy()
    rows = np.isfinite(logits.max(axis=1))
    shifted = logits[rows] - logits[rows].max(axis=1, keepdims=True)
    weights = np.exp(shifted)
    new[rows] = weights/weights.sum(axis=1, keepdims=True)
    return new

def _iterate(p_xy, p_y_given_x, encoder, beta, tol, max_iter):
    I_xt, I_ty = _terms(p_xy, encoder)
    value = I_xt - beta*I_ty
    for it in range(max_iter):
        encoder = _sweep(p_xy, p_y_given_x, encoder, beta)
        I_xt, I_ty = _terms(p_xy, encoder)
        new = I_xt - beta*I_ty
        if abs(new - value) < tol:
            return IbResult(encoder, I_xt, I_ty, new), it + 1
        value = new
    return None, max_iter

def _best_hard_encoder(p_xy, T_size, beta):
    nx = p_xy.shape[0]
    best, best_value = None, math.inf
    for labels in itertools.product(range(T_size), repeat=nx):
        encoder = np.zeros((nx, T_size))
        encoder[np.arange(nx), labels] = 1.0
        I_xt, I_ty = _terms(p_xy, encoder)
        if I_xt - beta*I_ty < best_value:
            best, best_value = encoder, I_xt - beta*I_ty
    return best

def ib_solve(joint, T_size, beta, tol=1e-10, max_iter=10000, restarts=10,
             rng=None, hard_start=True):
    """
    Minimizes I(X;T) - beta*I(T;Y) over encoders p(t|x) with
    |T| = T_size, by alternating the self-consistent equations
    from several starting points.

    Parameters
    ==========

    joint: DiscreteJoint or array_like
        p(x, y) with X along rows.
    T_size: int
        Size of the bottleneck alphabet.
    beta: float
        Non-negative trade-off; beta = 0 drops the divergence
        term so every row collapses onto p(t).
    tol: float
        A restart converges once the Lagrangian moves by less
        than tol between sweeps. By default, 1e-10.
    max_iter: int
        Sweeps per restart. By default, 10000.
    restarts: int
        Number of random Dirichlet starts. By default, 10.
    rng: numpy.random.Generator or int
        Source of the random starts. By default, seed 0.
    hard_start: bool
        Also start from the best deterministic encoder when
        there are at most 4096 of them. The sweeps never
        increase the Lagrangian, so the result is then never
        worse than any deterministic encoder.
        By default, True.

    Returns
    =======

    IbResult
        The converged restart with the smallest Lagrangian.

    Raises
    ======

    InvalidDistribution
        When joint is not a distribution.
    NoConvergence
        When no restart converges.

    Examples
    ========

    >>> from pygoalnet import ib_solve
    >>> enc, I_xt, I_ty, L = ib_solve([[0.5, 0.0], [0.0, 0.5]], 2, 10.0)
    >>> round(I_xt, 9), round(I_ty, 9)
    (1.0, 1.0)

    References
    ==========

    .. [1] https://en.wikipedia.org/wiki/Information_bottleneck_method
    """
    if _check_type(joint, DiscreteJoint):
        joint = joint.p
    p_xy = _as_distribution(joint, "joint", 2)
    if not _check_type(T_size, (int, np.integer)) or T_size < 1:
        raise DomainError("T_size must be a positive integer, got %s."
                          %(T_size,))
    if not beta >= 0.0 or not math.isfinite(beta):
        raise DomainError("beta must be finite and non-negative, got %s."
                          %(beta))
    if restarts < 0:
        raise DomainError("restarts must be non-negative, got %s."%(restarts))
    rng = np.random.default_rng(0 if rng is None else rng)
    p_x = p_xy.sum(axis=1)
    p_y_given_x = np.divide(p_xy, p_x[:, None], out=np.zeros_like(p_xy),
                            where=p_x[:, None] > 0.0)
    starts = [rng.dirichlet(np.ones(T_size), size=p_xy.shape[0])
              for _ in range(restarts)]
    if hard_start and T_size**p_xy.shape[0] <= _ENUMERATION_LIMIT:
        starts.append(_best_hard_encoder(p_xy, T_size, beta))
    best = None
    for index, start in enumerate(starts):
        result, sweeps = _iterate(p_xy, p_y_given_x, start, beta, tol, max_iter)
        if result is None:
            _logger.warning("IB restart %s did not converge in %s sweeps at "
                            "beta=%s.", index, sweeps, beta)
            continue
        _logger.debug("IB restart %s converged in %s sweeps: L=%.12g.",
                      index, sweeps, result.lagrangian)
        if best is None or result.lagrangian < best.lagrangian:
            best = result
    if best is None:
        raise NoConvergence("No IB restart converged at beta=%s."%(beta))
    return best

def ib_curve(joint, T_size, betas, tol=1e-10, max_iter=10000, restarts=10,
             rng=None, hard_start=True):
    """
    Sweeps ib_solve over betas. An integer rng seeds a fresh
    generator for every beta; a Generator is shared by the
    whole sweep.

    Returns
    =======

    list of (beta, IbResult)
    """
    seed = 0 if rng is None else rng
    return [(float(beta), ib_solve(joint, T_size, beta, tol, max_iter,
                                   restarts, seed, hard_start))
            for beta in betas]
