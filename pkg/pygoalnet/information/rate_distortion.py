"""
Rate-distortion solvers: Blahut-Arimoto for finite sources and
closed-form or bisection solutions for Gaussian sources observed
through a linear noisy channel.
"""
import logging
import math
import numpy as np
from pygoalnet.information.shannon import _as_distribution, _plogp_ratio
from pygoalnet.utils.misc_util import (
    _as_matrix, _as_vector, DomainError, Infeasible, NoConvergence)

__all__ = [
    'RdPoint',
    'blahut_arimoto',
    'rate_utility',
    'rd_curve',
    'indirect_rd_scalar',
    'indirect_rd_error',
    'indirect_rd_diagonal'
]

_logger = logging.getLogger(__name__)

_BISECTION_STEPS = 200

class RdPoint(object):
    """
    Represents one point of a rate-distortion curve.

    Parameters
    ==========

    rate: float
        Bits per source symbol.
    distortion: float
        Expected distortion reached by the encoder.
    encoder: numpy.ndarray
        Row-stochastic |X| x |X_hat| test channel, or None
        for the Gaussian solvers.
    """

    __slots__ = ['rate', 'distortion', 'encoder']

    def __new__(cls, rate, distortion, encoder=None):
        obj = object.__new__(cls)
        obj.rate, obj.distortion, obj.encoder = rate, distortion, encoder
        return obj

    def __iter__(self):
        return iter((self.rate, self.distortion, self.encoder))

    def __str__(self):
        return "(rate=%.6g, distortion=%.6g)"%(self.rate, self.distortion)

def _rate_of(p_x, encoder):
    q = p_x @ encoder
    joint = p_x[:, None]*encoder
    return max(float(np.sum(_plogp_ratio(joint, np.outer(p_x, q)))), 0.0)

def blahut_arimoto(p_x, d, beta, tol=1e-9, max_iter=100000):
    """
    Computes a point of the rate-distortion function by
    alternating q(x_hat|x) ~ q(x_hat) exp(-beta d(x, x_hat))
    and q(x_hat) = sum_x p(x) q(x_hat|x).

    Parameters
    ==========

    p_x: array_like
        Source distribution.
    d: array_like
        |X| x |X_hat| finite distortion matrix.
    beta: float
        Non-negative slope parameter. beta = 0 puts all mass
        on the reconstruction with the least expected
        distortion, the first one on ties.
    tol: float
        Bound in nats on the gap between the upper and lower
        estimates of the Lagrangian rate + beta*distortion.
        By default, 1e-9.
    max_iter: int
        By default, 100000.

    Returns
    =======

    RdPoint

    Raises
    ======

    InvalidDistribution
        When p_x is not a distribution.
    DomainError
        When beta is negative or d is not finite.
    NoConvergence
        When max_iter is exhausted.

    Examples
    ========

    >>> import math
    >>> from pygoalnet import blahut_arimoto
    >>> point = blahut_arimoto([0.5, 0.5], [[0, 1], [1, 0]],
    ...                        math.log(0.89/0.11))
    >>> round(point.distortion, 9), round(point.rate, 6)
    (0.11, 0.500084)
    """
    p_x = _as_distribution(p_x, "p_x", 1)
    d = _as_matrix(d, 'd', rows=p_x.size)
    if not beta >= 0.0 or not math.isfinite(beta):
        raise DomainError("beta must be finite and non-negative, got %s."
                          %(beta))
    if beta == 0.0:
        encoder = np.zeros(d.shape)
        encoder[:, int(np.argmin(p_x @ d))] = 1.0
        return RdPoint(0.0, float(np.sum(p_x @ (encoder*d))), encoder)
    q = np.full(d.shape[1], 1.0/d.shape[1])
    with np.errstate(divide='ignore'):
        for it in range(max_iter):
            logits = np.log(q)[None, :] - beta*d
            logits -= logits.max(axis=1, keepdims=True)
            encoder = np.exp(logits)
            encoder /= encoder.sum(axis=1, keepdims=True)
            new = p_x @ encoder
            live = q > 0.0
            ratio = new[live]/q[live]
            gap = math.log(ratio.max()) - float(q[live] @ np.log(ratio))
            if gap < tol:
                _logger.debug("Blahut-Arimoto converged in %s iterations "
                              "at beta=%s.", it + 1, beta)
                break
            q = new
        else:
            raise NoConvergence("Blahut-Arimoto did not converge in %s "
                                "iterations at beta=%s."%(max_iter, beta))
    distortion = float(np.sum(p_x[:, None]*encoder*d))
    return RdPoint(_rate_of(p_x, encoder), distortion, encoder)

def rate_utility(p_x, u, beta, tol=1e-9, max_iter=100000):
    """
    The rate-utility variant of Blahut-Arimoto, obtained with
    the distortion d = -u.

    Returns
    =======

    (rate, utility, encoder)
        utility is the expected utility reached by the encoder.

    Examples
    ========

    >>> from pygoalnet import rate_utility
    >>> rate, utility, _ = rate_utility([0.5, 0.5], [[1, 0], [0, 1]], 0)
    >>> rate, utility
    (0.0, 0.5)
    """
    u = _as_matrix(u, 'u')
    point = blahut_arimoto(p_x, -u, beta, tol, max_iter)
    return point.rate, -point.distortion + 0.0, point.encoder

def rd_curve(p_x, d, betas, tol=1e-9, max_iter=100000):
    """
    Sweeps Blahut-Arimoto over betas.

    Returns
    =======

    list of (beta, RdPoint)
    """
    return [(float(beta), blahut_arimoto(p_x, d, beta, tol, max_iter))
            for beta in betas]

def _bisect(feasible, lo, hi, tol):
    """
    Largest value in [lo, hi] satisfying a monotone predicate
    that holds at lo.
    """
    for _ in range(_BISECTION_STEPS):
        if hi - lo <= tol*max(hi, 1e-300):
            break
        mid = 0.5*(lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo

def _indirect_terms(sigma_s2, sigma_w2, a):
    sigma_x2 = a*a*sigma_s2 + sigma_w2
    if sigma_x2 > 0.0:
        return sigma_x2, sigma_s2*sigma_w2/sigma_x2, a*sigma_s2/sigma_x2
    return 0.0, sigma_s2, 0.0

def _indirect_scalar(sigma_s2, sigma_w2, a, D_s, D_x, tol):
    if not sigma_s2 > 0.0 or not sigma_w2 >= 0.0:
        raise DomainError("Need sigma_s2 > 0 and sigma_w2 >= 0, got %s and %s."
                          %(sigma_s2, sigma_w2))
    if not D_s > 0.0 or not D_x > 0.0:
        raise DomainError("Distortion budgets must be positive, got %s and %s."
                          %(D_s, D_x))
    sigma_x2, mmse, c = _indirect_terms(sigma_s2, sigma_w2, a)
    if D_s < mmse or (c != 0.0 and D_s <= mmse):
        raise Infeasible("D_s=%s is not above the estimation floor %s."
                         %(D_s, mmse))
    if sigma_x2 == 0.0:
        return 0.0, 0.0
    def feasible(d):
        return d <= D_x and mmse + c*c*d <= D_s
    if feasible(sigma_x2):
        return 0.0, sigma_x2
    d = _bisect(feasible, 0.0, sigma_x2, tol)
    _logger.debug("Indirect scalar rate-distortion: d=%.17g.", d)
    return 0.5*math.log2(sigma_x2/d), d

def indirect_rd_scalar(sigma_s2, sigma_w2, a, D_s, D_x, tol=1e-12):
    """
    Minimum rate to describe X = a S + W, S and W independent
    zero-mean Gaussians, so that the squared error on X is at
    most D_x and the MMSE error on S from the description is at
    most D_s.

    The reconstruction error d on X fixes both distortions:
    D_x(d) = d and D_s(d) = mmse + c^2 d, with
    mmse = sigma_s2 sigma_w2/sigma_x2 and c = a sigma_s2/sigma_x2.
    The largest d meeting both budgets is found by bisection.

    Returns
    =======

    rate: float
        Bits per sample; indirect_rd_error gives the matching d.

    Raises
    ======

    Infeasible
        When D_s is at or below the estimation floor mmse.

    Examples
    ========

    >>> from pygoalnet import indirect_rd_scalar
    >>> round(indirect_rd_scalar(1.0, 0.0, 1.0, 0.25, 10.0), 9)
    1.0
    """
    return _indirect_scalar(sigma_s2, sigma_w2, a, D_s, D_x, tol)[0]

def indirect_rd_error(sigma_s2, sigma_w2, a, D_s, D_x, tol=1e-12):
    """
    The largest reconstruction error d on X meeting both
    budgets of indirect_rd_scalar; d = sigma_x2 when no rate
    is needed.

    Examples
    ========

    >>> from pygoalnet import indirect_rd_error
    >>> round(indirect_rd_error(1.0, 1.0, 1.0, 0.6, 100.0), 9)
    0.4
    """
    return _indirect_scalar(sigma_s2, sigma_w2, a, D_s, D_x, tol)[1]

def indirect_rd_diagonal(sigma_s2, sigma_w2, a, D_s, D_x, tol=1e-12):
    """
    Vector form of indirect_rd_scalar for independent
    components with per-component scale a_i. The per-component
    errors take the form d_i = min(sigma_x2_i, 1/(lam + mu c_i^2))
    with the multipliers of both budgets found by nested
    bisection.

    Returns
    =======

    (rate, d)
        Total rate and the vector of per-component errors.

    Raises
    ======

    Infeasible
        When D_s does not exceed the summed estimation floors
        of the components that carry information about S.

    Examples
    ========

    >>> from pygoalnet import indirect_rd_diagonal
    >>> rate, d = indirect_rd_diagonal([4.0, 1.0], [0.0, 0.0], [1.0, 1.0],
    ...                                100.0, 1.0)
    >>> round(rate, 9), [round(x, 9) for x in d]
    (2.0, [0.5, 0.5])
    """
    sigma_s2 = _as_vector(sigma_s2, 'sigma_s2')
    k = sigma_s2.size
    sigma_w2 = _as_vector(sigma_w2, 'sigma_w2', k)
    a = _as_vector(a, 'a', k)
    if not np.all(sigma_s2 > 0.0) or not np.all(sigma_w2 >= 0.0):
        raise DomainError("Need sigma_s2 > 0 and sigma_w2 >= 0 componentwise.")
    if not D_s > 0.0 or not D_x > 0.0:
        raise DomainError("Distortion budgets must be positive, got %s and %s."
                          %(D_s, D_x))
    terms = np.array([_indirect_terms(*args)
                      for args in zip(sigma_s2, sigma_w2, a)])
    sigma_x2, mmse, c = terms[:, 0], terms[:, 1], terms[:, 2]
    c2 = c*c
    slack = D_s - float(mmse.sum())
    informative = c2 > 0.0
    if slack < 0.0 or (slack == 0.0 and np.any(informative)):
        raise Infeasible("D_s=%s is not above the summed estimation floor %s."
                         %(D_s, float(mmse.sum())))

    def errors(lam, mu):
        weight = lam + mu*c2
        inv = np.full(k, np.inf)
        np.divide(1.0, weight, out=inv, where=weight > 0.0)
        return np.minimum(sigma_x2, inv)

    def level(too_big, lo=0.0):
        """
        Smallest multiplier in [lo, inf) at which too_big fails.
        """
        if not too_big(lo):
            return lo
        hi = max(lo, 1.0)
        while too_big(hi):
            hi *= 2.0
        for _ in range(_BISECTION_STEPS):
            if hi - lo <= tol*hi:
                break
            mid = 0.5*(lo + hi)
            if too_big(mid):
                lo = mid
            else:
                hi = mid
        return hi

    def lam_for(mu):
        return level(lambda lam: errors(lam, mu).sum() > D_x)

    lam = lam_for(0.0)
    d = errors(lam, 0.0)
    if float(c2 @ d) > slack:
        mu = level(lambda mu: float(c2 @ errors(lam_for(mu), mu)) > slack)
        d = errors(lam_for(mu), mu)
    positive = sigma_x2 > 0.0
    rate = float(np.sum(0.5*np.log2(sigma_x2[positive]/d[positive])))
    _logger.debug("Indirect diagonal rate-distortion: rate=%.17g.", rate)
    return max(rate, 0.0), d
