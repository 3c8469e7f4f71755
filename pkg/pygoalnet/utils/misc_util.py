import numpy as np
from scipy import linalg

__all__ = [
    'GoalNetError',
    'ParseError',
    'DimensionError',
    'DomainError',
    'InvalidDistribution',
    'Infeasible',
    'InfeasibleAlways',
    'TooLarge',
    'EmptyTrace',
    'SynthesisMissing',
    'NoConvergence',
    'NumericalError',
    'NumericalOverflow'
]

_check_type = lambda a, t: isinstance(a, t)

PSD_TOL = 1e-9
COND_LIMIT = 1e12

class GoalNetError(Exception):
    """
    Abstract class for all errors raised by pygoalnet.
    """
    pass

class ParseError(GoalNetError, ValueError):
    """
    Raised when a configuration or data document is malformed.
    """
    pass

class DimensionError(GoalNetError, ValueError):
    """
    Raised when array shapes are inconsistent with each other.
    """
    pass

class DomainError(GoalNetError, ValueError):
    """
    Raised when a value lies outside the domain of an operation.
    """
    pass

class InvalidDistribution(DomainError):
    """
    Raised when a table is not a probability distribution.
    """
    pass

class Infeasible(DomainError):
    """
    Raised when distortion targets cannot be met at any rate.
    """
    pass

class InfeasibleAlways(DomainError):
    """
    Raised when the always-transmit policy has fewer
    channels than sensors.
    """
    pass

class TooLarge(GoalNetError, ValueError):
    """
    Raised when an exhaustive search is requested on
    an instance too large to enumerate.
    """
    pass

class EmptyTrace(GoalNetError, ValueError):
    """
    Raised when a statistic is requested from an empty trace.
    """
    pass

class SynthesisMissing(GoalNetError, ValueError):
    """
    Raised when a simulation is started without the
    offline synthesis of every loop.
    """
    pass

class NoConvergence(GoalNetError, ArithmeticError):
    """
    Raised when an iterative solver exhausts its iteration budget.
    """
    pass

class NumericalError(GoalNetError, ArithmeticError):
    """
    Raised when a linear solve is too ill-conditioned to trust.
    """
    pass

class NumericalOverflow(NumericalError):
    """
    Raised when a simulated state grows beyond the
    divergence threshold.

    Note
    ====

    The following are the data members of the class:

    slot: int
        The slot at which divergence was detected.
    loop: int
        The index of the diverging loop.
    """
    def __init__(self, message, slot=None, loop=None):
        super().__init__(message)
        self.slot, self.loop = slot, loop

def _as_float_array(value, name):
    try:
        return np.asarray(value, dtype=float)
    except (TypeError, ValueError) as err:
        raise ParseError("%s is not a rectangular numeric array: %s"
                         %(name, err))

def _as_matrix(value, name, rows=None, cols=None):
    """
    Converts a scalar or nested list into a 2-D float array,
    checking the expected shape when given.
    """
    if _check_type(value, bool):
        raise DimensionError("%s must be numeric, got a boolean."%(name))
    if _check_type(value, (int, float)):
        value = [[value]]
    arr = _as_float_array(value, name)
    if arr.ndim != 2:
        raise DimensionError("%s must be a matrix (nested array), "
                             "got %s dimension(s)."%(name, arr.ndim))
    if rows is not None and arr.shape[0] != rows:
        raise DimensionError("%s has %s rows, expected %s."
                             %(name, arr.shape[0], rows))
    if cols is not None and arr.shape[1] != cols:
        raise DimensionError("%s has %s columns, expected %s."
                             %(name, arr.shape[1], cols))
    if not np.all(np.isfinite(arr)):
        raise DomainError("%s contains non-finite entries."%(name))
    return arr

def _as_vector(value, name, size=None):
    """
    Converts a scalar or flat list into a 1-D float array.
    """
    if _check_type(value, (int, float)) and not _check_type(value, bool):
        value = [value]
    arr = _as_float_array(value, name)
    if arr.ndim != 1:
        raise DimensionError("%s must be a flat array, got %s dimension(s)."
                             %(name, arr.ndim))
    if size is not None and arr.shape[0] != size:
        raise DimensionError("%s has length %s, expected %s."
                             %(name, arr.shape[0], size))
    if not np.all(np.isfinite(arr)):
        raise DomainError("%s contains non-finite entries."%(name))
    return arr

def _sym(X):
    return 0.5*(X + X.T)

def _min_eig(X):
    if X.size == 0:
        return 0.0
    return float(linalg.eigh(_sym(X), eigvals_only=True)[0])

def _is_psd(X, tol=PSD_TOL):
    """
    Checks positive semi-definiteness of the symmetric part of X.
    """
    return _min_eig(X) >= -tol

def _covariance_factor(X):
    """
    Returns F with F F^T equal to the PSD matrix X, taken from
    the eigen-decomposition with eigenvalues clamped at zero so
    that singular covariances are supported.
    """
    w, U = linalg.eigh(_sym(X))
    return U*np.sqrt(np.clip(w, 0.0, None))

def _solve_sym(S, rhs, name="matrix"):
    """
    Solves S Z = rhs for symmetric S, refusing ill-conditioned systems.
    """
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericalError("%s is too ill-conditioned to solve "
                             "(condition estimate %s)."%(name, cond))
    return linalg.solve(S, rhs, assume_a='sym')
