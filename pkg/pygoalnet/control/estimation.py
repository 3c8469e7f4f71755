"""
Online estimation: the smart sensor's steady-state Kalman
filter with its innovation accumulator, and the controller's
estimate under intermittent packet reception.
"""
import numpy as np
from pygoalnet.utils.misc_util import _as_vector, DomainError

__all__ = [
    'SensorFilterState',
    'ControllerState',
    'sensor_step',
    'sensor_time_update',
    'sensor_on_delivery',
    'controller_on_receive',
    'controller_on_loss',
    'controller_predict'
]

class SensorFilterState(object):
    """
    Represents the state of a smart sensor.

    Parameters
    ==========

    x_pred: array_like
        The a-priori estimate.
    x_post: array_like
        Optional, the a-posteriori estimate.
        By default, equal to x_pred.
    e_check: array_like
        Optional, the innovation accumulator, i.e. the part of
        the sensor estimate the controller has not yet received.
        By default, zeros.

    Examples
    ========

    >>> from pygoalnet import SensorFilterState
    >>> s = SensorFilterState([0.0])
    >>> s.e_check.tolist()
    [0.0]
    """

    __slots__ = ['x_pred', 'x_post', 'e_check']

    def __new__(cls, x_pred, x_post=None, e_check=None):
        obj = object.__new__(cls)
        obj.x_pred = _as_vector(x_pred, 'x_pred')
        n = obj.x_pred.shape[0]
        obj.x_post = obj.x_pred.copy() if x_post is None else \
            _as_vector(x_post, 'x_post', n)
        obj.e_check = np.zeros(n) if e_check is None else \
            _as_vector(e_check, 'e_check', n)
        return obj

    def __str__(self):
        return str((self.x_pred.tolist(), self.x_post.tolist(),
                    self.e_check.tolist()))

class ControllerState(object):
    """
    Represents the state of a remote controller.

    Parameters
    ==========

    last_rx: array_like
        The most recently received sensor estimate.
    t_since: int
        Optional, slots since the last reception. By default, 0.
    x_hat: array_like
        Optional, the current controller estimate.
        By default, equal to last_rx.
    """

    __slots__ = ['x_hat', 't_since', 'last_rx']

    def __new__(cls, last_rx, t_since=0, x_hat=None):
        obj = object.__new__(cls)
        if t_since < 0:
            raise DomainError("t_since must be non-negative, got %s."%(t_since))
        obj.last_rx = _as_vector(last_rx, 'last_rx')
        obj.t_since = int(t_since)
        obj.x_hat = obj.last_rx.copy() if x_hat is None else \
            _as_vector(x_hat, 'x_hat', obj.last_rx.shape[0])
        return obj

    def __str__(self):
        return str((self.x_hat.tolist(), self.t_since, self.last_rx.tolist()))

# The in-place kernels below skip validation; the simulator calls
# them once per slot on states it built itself.

def _correct(state, y_k, synth, loop):
    correction = synth.K_gain @ (y_k - loop.C @ state.x_pred)
    state.x_post = state.x_pred + correction
    state.e_check = loop.A @ state.e_check + correction
    return state

def _advance(state, u_k, loop):
    state.x_pred = loop.A @ state.x_post + loop.B @ u_k
    return state

def _deliver(state):
    state.e_check = np.zeros_like(state.e_check)
    return state

def _receive(ctrl, x_sensor_post):
    ctrl.last_rx = ctrl.x_hat = x_sensor_post
    ctrl.t_since = 0
    return ctrl

def _coast(ctrl, closed):
    """
    One slot without reception: x_hat <- (A + B L) x_hat,
    which keeps x_hat equal to (A + B L)^t last_rx.
    """
    ctrl.t_since += 1
    ctrl.x_hat = closed @ ctrl.x_hat
    return ctrl

def sensor_step(state, y_k, u_prev, synth, loop):
    """
    Performs the measurement update of the sensor filter
    for the measurement y_k.

    Parameters
    ==========

    state: SensorFilterState
        The state whose x_pred is the a-priori estimate of
        the current slot.
    y_k: array_like
        The measurement.
    u_prev: array_like
        The input applied in the previous slot. It enters
        x_pred through sensor_time_update, so here it is only
        checked against the input dimension.
    synth: LoopSynthesis
    loop: LoopSpec

    Returns
    =======

    state: SensorFilterState
        x_post = x_pred + K nu with nu = y - C x_pred and
        e_check advanced as A e_check + K nu.

    Examples
    ========

    >>> from pygoalnet import (LoopSpec, synthesize_loop,
    ...                        SensorFilterState, sensor_step)
    >>> loop = LoopSpec(1, 1, 1, 1, 0, 1, 1)
    >>> s = sensor_step(SensorFilterState([0.0]), [3.0], [0.0],
    ...                 synthesize_loop(loop), loop)
    >>> s.x_post.tolist()
    [3.0]
    """
    y_k = _as_vector(y_k, 'y_k', loop.p)
    _as_vector(u_prev, 'u_prev', loop.m)
    return _correct(SensorFilterState(state.x_pred, None, state.e_check),
                    y_k, synth, loop)

def sensor_time_update(state, u_k, loop):
    """
    Propagates the a-posteriori estimate to the next slot's
    a-priori estimate A x_post + B u_k.
    """
    u_k = _as_vector(u_k, 'u_k', loop.m)
    return _advance(SensorFilterState(state.x_pred, state.x_post,
                                      state.e_check), u_k, loop)

def sensor_on_delivery(state):
    """
    Resets the innovation accumulator after a successful delivery.
    """
    return _deliver(SensorFilterState(state.x_pred, state.x_post,
                                      state.e_check))

def controller_on_receive(ctrl, x_sensor_post):
    """
    Synchronizes the controller with a received sensor estimate.

    Examples
    ========

    >>> from pygoalnet import ControllerState, controller_on_receive
    >>> c = controller_on_receive(ControllerState([0.0], 5), [2.0])
    >>> c.t_since, c.x_hat.tolist()
    (0, [2.0])
    """
    x = _as_vector(x_sensor_post, 'x_sensor_post', ctrl.last_rx.shape[0])
    return ControllerState(x, 0, x)

def controller_on_loss(ctrl):
    """
    Advances the staleness counter in a slot without reception.
    """
    return ControllerState(ctrl.last_rx, ctrl.t_since + 1, ctrl.x_hat)

def controller_predict(ctrl, synth, loop, ladder=None):
    """
    Computes the controller estimate and its error covariance.

    Parameters
    ==========

    ctrl: ControllerState
    synth: LoopSynthesis
    loop: LoopSpec
    ladder: CovarianceLadder
        Optional, a cache of h^t(P_bar) for this loop.

    Returns
    =======

    (x_hat, P)
        x_hat = (A + B L)^t last_rx and P = h^t(P_bar)
        with t = ctrl.t_since.
    """
    from pygoalnet.control.synthesis import cov_propagate
    t = ctrl.t_since
    if t == 0:
        x_hat = ctrl.last_rx.copy()
    else:
        closed = loop.A + loop.B @ synth.L_inf
        x_hat = np.linalg.matrix_power(closed, t) @ ctrl.last_rx
    if ladder is not None:
        P = ladder[t]
    else:
        P = cov_propagate(synth.P_bar, t, loop.A, loop.W)
    return x_hat, P
