"""
Slot-by-slot simulation of the multi-loop system and
Monte-Carlo comparison of channel-access policies.
"""
import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from pygoalnet.control.synthesis import CovarianceLadder, synthesize
from pygoalnet.control.estimation import (
    SensorFilterState, ControllerState, _correct, _advance, _deliver,
    _receive, _coast)
from pygoalnet.networks.metrics import (
    AoiTracker, aoi_update, aoi_summary, priority_matrix, loop_metric)
from pygoalnet.networks.scheduling import (
    BASELINES, assign_max_weight, assign_baseline)
from pygoalnet.networks.channel import realize
from pygoalnet.utils.misc_util import (
    _check_type, _covariance_factor, DimensionError, DomainError,
    EmptyTrace, SynthesisMissing, NumericalOverflow)

__all__ = [
    'Trace',
    'PolicyReport',
    'ComparisonReport',
    'stream_rng',
    'run_episode',
    'empirical_cost',
    'monte_carlo_compare',
    'write_trace_csv',
    'summary_to_json',
    'comparison_to_json',
    'format_comparison_table'
]

_logger = logging.getLogger(__name__)

DIVERGENCE_NORM = 1e12
Z_95 = 1.959963984540054

# Random streams are keyed by (run, loop, stream); per-run streams
# that do not belong to a loop use the GLOBAL_LOOP key.
STREAM_INIT, STREAM_PROCESS, STREAM_MEASUREMENT = 0, 1, 2
STREAM_CHANNEL, STREAM_POLICY = 3, 4
GLOBAL_LOOP = 2**32 - 1

TRACE_HEADER = ('k', 'loop', 't_since', 'metric', 'channel', 'received',
                'stage_cost')

def stream_rng(seed, run, loop, stream):
    """
    Returns the generator of one random stream. The base seed
    is mixed with (run, loop, stream) by numpy's SeedSequence,
    whose output is stable across numpy releases.

    Examples
    ========

    >>> from pygoalnet import stream_rng
    >>> a = stream_rng(7, 0, 1, 2).random()
    >>> b = stream_rng(7, 0, 1, 2).random()
    >>> a == b
    True
    """
    sequence = np.random.SeedSequence(entropy=seed,
                                      spawn_key=(run, loop, stream))
    return np.random.default_rng(sequence)

def _fmt(value):
    return '%.17g'%(value)

class Trace(object):
    """
    Per-slot, per-loop record of an episode.

    Parameters
    ==========

    stage_cost: array_like
        K x N matrix of x'Qx + u'Ru.
    t_since: array_like
        Optional, K x N staleness counters. By default, zeros.
    metric: array_like
        Optional, K x N priority metric values, NaN where the
        policy uses no metric. By default, all NaN.
    channel: array_like
        Optional, K x N channel indices, -1 when silent.
        By default, all -1.
    received: array_like
        Optional, K x N reception flags. By default, False.
    policy: str
        Optional, the policy that produced the trace.

    Note
    ====

    len(trace) is K*N; records() yields them ordered by slot
    and then by loop.
    """

    __slots__ = ['stage_cost', 't_since', 'metric', 'channel', 'received',
                 'policy']

    def __new__(cls, stage_cost, t_since=None, metric=None, channel=None,
                received=None, policy=None):
        obj = object.__new__(cls)
        obj.stage_cost = np.asarray(stage_cost, dtype=float)
        if obj.stage_cost.ndim != 2:
            raise DimensionError("stage_cost must be a K x N matrix.")
        shape = obj.stage_cost.shape
        obj.t_since = np.zeros(shape, dtype=np.int64) if t_since is None \
            else np.asarray(t_since, dtype=np.int64)
        obj.metric = np.full(shape, np.nan) if metric is None \
            else np.asarray(metric, dtype=float)
        obj.channel = np.full(shape, -1, dtype=np.int64) if channel is None \
            else np.asarray(channel, dtype=np.int64)
        obj.received = np.zeros(shape, dtype=bool) if received is None \
            else np.asarray(received, dtype=bool)
        for key in ('t_since', 'metric', 'channel', 'received'):
            if getattr(obj, key).shape != shape:
                raise DimensionError("%s has shape %s, expected %s."
                                     %(key, getattr(obj, key).shape, shape))
        obj.policy = policy
        return obj

    @property
    def horizon(self):
        return self.stage_cost.shape[0]

    @property
    def num_loops(self):
        return self.stage_cost.shape[1]

    def __len__(self):
        return self.stage_cost.size

    def records(self):
        for k in range(self.horizon):
            for i in range(self.num_loops):
                channel = int(self.channel[k, i])
                metric = float(self.metric[k, i])
                yield (k, i, int(self.t_since[k, i]),
                       None if math.isnan(metric) else metric,
                       None if channel < 0 else channel,
                       bool(self.received[k, i]),
                       float(self.stage_cost[k, i]))

def empirical_cost(trace):
    """
    Finite-horizon average of the summed stage costs.

    Raises
    ======

    EmptyTrace
        When the trace has no slot.

    Examples
    ========

    >>> from pygoalnet import Trace, empirical_cost
    >>> empirical_cost(Trace([[2.0], [4.0]]))
    3.0
    """
    if trace.horizon == 0 or trace.num_loops == 0:
        raise EmptyTrace("Empirical cost requested for an empty trace.")
    return float(trace.stage_cost.sum())/trace.horizon

class _LoopWorld(object):
    """
    Mutable per-loop part of the world state.
    """

    __slots__ = ['x', 'sensor', 'ctrl', 'aoi', 'ladder', 'closed',
                 'process', 'measurement']

    def __new__(cls, loop, synth, seed, run, index, horizon):
        obj = object.__new__(cls)
        init = stream_rng(seed, run, index, STREAM_INIT)
        obj.x = loop.x0_mean + _covariance_factor(loop.x0_cov) @ \
            init.standard_normal(loop.n)
        obj.process = stream_rng(seed, run, index, STREAM_PROCESS).\
            standard_normal((horizon, loop.n)) @ _covariance_factor(loop.W).T
        obj.measurement = stream_rng(seed, run, index, STREAM_MEASUREMENT).\
            standard_normal((horizon, loop.p)) @ _covariance_factor(loop.V).T
        obj.sensor = SensorFilterState(loop.x0_mean)
        obj.ctrl = ControllerState(loop.x0_mean)
        obj.aoi = AoiTracker()
        obj.ladder = CovarianceLadder(synth, loop)
        obj.closed = loop.A + loop.B @ synth.L_inf
        return obj

def _check_synthesis(scenario, synths):
    if synths is None or len(synths) != scenario.num_loops or \
        any(s is None for s in synths):
        raise SynthesisMissing("Every loop needs a LoopSynthesis before the "
                               "episode can run.")
    for i, (loop, synth) in enumerate(zip(scenario.loops, synths)):
        if synth.L_inf.shape != (loop.m, loop.n) or \
            synth.K_gain.shape != (loop.n, loop.p):
            raise DimensionError("Synthesis of loop %s does not match its "
                                 "dimensions."%(i))

def _decide(scenario, synths, worlds, k, policy_rng):
    N, M = scenario.num_loops, scenario.num_channels
    if scenario.policy in BASELINES:
        return assign_baseline(scenario.policy, k, N, M, policy_rng), None
    values = np.array([loop_metric(scenario.policy, synth, loop,
                                   world.ctrl.t_since, world.sensor.e_check,
                                   world.ladder)
                       for loop, synth, world in
                       zip(scenario.loops, synths, worlds)])
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NumericalOverflow("Priority metric of loop %s overflowed at "
                                "slot %s."%(bad, k), slot=k, loop=bad)
    q_bar = scenario.success_prob
    if scenario.policy == 'voi' and not scenario.voi_q_weighting:
        q_bar = np.ones_like(q_bar)
    return assign_max_weight(priority_matrix(values, q_bar)), values

def run_episode(scenario, synths, run=0):
    """
    Simulates one episode of the scenario's policy.

    Within a slot: the plant emits y_k, the sensor filter
    updates, the scheduler decides, the channel realizes, the
    controller receives or predicts, u_k = L x_hat is applied
    and finally the time update advances plant and sensor.

    Parameters
    ==========

    scenario: Scenario
    synths: list
        LoopSynthesis of every loop.
    run: int
        Optional, the Monte-Carlo run index keying the random
        streams. By default, 0.

    Returns
    =======

    (trace, summary)
        summary is a dict with keys 'policy', 'mean_cost',
        'aaoi', 'paoi' and 'receptions'.

    Raises
    ======

    SynthesisMissing
        When synths does not cover every loop.
    NumericalOverflow
        When a state norm exceeds 1e12.
    InfeasibleAlways
        For the always policy with fewer channels than loops.
    """
    _check_synthesis(scenario, synths)
    K, N, M = scenario.horizon, scenario.num_loops, scenario.num_channels
    if scenario.policy == 'always':
        assign_baseline('always', 0, N, M)
    seed = scenario.seed
    worlds = [_LoopWorld(loop, synth, seed, run, i, K) for i, (loop, synth)
              in enumerate(zip(scenario.loops, synths))]
    channel_rng = stream_rng(seed, run, GLOBAL_LOOP, STREAM_CHANNEL)
    policy_rng = stream_rng(seed, run, GLOBAL_LOOP, STREAM_POLICY)
    shape = (K, N)
    stage_cost, t_since = np.zeros(shape), np.zeros(shape, dtype=np.int64)
    metric, channel = np.full(shape, np.nan), np.full(shape, -1, dtype=np.int64)
    received = np.zeros(shape, dtype=bool)
    for k in range(K):
        for loop, synth, world in zip(scenario.loops, synths, worlds):
            y = loop.C @ world.x + world.measurement[k]
            _correct(world.sensor, y, synth, loop)
        decision, values = _decide(scenario, synths, worlds, k, policy_rng)
        outcome = realize(decision, scenario.success_prob, channel_rng)
        for i, (loop, synth, world) in enumerate(
            zip(scenario.loops, synths, worlds)):
            rx = bool(outcome.theta[i])
            if rx:
                _receive(world.ctrl, world.sensor.x_post)
                _deliver(world.sensor)
            else:
                _coast(world.ctrl, world.closed)
            aoi_update(world.aoi, rx)
            u = synth.L_inf @ world.ctrl.x_hat
            stage_cost[k, i] = float(world.x @ loop.Q @ world.x +
                                     u @ loop.R @ u)
            world.x = loop.A @ world.x + loop.B @ u + world.process[k]
            _advance(world.sensor, u, loop)
            if not np.linalg.norm(world.x) <= DIVERGENCE_NORM:
                raise NumericalOverflow("State of loop %s diverged at slot %s "
                                        "under policy %s."
                                        %(i, k, scenario.policy),
                                        slot=k, loop=i)
            t_since[k, i] = world.ctrl.t_since
            received[k, i] = rx
            chosen = decision.channel_of(i)
            channel[k, i] = -1 if chosen is None else chosen
            if values is not None:
                metric[k, i] = values[i]
    trace = Trace(stage_cost, t_since, metric, channel, received,
                  scenario.policy)
    summaries = [aoi_summary(world.aoi) for world in worlds]
    summary = {
        'policy': scenario.policy,
        'mean_cost': empirical_cost(trace),
        'aaoi': [aaoi for aaoi, _ in summaries],
        'paoi': [paoi for _, paoi in summaries],
        'receptions': [int(n) for n in received.sum(axis=0)]
    }
    _logger.info("Episode run=%s policy=%s finished: mean cost %.6g.",
                 run, scenario.policy, summary['mean_cost'])
    return trace, summary

class PolicyReport(object):
    """
    Aggregated Monte-Carlo statistics of one policy.

    Parameters
    ==========

    policy: str
    costs: list
        Per-run mean cost, None for diverged runs.
    aaoi: list
        Per-run lists of per-loop AAoI, None for diverged runs.
    paoi: list
        Per-run lists of per-loop PAoI, None for diverged runs.

    Note
    ====

    mean_cost, std_cost (sample standard deviation) and ci95
    (normal approximation) exclude diverged runs; they are None
    when too few runs remain.
    """

    __slots__ = ['policy', 'costs', 'mean_cost', 'std_cost', 'ci95',
                 'diverged_runs', 'aaoi', 'paoi']

    def __new__(cls, policy, costs, aaoi, paoi):
        obj = object.__new__(cls)
        obj.policy, obj.costs = policy, list(costs)
        kept = [c for c in obj.costs if c is not None]
        obj.diverged_runs = len(obj.costs) - len(kept)
        obj.mean_cost = float(np.mean(kept)) if kept else None
        obj.std_cost = float(np.std(kept, ddof=1)) if len(kept) >= 2 else None
        if obj.std_cost is not None:
            half = Z_95*obj.std_cost/math.sqrt(len(kept))
            obj.ci95 = [obj.mean_cost - half, obj.mean_cost + half]
        else:
            obj.ci95 = None
        obj.aaoi = cls._per_loop_mean(aaoi)
        obj.paoi = cls._per_loop_mean(paoi)
        return obj

    @staticmethod
    def _per_loop_mean(per_run):
        per_run = [values for values in per_run if values is not None]
        if not per_run:
            return None
        means = []
        for i in range(len(per_run[0])):
            column = [values[i] for values in per_run if values[i] is not None]
            means.append(float(np.mean(column)) if column else None)
        return means

    def to_dict(self):
        return {
            'policy': self.policy,
            'mean_cost': self.mean_cost,
            'std_cost': self.std_cost,
            'ci95': self.ci95,
            'diverged_runs': self.diverged_runs,
            'aaoi': self.aaoi,
            'paoi': self.paoi
        }

class ComparisonReport(object):
    """
    Result of monte_carlo_compare.

    Parameters
    ==========

    entries: list
        PolicyReport objects in the requested policy order.
    runs: int
    seed: int
    """

    __slots__ = ['entries', 'runs', 'seed']

    def __new__(cls, entries, runs, seed):
        obj = object.__new__(cls)
        obj.entries, obj.runs, obj.seed = list(entries), runs, seed
        return obj

    def __getitem__(self, policy):
        for entry in self.entries:
            if entry.policy == policy:
                return entry
        raise KeyError(policy)

    def ranked(self):
        """
        Entries sorted by mean cost, fully diverged policies last.
        """
        return sorted(self.entries, key=lambda e: (
            e.mean_cost is None, e.mean_cost or 0.0))

    def to_dict(self):
        return {
            'runs': self.runs,
            'seed': self.seed,
            'policies': [entry.to_dict() for entry in self.entries]
        }

def _run_task(scenario, synths, run):
    try:
        _, summary = run_episode(scenario, synths, run)
    except NumericalOverflow as err:
        _logger.warning("Run %s of policy %s diverged: %s",
                        run, scenario.policy, err)
        return None
    return summary

def monte_carlo_compare(scenario, policies, runs, num_threads=None,
                        synths=None):
    """
    Compares policies over common random numbers.

    Parameters
    ==========

    scenario: Scenario
        Its policy field is ignored.
    policies: list
        Policy names.
    runs: int
        At least 2. Run r of every policy uses the noise
        streams keyed by r, so all policies face identical
        disturbances.
    num_threads: int
        Optional, number of worker threads; runs are independent
        and folded in run order. By default, sequential.
    synths: list
        Optional, precomputed syntheses. By default, computed.

    Returns
    =======

    report: ComparisonReport

    Raises
    ======

    DomainError
        When runs < 2 or a policy is unknown.
    InfeasibleAlways
        When 'always' is requested with M < N.
    """
    if not _check_type(runs, int) or runs < 2:
        raise DomainError("At least 2 runs are needed for a confidence "
                          "interval, got %s."%(runs,))
    if not policies:
        raise DomainError("At least one policy is required.")
    scenarios = [scenario.replace(policy=policy) for policy in policies]
    if 'always' in policies:
        assign_baseline('always', 0, scenario.num_loops,
                        scenario.num_channels)
    if synths is None:
        synths = synthesize(scenario)
    tasks = [(s, r) for s in scenarios for r in range(runs)]
    if num_threads is None or num_threads <= 1:
        results = [_run_task(s, synths, r) for s, r in tasks]
    else:
        with ThreadPoolExecutor(max_workers=num_threads) as Executor:
            futures = [Executor.submit(_run_task, s, synths, r)
                       for s, r in tasks]
            results = [future.result() for future in futures]
    entries = []
    for p, policy in enumerate(policies):
        chunk = results[p*runs:(p + 1)*runs]
        entries.append(PolicyReport(
            policy,
            [None if s is None else s['mean_cost'] for s in chunk],
            [None if s is None else s['aaoi'] for s in chunk],
            [None if s is None else s['paoi'] for s in chunk]))
        _logger.info("Policy %s: mean cost %s over %s runs (%s diverged).",
                     policy, entries[-1].mean_cost, runs,
                     entries[-1].diverged_runs)
    return ComparisonReport(entries, runs, scenario.seed)

def write_trace_csv(trace, file):
    """
    Writes the trace as CSV with header
    k,loop,t_since,metric,channel,received,stage_cost.
    """
    writer = csv.writer(file, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for k, i, t, metric, chan, rx, cost in trace.records():
        writer.writerow((k, i, t, '' if metric is None else _fmt(metric),
                         '' if chan is None else chan, int(rx), _fmt(cost)))

def summary_to_json(summary, diverged=False):
    """
    Serializes an episode summary with the keys shared with
    comparison entries.
    """
    data = {
        'policy': summary['policy'],
        'mean_cost': summary['mean_cost'],
        'std_cost': None,
        'ci95': None,
        'diverged_runs': int(diverged),
        'aaoi': summary['aaoi'],
        'paoi': summary['paoi']
    }
    return json.dumps(data, indent=2) + "\n"

def comparison_to_json(report):
    return json.dumps(report.to_dict(), indent=2) + "\n"

def format_comparison_table(report):
    """
    Plain-text ranking of policies by mean cost.
    """
    lines = ["%-4s %-12s %18s %18s %18s %8s"%(
        "rank", "policy", "mean_cost", "ci95_low", "ci95_high", "diverged")]
    for rank, entry in enumerate(report.ranked(), 1):
        low, high = entry.ci95 if entry.ci95 is not None else (None, None)
        cells = ['-' if v is None else '%.10g'%(v)
                 for v in (entry.mean_cost, low, high)]
        lines.append("%-4s %-12s %18s %18s %18s %8s"%(
            rank, entry.policy, cells[0], cells[1], cells[2],
            entry.diverged_runs))
    return "\n".join(lines) + "\n"
