"""
Command-line entry point: ``run``, ``compare`` and ``curves``.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
import numpy as np
from pygoalnet.control.scenario import POLICIES, load_scenario
from pygoalnet.control.synthesis import synthesize
from pygoalnet.information.rate_distortion import rd_curve
from pygoalnet.information.bottleneck import ib_curve
from pygoalnet.simulation.simulator import (
    run_episode, monte_carlo_compare, write_trace_csv, summary_to_json,
    comparison_to_json, format_comparison_table)
from pygoalnet.utils.misc_util import (
    _check_type, GoalNetError, ParseError, DomainError, NumericalOverflow)

__all__ = [
    'RunConfig',
    'cmd_run',
    'cmd_compare',
    'cmd_curves',
    'parse_betas',
    'main'
]

_logger = logging.getLogger(__name__)

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2, 3

class RunConfig(object):
    """
    Represents the scenario-related arguments shared by the
    run and compare commands.

    Parameters
    ==========

    scenario_path: str
    out_dir: str
        Created when absent.
    policy_override: str
        Optional.
    horizon_override: int
        Optional.
    seed_override: int
        Optional.
    """

    __slots__ = ['scenario_path', 'out_dir', 'policy_override',
                 'horizon_override', 'seed_override']

    def __new__(cls, scenario_path, out_dir, policy_override=None,
                horizon_override=None, seed_override=None):
        obj = object.__new__(cls)
        obj.scenario_path, obj.out_dir = scenario_path, out_dir
        obj.policy_override = policy_override
        obj.horizon_override = horizon_override
        obj.seed_override = seed_override
        return obj

    def load(self):
        """
        Loads the scenario and applies the overrides, which go
        through the same validation as the file contents.
        """
        if not os.path.isfile(self.scenario_path):
            raise FileNotFoundError(self.scenario_path)
        return load_scenario(self.scenario_path).replace(
            policy=self.policy_override, horizon=self.horizon_override,
            seed=self.seed_override)

class _ScenarioNotFound(Exception):
    pass

def _fail(code, message):
    sys.stderr.write("error: %s\n"%(" ".join(str(message).split())))
    return code

def _write_atomic(out_dir, artifacts):
    """
    Writes every (name, text) pair to a temporary file in
    out_dir and renames them into place only once all of them
    were written.
    """
    os.makedirs(out_dir, exist_ok=True)
    staged = []
    try:
        for name, text in artifacts:
            fd, tmp = tempfile.mkstemp(prefix="." + name + ".", dir=out_dir)
            staged.append((tmp, os.path.join(out_dir, name)))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as file:
                file.write(text)
        for tmp, final in staged:
            os.replace(tmp, final)
            _logger.info("Wrote %s.", final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.remove(tmp)

def _load(config):
    try:
        return config.load()
    except FileNotFoundError:
        raise _ScenarioNotFound(config.scenario_path)

def _guard(action):
    """
    Runs a command body and maps its errors to exit codes.
    """
    try:
        return action()
    except _ScenarioNotFound as err:
        return _fail(EXIT_CONFIG, "scenario not found: %s"%(err))
    except NumericalOverflow as err:
        return _fail(EXIT_DIVERGED, "diverged: %s"%(err))
    except GoalNetError as err:
        return _fail(EXIT_CONFIG, "%s: %s"%(type(err).__name__, err))
    except OSError as err:
        return _fail(EXIT_IO, "%s"%(err))

def cmd_run(config):
    """
    Simulates one episode and writes trace.csv and
    summary.json into config.out_dir; the summary is also
    printed to standard output.

    Returns
    =======

    int
        0 on success, 1 on I/O errors, 2 on configuration
        errors and 3 when the episode diverged.
    """
    def action():
        scenario = _load(config)
        trace, summary = run_episode(scenario, synthesize(scenario))
        buffer = io.StringIO(newline="")
        write_trace_csv(trace, buffer)
        text = summary_to_json(summary)
        _write_atomic(config.out_dir, [("trace.csv", buffer.getvalue()),
                                       ("summary.json", text)])
        sys.stdout.write(text)
        return EXIT_OK
    return _guard(action)

def cmd_compare(config, policies, runs, num_threads=None):
    """
    Runs monte_carlo_compare, writes comparison.json into
    config.out_dir and prints the ranking table to standard
    output.

    Returns
    =======

    int
        As cmd_run; 3 when every run of every policy diverged.
    """
    def action():
        scenario = _load(config)
        unknown = [p for p in policies if p not in POLICIES]
        if unknown:
            raise DomainError("Unknown policies %s."%(", ".join(unknown)))
        report = monte_carlo_compare(scenario, policies, runs,
                                     num_threads=num_threads)
        if all(entry.mean_cost is None for entry in report.entries):
            raise NumericalOverflow("All %s runs of every policy diverged."
                                    %(runs))
        _write_atomic(config.out_dir,
                      [("comparison.json", comparison_to_json(report))])
        sys.stdout.write(format_comparison_table(report))
        return EXIT_OK
    return _guard(action)

def parse_betas(text):
    """
    Parses a beta grid written as start:stop:step, stop
    included, or as a comma-separated list.

    Examples
    ========

    >>> from pygoalnet.cli import parse_betas
    >>> len(parse_betas("0:10:0.5")), parse_betas("0,1,10")
    (21, [0.0, 1.0, 10.0])
    """
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if not step > 0.0 or stop < start:
                raise ParseError("Beta grid %s needs step > 0 and "
                                 "stop >= start."%(text))
            count = int(np.floor((stop - start)/step + 1e-9)) + 1
            return [start + i*step for i in range(count)]
        return [float(part) for part in text.split(",")]
    except ValueError as err:
        if _check_type(err, ParseError):
            raise
        raise ParseError("Cannot parse beta grid %s: %s"%(text, err))

def _read_json(path):
    with open(path, "r", encoding="utf-8") as file:
        try:
            return json.load(file)
        except ValueError as err:
            raise ParseError("%s is not valid JSON: %s"%(path, err))

def _rd_rows(doc, betas):
    if _check_type(doc, dict):
        if 'p_x' not in doc:
            raise ParseError("Missing key 'p_x' in the source document.")
        p_x = doc['p_x']
        d = doc.get('d')
    else:
        p_x, d = doc, None
    if d is None:
        size = len(p_x) if _check_type(p_x, list) else 1
        d = 1.0 - np.eye(size)
    return [(beta, point.rate, point.distortion)
            for beta, point in rd_curve(p_x, d, betas)]

def _ib_rows(doc, betas, t_size):
    joint = doc.get('joint') if _check_type(doc, dict) else doc
    if joint is None:
        raise ParseError("Missing key 'joint' in the joint document.")
    return [(beta, result.I_xt, result.I_ty)
            for beta, result in ib_curve(joint, t_size, betas)]

def cmd_curves(kind, input_path, betas, out_path, t_size=2):
    """
    Sweeps a Blahut-Arimoto ('rd') or Information Bottleneck
    ('ib') curve over betas and writes it as CSV with columns
    beta,rate,distortion or beta,rate,relevance.

    The rd input is either a JSON array p_x, paired with the
    Hamming distortion, or an object with keys 'p_x' and 'd'.
    The ib input is a JSON array p(x, y) or an object with key
    'joint'.

    Returns
    =======

    int
        0 on success, 1 on I/O errors, 2 on invalid input.
    """
    def action():
        if kind not in ('rd', 'ib'):
            raise DomainError("Unknown curve kind %s."%(kind))
        grid = parse_betas(betas) if _check_type(betas, str) else list(betas)
        if not os.path.isfile(input_path):
            raise ParseError("input not found: %s"%(input_path))
        doc = _read_json(input_path)
        if kind == 'rd':
            header, rows = ('beta', 'rate', 'distortion'), _rd_rows(doc, grid)
        else:
            header = ('beta', 'rate', 'relevance')
            rows = _ib_rows(doc, grid, t_size)
        buffer = io.StringIO(newline="")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(['%.17g'%(value) for value in row])
        directory, name = os.path.split(os.path.abspath(out_path))
        _write_atomic(directory, [(name, buffer.getvalue())])
        return EXIT_OK
    return _guard(action)

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pygoalnet",
        description="Goal-oriented channel access for networked control.")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command")
    sub.required = True
    for name in ("run", "compare"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--scenario", required=True)
        cmd.add_argument("--horizon", type=int)
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--out", default="results")
        if name == "run":
            cmd.add_argument("--policy", choices=POLICIES)
        else:
            cmd.add_argument("--policies", default=",".join(POLICIES[:3]))
            cmd.add_argument("--runs", type=int, default=20)
            cmd.add_argument("--threads", type=int)
    curves = sub.add_parser("curves")
    curves.add_argument("kind", choices=["rd", "ib"])
    curves.add_argument("--input", required=True)
    curves.add_argument("--betas", required=True)
    curves.add_argument("--t-size", type=int, default=2)
    curves.add_argument("--out", default="curve.csv")
    return parser

def main(argv=None):
    """
    Parses argv and runs the selected command.

    Returns
    =======

    int
        The exit status.
    """
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as err:
        return EXIT_CONFIG if err.code else EXIT_OK
    logging.basicConfig(level=getattr(logging, args.log_level),
                        stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "curves":
        return cmd_curves(args.kind, args.input, args.betas, args.out,
                          args.t_size)
    config = RunConfig(args.scenario, args.out, getattr(args, 'policy', None),
                       args.horizon, args.seed)
    if args.command == "run":
        return cmd_run(config)
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    return cmd_compare(config, policies, args.runs, args.threads)
