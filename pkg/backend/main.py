"""
Command-line entry point for the formally dual pair toolkit.

Examples:
    fdp verify --group 4 --S 0,1 --T 0,1
    fdp construct --family skew_hadamard --q 7 --alpha 1 --beta 2
    fdp search --group 2,4,4 --size 4
    fdp classify --max-order 40 --out table.json --resume cache/
    fdp scan-cyclic --max 1000 --report rules
    fdp filters --group 180 --sizes 6,30

Every command writes a JSON report envelope to stdout (or --out) and exits with:
    0  success / pair exists / nothing ruled out
    1  verification failed / no pair exists / ruled out
    2  inconclusive (budget exhausted)
    3  usage or input error
"""
import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pandas as pd
from pydantic import ValidationError

from api.construction import handle_construct
from api.filters import handle_filters, handle_scan_cyclic, ledger_lines
from api.parsing import EXIT_FAILED, EXIT_USAGE
from api.reports import build_report, save_report
from api.search import handle_classify, handle_search
from api.verification import handle_rank, handle_spectra, handle_verify
from config import get_config
from core.exceptions import CacheIntegrityError, InfeasibleError
from models.schemas import Command, JobConfig
from observability import capture_exception, correlation_context, init_error_tracking, metrics
from performance_optimizer import canonical_json, perf_monitor

logger = logging.getLogger(__name__)

APP_NAME = "Formally Dual Pairs"

HANDLERS: Dict[Command, Callable[[JobConfig], Tuple[int, Dict[str, Any]]]] = {
    Command.VERIFY: handle_verify,
    Command.CONSTRUCT: handle_construct,
    Command.SEARCH: handle_search,
    Command.CLASSIFY: handle_classify,
    Command.SCAN_CYCLIC: handle_scan_cyclic,
    Command.RANK: handle_rank,
    Command.SPECTRA: handle_spectra,
    Command.FILTERS: handle_filters,
}

# Named construction parameters with their own flags
CONSTRUCTION_FLAGS = ('p', 'm', 't', 's', 'q', 'alpha', 'beta')


# ===========================================
# ARGUMENT PARSING
# ===========================================

def _parse_param(text: str) -> Tuple[str, Any]:
    if '=' not in text:
        raise ValueError(f"Parameters look like key=value, got '{text}'")
    key, raw = text.split('=', 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _common_flags() -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--threads', type=int, default=argparse.SUPPRESS, help='Worker processes (default THREADS)')
    common.add_argument('--out', default=argparse.SUPPRESS, help='Write the report here instead of stdout')
    common.add_argument('--cache-dir', '--resume', dest='cache_dir', default=argparse.SUPPRESS,
                        help='Resumable result cache (classify)')
    common.add_argument('--log-level', default=argparse.SUPPRESS, help='DEBUG, INFO, WARNING or ERROR')
    common.add_argument('-v', '--verbose', action='store_true', default=argparse.SUPPRESS,
                        help='Debug logging and full per-element ledgers')
    common.add_argument('--table', action='store_true', default=argparse.SUPPRESS,
                        help='Print a table instead of JSON')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog='fdp', parents=[common],
        description=f"{APP_NAME}: verify, construct, search and rule out formally dual pairs")
    sub = parser.add_subparsers(dest='command', required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add('verify', 'Check that (S, T) is a formally dual pair in G')
    p.add_argument('--group', required=True, help="Cyclic factors, e.g. '2,4,4'")
    p.add_argument('--S', dest='S', required=True, help="Indices '0,1' or JSON coordinates")
    p.add_argument('--T', dest='T', required=True)
    p.add_argument('--ledger', action='store_true', help='Include the per-element ledger')

    p = add('construct', 'Build and verify a pair from a known family')
    p.add_argument('--family', required=True)
    for name in CONSTRUCTION_FLAGS:
        p.add_argument(f'--{name}', type=int, default=None)
    p.add_argument('--group', default=None, help='Ambient group for the subgroup family')
    p.add_argument('--generators', default=None, help='JSON list of generators for the subgroup family')
    p.add_argument('--operands', default=None, help='JSON list of {family, params} for the product family')
    p.add_argument('--param', action='append', default=[], help='Extra key=value (JSON values allowed)')
    p.add_argument('--emit-certificate', dest='emit_certificate', default=None, help='Write the report here')
    p.add_argument('--ledger', action='store_true')

    p = add('search', 'All primitive formally dual sets of one size in G')
    p.add_argument('--group', required=True)
    p.add_argument('--size', type=int, required=True)
    p.add_argument('--node-cap', type=int, default=None)
    p.add_argument('--time-cap', type=float, default=None, help='Seconds')
    p.add_argument('--no-filters', action='store_true', help='Skip the nonexistence filters')

    p = add('classify', 'Classification table for every group up to an order')
    p.add_argument('--max-order', type=int, default=None)
    p.add_argument('--extended', action='store_true', help='Allow orders above the hard limit')
    p.add_argument('--node-cap', type=int, default=None)
    p.add_argument('--time-cap', type=float, default=None)
    p.add_argument('--no-filters', action='store_true')

    p = add('scan-cyclic', 'Filter sweep over cyclic groups Z_N')
    p.add_argument('--max', dest='n_max', type=int, default=1000)
    p.add_argument('--report', choices=['rules'], default=None, help="'rules' emits every triple as JSON lines")

    for name, help_text in (('rank', 'Even-set decomposition of S'), ('spectra', 'Character and difference spectra of S')):
        p = add(name, help_text)
        p.add_argument('--group', required=True)
        p.add_argument('--S', dest='S', required=True)

    p = add('filters', 'Apply every nonexistence rule to (G, |S|, |T|)')
    p.add_argument('--group', required=True)
    p.add_argument('--sizes', required=True, help="'|S|,|T|', e.g. '6,30'")
    return parser


def _construction_params(args: argparse.Namespace) -> Dict[str, Any]:
    params: Dict[str, Any] = {name: getattr(args, name) for name in CONSTRUCTION_FLAGS
                              if getattr(args, name) is not None}
    if args.group is not None:
        params['group'] = [int(n) for n in args.group.split(',') if n.strip()]
    if args.generators is not None:
        params['generators'] = json.loads(args.generators)
    if args.operands is not None:
        params['operands'] = json.loads(args.operands)
    params.update(dict(_parse_param(p) for p in args.param))
    return params


def job_from_args(args: argparse.Namespace) -> JobConfig:
    """Translate parsed arguments into a validated JobConfig."""
    cfg = get_config()
    command = Command(args.command)
    verbose = getattr(args, 'verbose', False)
    fields: Dict[str, Any] = {
        'command': command,
        'threads': getattr(args, 'threads', None) or cfg.threads,
        'out': getattr(args, 'out', None),
        'cache_dir': getattr(args, 'cache_dir', None) or cfg.cache_dir or None,
    }
    if command in (Command.VERIFY, Command.RANK, Command.SPECTRA, Command.SEARCH, Command.FILTERS):
        fields['group'] = args.group
    if command in (Command.VERIFY, Command.RANK, Command.SPECTRA):
        fields['S'] = args.S
    if command is Command.VERIFY:
        fields['T'] = args.T
    if command in (Command.VERIFY, Command.CONSTRUCT):
        fields['include_ledger'] = args.ledger or verbose
    if command is Command.CONSTRUCT:
        fields['family'] = args.family
        fields['params'] = _construction_params(args)
        fields['out'] = args.emit_certificate or fields['out']
    if command is Command.SEARCH:
        fields['size'] = args.size
    if command in (Command.SEARCH, Command.CLASSIFY):
        fields['node_cap'] = args.node_cap
        fields['time_cap_seconds'] = args.time_cap
        fields['use_filters'] = not args.no_filters
    if command is Command.CLASSIFY:
        fields['max_order'] = args.max_order
        fields['extended'] = args.extended
    if command is Command.SCAN_CYCLIC:
        fields['n_max'] = args.n_max
        fields['report_rules'] = args.report == 'rules'
    if command is Command.FILTERS:
        fields['sizes'] = args.sizes
    return JobConfig(**fields)


# ===========================================
# EXECUTION
# ===========================================

def run(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    """Run one job and wrap its payload in a report envelope."""
    exit_code, payload = HANDLERS[job.command](job)
    return exit_code, build_report(job.command, exit_code, payload)


def as_frame(command: Command, payload: Dict[str, Any]) -> pd.DataFrame:
    if command is Command.CLASSIFY:
        return pd.DataFrame([
            {'order': r['order'], 'k': r['set_size'], 'group': r['group_name'],
             'status': r['status'], 'classes': r['classes'], 'source': r['source']}
            for r in payload['rows']
        ], columns=['order', 'k', 'group', 'status', 'classes', 'source'])
    if command is Command.SCAN_CYCLIC:
        return pd.DataFrame(payload['survivors'], columns=['N', 'k', 'l'])
    if command is Command.FILTERS:
        return pd.DataFrame(payload['verdicts'], columns=['rule', 'ruled_out', 'reason'])
    if command is Command.SEARCH:
        return pd.DataFrame(payload['classes'], columns=['S', 'T', 'exact_class', 'rds'])
    return pd.DataFrame([{k: v for k, v in payload.items() if not isinstance(v, (list, dict))}])


def _emit(job: JobConfig, report: Dict[str, Any], table: bool):
    if job.out:
        save_report(report, job.out)
        return
    if table:
        print(as_frame(job.command, report['payload']).to_string(index=False))
    elif job.command is Command.SCAN_CYCLIC and job.report_rules:
        for line in ledger_lines(report['payload']):
            print(canonical_json(line))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))


def _configure_logging(args: argparse.Namespace):
    level = 'DEBUG' if getattr(args, 'verbose', False) else (getattr(args, 'log_level', None) or get_config().log_level)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _report_error(e: Exception, exit_code: int) -> int:
    print(json.dumps({'error': type(e).__name__, 'message': str(e)}), file=sys.stderr)
    return exit_code


def _unhandled(e: Exception, argv: Optional[Sequence[str]]):
    metrics.increment('error_count')
    logger.error(f"Unhandled exception: {e}", exc_info=True)
    capture_exception(e, {'job': {'argv': list(argv if argv is not None else sys.argv[1:])}})
    raise


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    _configure_logging(args)

    cfg = get_config()
    logger.debug(f"Configuration: {cfg.get_safe_dict()}")
    if cfg.sentry_dsn:
        init_error_tracking(cfg.sentry_dsn, cfg.sentry_environment)

    with correlation_context() as correlation_id:
        try:
            job = job_from_args(args)
            logger.info(f"{APP_NAME} v{cfg.engine_version}: {job.command.value} ({correlation_id})")
            exit_code, report = run(job)
            _emit(job, report, getattr(args, 'table', False))
            logger.debug(f"Metrics: {metrics.get_stats()}; timings: {perf_monitor.get_stats()}")
            return exit_code
        except ValidationError as e:
            logger.error(f"Invalid arguments: {e}")
            print(json.dumps({'error': 'invalid arguments', 'details': json.loads(e.json())}), file=sys.stderr)
            return EXIT_USAGE
        except InfeasibleError as e:
            logger.warning(f"⚠ {e}")
            return _report_error(e, EXIT_FAILED)
        except CacheIntegrityError as e:
            _unhandled(e, argv)
        except ValueError as e:
            # Engine validation and the input-side DualityError subclasses
            logger.error(f"{type(e).__name__}: {e}")
            return _report_error(e, EXIT_USAGE)
        except Exception as e:
            _unhandled(e, argv)


if __name__ == '__main__':
    sys.exit(main())
