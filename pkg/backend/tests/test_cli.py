"""
Test Suite for the Command-Line Interface
=========================================

This module tests:
1. Exit codes for every command
2. Report envelopes, --out files and reload checks
3. JobConfig validation
4. The scan-cyclic rule ledger

Run with: pytest test_cli.py -v
"""

import pytest
import json
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from pydantic import ValidationError

from api.construction import resolve_family
from api.filters import ledger_lines
from api.parsing import parse_group, parse_set, parse_sizes
from api.reports import build_report, export_schemas, load_report, save_report
from core.abelian import GroupSpec
from core.constructions import Family
from core.exceptions import CacheIntegrityError, InfeasibleError, SchemaVersionError
from main import HANDLERS, build_parser, job_from_args, main
from models.schemas import SCHEMA_VERSION, Command, JobConfig


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    """0 ok, 1 failed or ruled out, 3 usage"""

    def test_verify_tito(self, capsys):
        code, out = run_cli(capsys, 'verify', '--group', '4', '--S', '0,1', '--T', '0,1')
        assert code == 0
        report = json.loads(out)
        assert report['command'] == 'verify'
        assert report['exit_code'] == 0
        assert report['payload']['verified'] is True

    def test_verify_failure(self, capsys):
        code, out = run_cli(capsys, 'verify', '--group', '4', '--S', '0,1', '--T', '0,2')
        assert code == 1
        assert json.loads(out)['payload']['verified'] is False

    def test_verify_with_coordinates(self, capsys):
        code, _ = run_cli(capsys, 'verify', '--group', '2,4', '--S', '[[0,0],[0,1]]', '--T', '[[0,0],[0,1],[1,0],[1,1]]')
        assert code == 0

    def test_filters_rule_out_z180(self, capsys):
        code, out = run_cli(capsys, 'filters', '--group', '180', '--sizes', '6,30')
        assert code == 1
        payload = json.loads(out)['payload']
        assert payload['ruled_out'] is True
        assert 'character-divisibility' in [v['rule'] for v in payload['verdicts'] if v['ruled_out']]

    def test_filters_pass_tito(self, capsys):
        code, _ = run_cli(capsys, 'filters', '--group', '4', '--sizes', '2,2')
        assert code == 0

    def test_construct(self, capsys):
        code, out = run_cli(capsys, 'construct', '--family', 'rds', '--p', '3', '--m', '1')
        assert code == 0
        assert json.loads(out)['payload']['certificate']['verified'] is True

    def test_search_exists_and_ruled_out(self, capsys):
        assert run_cli(capsys, 'search', '--group', '4', '--size', '2')[0] == 0
        assert run_cli(capsys, 'search', '--group', '2,2', '--size', '2')[0] == 1

    def test_rank_of_non_even_set(self, capsys):
        code, out = run_cli(capsys, 'rank', '--group', '5', '--S', '0,1,2')
        assert code == 1
        assert json.loads(out)['payload']['even'] is False

    def test_spectra(self, capsys):
        code, out = run_cli(capsys, 'spectra', '--group', '4', '--S', '0,1')
        assert code == 0
        assert json.loads(out)['payload']['character_spectrum'] == [4, 2, 2, 0]

    def test_bad_group(self, capsys):
        code, _ = run_cli(capsys, 'verify', '--group', '4,x', '--S', '0', '--T', '0')
        assert code == 3

    def test_missing_argument(self, capsys):
        code, _ = run_cli(capsys, 'verify', '--group', '4', '--S', '0,1')
        assert code == 3

    def test_unknown_family(self, capsys):
        code, _ = run_cli(capsys, 'construct', '--family', 'hadamard')
        assert code == 3

    def test_classify_refuses_order_64(self, capsys):
        code, _ = run_cli(capsys, 'classify', '--max-order', '64', '--extended')
        assert code == 3

    def test_infeasible_mid_run_is_a_failure(self, capsys, monkeypatch):
        def infeasible(job):
            raise InfeasibleError("dual spectrum is not integral")

        monkeypatch.setitem(HANDLERS, Command.SPECTRA, infeasible)
        code = main(['spectra', '--group', '4', '--S', '0,1'])
        assert code == 1
        assert '"error": "InfeasibleError"' in capsys.readouterr().err

    def test_integrity_failure_is_not_a_usage_error(self, capsys, monkeypatch):
        def corrupted(job):
            raise CacheIntegrityError("content hash mismatch")

        monkeypatch.setitem(HANDLERS, Command.SPECTRA, corrupted)
        with pytest.raises(CacheIntegrityError, match="content hash"):
            main(['spectra', '--group', '4', '--S', '0,1'])


class TestReports:
    """Envelopes, hashes and schema versions"""

    def test_out_file_round_trip(self, tmp_path, capsys):
        path = tmp_path / 'tito.json'
        code, out = run_cli(capsys, 'verify', '--group', '4', '--S', '0,1', '--T', '0,1', '--out', str(path))
        assert code == 0
        assert out == ''
        report = load_report(path)
        assert report.command == Command.VERIFY
        assert report.schema_version == SCHEMA_VERSION
        assert report.payload['primitive'] is True

    def test_schema_version_mismatch(self, tmp_path):
        path = save_report(build_report('spectra', 0, {'value': 1}), tmp_path / 'r.json')
        data = json.loads(path.read_text())
        data['schema_version'] = '0.1'
        path.write_text(json.dumps(data))
        with pytest.raises(SchemaVersionError):
            load_report(path)

    def test_tampered_payload(self, tmp_path):
        path = save_report(build_report('spectra', 0, {'value': 1}), tmp_path / 'r.json')
        data = json.loads(path.read_text())
        data['payload']['value'] = 2
        path.write_text(json.dumps(data))
        with pytest.raises(CacheIntegrityError):
            load_report(path)

    def test_payload_contract_enforced(self):
        with pytest.raises(ValidationError):
            build_report(Command.VERIFY, 0, {'verified': True})

    def test_export_schemas(self, tmp_path):
        paths = export_schemas(tmp_path)
        assert {p.name for p in paths} >= {'report.schema.json', 'certificate.schema.json', 'job_config.schema.json'}
        schema = json.loads((tmp_path / 'report.schema.json').read_text())
        assert 'content_hash' in schema['properties']

    def test_shipped_schemas_match_export(self, tmp_path):
        shipped = os.path.join(os.path.dirname(__file__), '..', '..', 'docs', 'schemas')
        export_schemas(tmp_path)
        assert sorted(os.listdir(shipped)) == sorted(p.name for p in tmp_path.iterdir())
        for path in tmp_path.iterdir():
            fresh = json.loads(path.read_text())
            with open(os.path.join(shipped, path.name)) as f:
                committed = json.load(f)
            assert committed['title'] == fresh['title']
            assert committed.get('required', []) == fresh.get('required', [])
            assert sorted(committed['properties']) == sorted(fresh['properties'])
            assert sorted(committed.get('$defs', {})) == sorted(fresh.get('$defs', {}))
            for name, model in fresh.get('$defs', {}).items():
                assert sorted(committed['$defs'][name].get('properties', {})) == sorted(model.get('properties', {}))


class TestJobConfig:
    """Unknown and missing fields"""

    def test_extra_field_rejected(self):
        with pytest.raises(ValidationError):
            JobConfig(command='verify', group='4', S='0,1', T='0,1', colour='blue')

    def test_required_fields_per_command(self):
        with pytest.raises(ValidationError, match="requires"):
            JobConfig(command='search', group='4')

    def test_threads_bounded(self):
        with pytest.raises(ValidationError):
            JobConfig(command='classify', threads=0)

    def test_from_args(self):
        args = build_parser().parse_args(['search', '--group', '2,4,4', '--size', '4', '--no-filters', '--threads', '2'])
        job = job_from_args(args)
        assert job.command == Command.SEARCH
        assert job.size == 4
        assert job.threads == 2
        assert job.use_filters is False

    def test_construct_params(self):
        args = build_parser().parse_args(['construct', '--family', 'skew', '--q', '7', '--param', 'alpha=1'])
        job = job_from_args(args)
        assert job.params == {'q': 7, 'alpha': 1}


class TestParsing:
    """Groups, sets and sizes"""

    def test_group(self):
        assert parse_group('2,4,4').factors == (2, 4, 4)
        assert parse_group('1').is_trivial

    def test_set_by_index_and_coordinates(self):
        spec = GroupSpec((2, 4))
        assert parse_set('1,0', spec) == parse_set('[[0,0],[0,1]]', spec)

    def test_empty_set(self):
        with pytest.raises(ValueError, match="nonempty"):
            parse_set('', GroupSpec((4,)))

    def test_sizes(self):
        assert parse_sizes('6,30') == (6, 30)
        with pytest.raises(ValueError, match="6,30"):
            parse_sizes('6')

    def test_family_aliases(self):
        assert resolve_family('rds') is Family.RDS_PLANAR
        assert resolve_family('skew-hadamard') is Family.SKEW_HADAMARD
        with pytest.raises(ValueError, match="Known"):
            resolve_family('hadamard')


class TestScanLedger:
    """--report rules"""

    def test_known_pair_listed(self, capsys):
        code, out = run_cli(capsys, 'scan-cyclic', '--max', '20', '--report', 'rules')
        assert code == 0
        lines = [json.loads(line) for line in out.splitlines() if line.strip()]
        assert {'triple': [4, 2, 2], 'rules': [], 'known': 'tito'} in lines
        assert all(line['rules'] for line in lines if 'known' not in line)

    def test_ledger_order(self):
        payload = {
            'survivors': [[600, 10, 60]],
            'known': [{'triple': [4, 2, 2], 'family': 'tito'}],
            'ledger': [{'triple': [8, 2, 4], 'rules': ['size-two']}],
        }
        assert [line['triple'] for line in ledger_lines(payload)] == [[600, 10, 60], [4, 2, 2], [8, 2, 4]]
