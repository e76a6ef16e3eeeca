# test_cli.py
import json

import pytest

from cli import EXIT_FAILURE, EXIT_INVALID, EXIT_OK, EXIT_UNDETERMINED, build_parser, job_from_args, main


@pytest.fixture
def run(tmp_path, capsys):
    cache = str(tmp_path / "cache.txt")

    def _run(*argv):
        code = main(list(argv) + ['--cache', cache])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_rank_json(run):
    code, out, _ = run('rank', '--genus', '9', '--degree', '4', '--format', 'json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['rank'] == 9
    assert (data['rows'], data['genus'], data['degree']) == (12, 9, 4)


def test_rank_human_and_p_kind(run):
    code, out, _ = run('rank', '--genus', '2', '--degree', '0')
    assert code == EXIT_OK
    assert out.startswith("rank Q_{2,0} = 1")

    code, out, _ = run('rank', '--genus', '8', '--degree', '3', '--kind', 'P', '--format', 'json')
    assert code == EXIT_OK
    assert json.loads(out)['rank'] == 2


def test_rank_rejects_degree_out_of_range(run):
    code, _, err = run('rank', '--genus', '4', '--degree', '7')
    assert code == EXIT_INVALID
    assert 'Error' in err


def test_table_human(run):
    code, out, _ = run('table', '--genus', '2..6')
    assert code == EXIT_OK
    assert out.splitlines() == [
        "g=2   1 1",
        "g=3   1 2 1",
        "g=4   1 2 2 1",
        "g=5   1 2 3 2 1",
        "g=6   1 2 4 4 2 1",
    ]


def test_table_json_and_csv(run):
    code, out, _ = run('table', '--genus', '7..8', '--format', 'json')
    assert code == EXIT_OK
    assert json.loads(out) == {'7': [1, 2, 4, 5, 4, 2, 1], '8': [1, 2, 4, 6, 6, 4, 2, 1]}

    code, out, _ = run('table', '--genus', '3', '--format', 'csv')
    assert code == EXIT_OK
    assert out.splitlines()[:2] == ['g,0,1,2', '3,1,2,1']


def test_table_empty_range(run):
    code, out, _ = run('table', '--genus', '6..2')
    assert code == EXIT_OK
    assert out == ''


def test_table_rejects_genus_one(run):
    code, _, _ = run('table', '--genus', '1..3')
    assert code == EXIT_INVALID


def test_r_value(run):
    code, out, _ = run('r-value', '--genus', '4', '--partition', '2')
    assert (code, out.strip()) == (EXIT_OK, '32/3')

    code, out, _ = run('r-value', '--genus', '4', '--partition', '0,1', '--format', 'json')
    assert code == EXIT_OK
    assert json.loads(out) == {'genus': 4, 'partition': '0,1', 'monomial': 'k2', 'value': '1'}


def test_r_value_weight_mismatch(run):
    code, _, err = run('r-value', '--genus', '4', '--partition', '3')
    assert code == EXIT_INVALID
    assert '|m|' in err


def test_relations_genus_two(run):
    code, out, _ = run('relations', '--genus', '2', '--degree', '1')
    assert code == EXIT_OK
    assert "  k1 = 0" in out.splitlines()
    assert "Basis of the quotient: K" in out


def test_relations_json(run):
    code, out, _ = run('relations', '--genus', '3', '--degree', '2', '--format', 'json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['status'] == 'complete'
    assert set(data['reduced']) == {'k2 = 0', 'k1^2 = 0', 'K*k1 = 4*K^2'}


def test_relations_csv_columns(run):
    code, out, _ = run('relations', '--genus', '3', '--degree', '2', '--format', 'csv')
    assert code == EXIT_OK
    assert out.splitlines()[0] == 'k2,k1^2,K*k1,K^2,source,j,monomial'


def test_relations_budget_exhausted(run):
    code, out, _ = run('relations', '--genus', '3', '--degree', '2', '--max-attempts', '1')
    assert code == EXIT_UNDETERMINED
    assert 'UNDETERMINED' in out


def test_relations_genus_above_limit(run):
    code, _, _ = run('relations', '--genus', '12', '--degree', '2')
    assert code == EXIT_INVALID


def test_gorenstein_json(run):
    code, out, _ = run('gorenstein', '--genus', '2', '--format', 'json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['verdict'] == 'GORENSTEIN'
    assert data['dimensions'] == [1, 1]


def test_kernel(run):
    code, out, _ = run('kernel', '--l', '2')
    assert code == EXIT_OK
    assert 'n = 3' in out.splitlines()
    assert 'b = 3' in out.splitlines()

    code, _, _ = run('kernel', '--l', '12')
    assert code == EXIT_INVALID

    code, out, _ = run('kernel', '--genus', '13', '--degree', '6', '--format', 'json')
    assert code == EXIT_OK
    assert json.loads(out)['n'] == 10


def test_kernel_needs_arguments(run):
    code, _, _ = run('kernel')
    assert code == EXIT_INVALID


def test_matrix_export(run):
    code, out, _ = run('matrix', '--genus', '4', '--degree', '2', '--kind', 'P', '--format', 'csv')
    assert code == EXIT_OK
    assert out.splitlines() == [',1', 'k2,1', 'k1^2,32/3']

    code, out, _ = run('matrix', '--genus', '4', '--degree', '2', '--kind', 'P', '--sub', '0', '--format', 'json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['construction'] == 'P_sub(0)'
    assert data['entries'] == [['6'], ['64']]

    code, out, _ = run('matrix', '--genus', '3', '--degree', '1', '--kind', 'Q-direct')
    assert code == EXIT_OK
    assert out.startswith('Q_direct g=3 i=1 (2x2)')


def test_sk_check(run):
    code, out, _ = run('sk-check', '--genus', '6')
    assert code == EXIT_OK
    assert len(out.splitlines()) == 5
    assert all(line.endswith(': ok') for line in out.splitlines())


def test_cache_is_written(run, tmp_path):
    code, _, _ = run('r-value', '--genus', '21', '--partition', '19')
    assert code == EXIT_OK
    lines = (tmp_path / "cache.txt").read_text().splitlines()
    assert any(line.startswith('r 21 19 ') for line in lines)


def test_corrupt_cache_is_a_failure(tmp_path, capsys):
    cache = tmp_path / "bad.txt"
    cache.write_text("beta 1 1/3\nbeta 1 2/3\n")
    assert main(['r-value', '--genus', '4', '--partition', '2', '--cache', str(cache)]) == EXIT_FAILURE


def test_bad_primes(run):
    code, _, _ = run('rank', '--genus', '4', '--degree', '1', '--primes', '4,7')
    assert code == EXIT_INVALID


def test_usage_errors_exit_with_invalid_code():
    with pytest.raises(SystemExit) as excinfo:
        main(['rank', '--genus', '4'])
    assert excinfo.value.code == EXIT_INVALID

    with pytest.raises(SystemExit) as excinfo:
        main(['explode'])
    assert excinfo.value.code == EXIT_INVALID


def test_job_from_args_defaults():
    args = build_parser().parse_args(['relations', '--genus', '3', '--degree', '2', '--chern-offset', '2'])
    job = job_from_args(args)
    assert (job.command, job.genus, job.degree, job.chern_offset) == ('relations', 3, 2, 2)
    assert job.output_format == 'human'
    assert job.threads >= 1
