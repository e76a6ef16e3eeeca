# test_pairing.py
import json
from fractions import Fraction

import pytest

from combinatorics import CgMonomial, MultiIndex, partition_count
from config import Config
from linalg import RowEchelon, integer_rows, rank_bareiss, rank_modular
from pairing import (
    Construction, build_p_matrix, build_q_matrix, build_q_matrix_direct, exact_rank,
    pairing_entry, q_rank, sub_p_matrix,
)
from utils import ComputationError

# rank Q_{g,i} for i = 0..g-1
Q_RANKS = {
    2: [1, 1],
    3: [1, 2, 1],
    4: [1, 2, 2, 1],
    5: [1, 2, 3, 2, 1],
    6: [1, 2, 4, 4, 2, 1],
    7: [1, 2, 4, 5, 4, 2, 1],
    8: [1, 2, 4, 6, 6, 4, 2, 1],
    9: [1, 2, 4, 7, 9, 7, 4, 2, 1],
    10: [1, 2, 4, 7, 10, 10, 7, 4, 2, 1],
    11: [1, 2, 4, 7, 11, 13, 11, 7, 4, 2, 1],
    12: [1, 2, 4, 7, 12, 16, 16, 12, 7, 4, 2, 1],
}

Q_RANKS_EXTENDED = {
    13: [1, 2, 4, 7, 12, 17, 20, 17, 12, 7, 4, 2, 1],
    14: [1, 2, 4, 7, 12, 18, 24, 24, 18, 12, 7, 4, 2, 1],
    15: [1, 2, 4, 7, 12, 19, 27, 31, 27, 19, 12, 7, 4, 2, 1],
    16: [1, 2, 4, 7, 12, 19, 28, 35, 35, 28, 19, 12, 7, 4, 2, 1],
    17: [1, 2, 4, 7, 12, 19, 29, 39, 45, 39, 29, 19, 12, 7, 4, 2, 1],
    18: [1, 2, 4, 7, 12, 19, 30, 42, 53, 53, 42, 30, 19, 12, 7, 4, 2, 1],
    19: [1, 2, 4, 7, 12, 19, 30, 43, 57, 64, 57, 43, 30, 19, 12, 7, 4, 2, 1],
    20: [1, 2, 4, 7, 12, 19, 30, 44, 61, 75, 75, 61, 44, 30, 19, 12, 7, 4, 2, 1],
}

extended = pytest.mark.skipif(not Config.EXTENDED, reason="set TAUT_EXTENDED=1 for large genera")


def test_p_matrix_genus_four():
    matrix = build_p_matrix(4, 2)
    assert matrix.row_labels == ['k2', 'k1^2']
    assert matrix.col_labels == ['1']
    assert matrix.entries == [[1], [Fraction(32, 3)]]
    assert matrix.construction is Construction.P


def test_p_matrix_shapes():
    assert build_p_matrix(2, 0).entries == [[Fraction(1, 2)]]
    assert build_p_matrix(5, 1).shape == (1, 2)
    assert build_p_matrix(9, 3).shape == (partition_count(3), partition_count(4))
    with pytest.raises(ValueError):
        build_p_matrix(4, 3)


def test_p_matrix_is_symmetric_under_complement():
    for g in range(4, 11):
        for i in range(g - 1):
            assert build_p_matrix(g, i).transpose(g - 2 - i).entries == build_p_matrix(g, g - 2 - i).entries


def test_sub_matrices():
    assert sub_p_matrix(4, 2, 0).entries == [[6], [64]]
    assert sub_p_matrix(4, 2, 2).entries == [[1]]
    assert sub_p_matrix(4, 2, 2).row_labels == ['k2']
    assert sub_p_matrix(4, 2, 1).row_labels == ['k1^2']

    zero = sub_p_matrix(6, 2, -1)
    assert zero.shape == (partition_count(3), partition_count(2))
    assert all(x == 0 for row in zero.entries for x in row)
    assert zero.construction_name() == 'P_sub(-1)'

    for g in range(4, 10):
        for i in range(g - 1):
            for j in range(1, i + 1):
                assert sub_p_matrix(g, i, j).shape[0] == partition_count(i - j)

    with pytest.raises(ValueError):
        sub_p_matrix(4, 1, 2)


def test_pairing_entry_closed_form():
    one = CgMonomial(0, MultiIndex())
    assert pairing_entry(2, one, CgMonomial(0, MultiIndex.unit(1))) == 0
    assert pairing_entry(2, one, CgMonomial(1, MultiIndex())) == 1
    row, col = CgMonomial(1, MultiIndex.unit(1)), CgMonomial(1, MultiIndex())
    assert pairing_entry(4, row, col) == Fraction(32, 3)


def test_q_matrix_small_cases():
    assert build_q_matrix(2, 0).entries == [[0, 1]]
    q41 = build_q_matrix(4, 1)
    assert q41.shape == (2, 4)
    assert q41.row_labels == ['k1', 'K']
    assert q41.col_labels == ['k2', 'k1^2', 'K*k1', 'K^2']
    assert q_rank(4, 1).rank == 2
    for g in range(2, 12):
        top = build_q_matrix(g, g - 1)
        assert top.col_labels == ['1']
        assert top.entries[-1] == [1]


def test_direct_entries_genus_four():
    matrix = build_q_matrix_direct(4, 2)
    assert matrix.construction is Construction.Q_DIRECT
    rows, cols = matrix.row_labels, matrix.col_labels
    assert rows == ['k2', 'k1^2', 'K*k1', 'K^2']
    assert cols == ['k1', 'K']
    entry = lambda r, c: matrix.entries[rows.index(r)][cols.index(c)]
    assert entry('K*k1', 'K') == Fraction(32, 3)
    assert entry('K^2', 'K') == 1
    assert entry('k1^2', 'K') == 64
    assert entry('k2', 'k1') == 0


@pytest.mark.parametrize("genus", range(2, 9))
def test_block_assembly_matches_direct_pushforward(genus):
    for i in range(genus):
        assert build_q_matrix(genus, i).entries == build_q_matrix_direct(genus, i).entries


@pytest.mark.parametrize("genus", range(2, 11))
def test_q_matrices_are_transposes(genus):
    for i in range(genus):
        assert build_q_matrix(genus, i).transpose(genus - 1 - i).entries == \
            build_q_matrix(genus, genus - 1 - i).entries


@pytest.mark.parametrize("genus", sorted(Q_RANKS))
def test_rank_table(genus):
    assert [q_rank(genus, i).rank for i in range(genus)] == Q_RANKS[genus]


def test_full_rank_in_low_degree():
    for g in range(2, 16):
        for i in range(g // 3):
            expected = sum(partition_count(r) for r in range(i + 1))
            assert q_rank(g, i).rank == expected, (g, i)


def test_bareiss_and_modular_agree():
    for g, i in [(6, 2), (9, 4), (10, 5), (12, 5)]:
        matrix = build_q_matrix(g, i)
        rows = integer_rows(matrix.entries)
        modular = rank_modular(rows, Config.PRIMES)
        assert set(modular.values()) == {rank_bareiss(rows)}


def test_rank_report_provenance():
    report = exact_rank(build_q_matrix(9, 4), primes=(1000003, 998244353), threads=2)
    assert report.rank == 9
    assert report.backend == 'modular+bareiss'
    assert report.to_dict()['primes'] == ['1000003', '998244353']
    assert exact_rank(build_q_matrix(9, 4), exact_max_rows=0).backend == 'modular'


def test_rank_detects_backend_disagreement(monkeypatch):
    import pairing
    monkeypatch.setattr(pairing, 'rank_bareiss', lambda rows: 0)
    with pytest.raises(ComputationError):
        exact_rank(build_q_matrix(5, 2))


def test_row_echelon_incremental():
    echelon = RowEchelon(3)
    assert echelon.add([1, 2, 3])
    assert not echelon.add([2, 4, 6])
    assert echelon.add([0, 1, 1])
    assert echelon.rank == 2
    assert echelon.free_columns() == [2]
    assert echelon.reduce([1, 3, 4]) == [0, 0, 0]
    with pytest.raises(ValueError):
        echelon.add([1, 2])


def test_matrix_export():
    matrix = build_p_matrix(4, 2)
    data = json.loads(matrix.to_json())
    assert data['entries'] == [['1'], ['32/3']]
    assert data['construction'] == 'P'
    csv = matrix.to_csv().splitlines()
    assert csv[0] == ',1'
    assert csv[2] == 'k1^2,32/3'


@extended
@pytest.mark.parametrize("genus", sorted(Q_RANKS_EXTENDED))
def test_rank_table_extended(genus):
    assert [q_rank(genus, i).rank for i in range(genus)] == Q_RANKS_EXTENDED[genus]


@extended
def test_rank_genus_twenty_seven_middle():
    assert q_rank(27, 13).rank == 253
