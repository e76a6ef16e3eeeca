# test_intersection.py
import math
from fractions import Fraction

import pytest
import sympy

from combinatorics import MultiIndex, integer_partitions
from intersection import (
    LiuXuTable, beta, c_constant, f_constant, gamma, r_value, sk_sum_check,
)
from utils import ComputationError

ONE = MultiIndex((1,))
TWO = MultiIndex((2,))


def test_genus_four_constants():
    assert beta(MultiIndex.zero()) == 1
    assert beta(ONE) == Fraction(1, 3)
    assert beta(TWO) == Fraction(7, 90)
    assert c_constant(ONE) == Fraction(2, 3)
    assert c_constant(TWO) == Fraction(4, 45)
    assert c_constant(MultiIndex.zero()) == 0
    assert f_constant(4, ONE) == 2
    assert f_constant(4, TWO) == Fraction(32, 15)
    assert r_value(4, TWO) == Fraction(32, 3)


def test_gamma_follows_closed_formula():
    assert gamma(MultiIndex.zero()) == 1
    assert gamma(TWO) == Fraction(1, 30)
    # sign (-1)^||m||, so C_(2) = 4/45
    assert gamma(ONE) == Fraction(-1, 3)


def test_f_of_zero_is_one():
    for g in range(2, 12):
        assert f_constant(g, MultiIndex.zero()) == 1


def test_top_kappa_has_r_value_one():
    for g in range(3, 28):
        assert r_value(g, MultiIndex.unit(g - 2)) == 1


def test_genus_two_scalar_top_class():
    # kappa_0 = 2 is the top class of M_2
    assert r_value(2, MultiIndex.zero()) == Fraction(1, 2)


def test_range_checks():
    with pytest.raises(ValueError):
        f_constant(4, MultiIndex((3,)))
    with pytest.raises(ValueError):
        r_value(5, MultiIndex((1,)))
    with pytest.raises(ValueError):
        r_value(1, MultiIndex.zero())


def test_tables_are_genus_independent():
    small, large = LiuXuTable(), LiuXuTable()
    r_value(4, TWO, small)
    r_value(10, MultiIndex((2, 1, 0, 1)), large)
    for m, value in small.beta.items():
        assert large.get_beta(m) == value
    for m, value in small.c_const.items():
        assert large.get_c(m) == value


def _sk_rhs(genus, parts):
    k = len(parts)
    num = math.factorial(2 * genus - 3 + k) * int(sympy.factorial2(2 * genus - 1))
    den = math.factorial(2 * genus - 1) * math.prod(int(sympy.factorial2(2 * d + 1)) for d in parts)
    return Fraction(num, den)


def test_sk_check_single_part_and_pair():
    for g in range(3, 10):
        assert sk_sum_check(g, [g - 2])
    assert r_value(4, TWO) + r_value(4, MultiIndex.unit(2)) == _sk_rhs(4, [1, 1])
    assert sk_sum_check(4, [1, 1])
    assert sk_sum_check(6, [1, 1, 2])


def test_sk_sweep_genus_two_to_eight():
    for g in range(2, 9):
        for parts in integer_partitions(g - 2):
            assert sk_sum_check(g, list(parts)), (g, parts)


def test_sk_check_rejects_bad_partitions():
    with pytest.raises(ValueError):
        sk_sum_check(5, [1, 1])
    with pytest.raises(ValueError):
        sk_sum_check(5, [3, 0])


def test_genus_five_values_solve_sk_system():
    # partitions of 3: (3), (2,1), (1,1,1)
    r3 = Fraction(1)
    r12 = _sk_rhs(5, [2, 1]) - r3
    r111 = _sk_rhs(5, [1, 1, 1]) - 3 * r12 - 2 * r3
    assert r_value(5, MultiIndex((0, 0, 1))) == r3
    assert r_value(5, MultiIndex((1, 1))) == r12
    assert r_value(5, MultiIndex((3,))) == r111


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.txt"
    table = LiuXuTable()
    expected = table.get_r(6, MultiIndex((1, 0, 1)))
    assert table.save(str(path)) > 0
    assert table.save(str(path)) == 0

    warm = LiuXuTable()
    assert warm.load(str(path)) > 0
    assert warm.r_const[(6, MultiIndex((1, 0, 1)))] == expected
    assert warm.get_r(6, MultiIndex((1, 0, 1))) == LiuXuTable().get_r(6, MultiIndex((1, 0, 1)))


def test_cache_conflict_and_malformed_lines(tmp_path):
    conflict = tmp_path / "conflict.txt"
    conflict.write_text("beta 1 1/3\nbeta 1 1/4\n")
    with pytest.raises(ComputationError):
        LiuXuTable().load(str(conflict))

    duplicate = tmp_path / "duplicate.txt"
    duplicate.write_text("beta 1 1/3\nbeta 1 1/3\n")
    assert LiuXuTable().load(str(duplicate)) == 2

    malformed = tmp_path / "malformed.txt"
    malformed.write_text("r 4 2\n")
    with pytest.raises(ValueError):
        LiuXuTable().load(str(malformed))

    assert LiuXuTable().load(str(tmp_path / "missing.txt")) == 0


def test_cache_keys_use_canonical_encoding(tmp_path):
    padded = tmp_path / "padded.txt"
    padded.write_text("r 4 2 32/3\nr 4 2,0 11\n")
    with pytest.raises(ComputationError):
        LiuXuTable().load(str(padded))

    agreeing = tmp_path / "agreeing.txt"
    agreeing.write_text("beta 1 1/3\nbeta 1,0,0 1/3\n")
    table = LiuXuTable()
    assert table.load(str(agreeing)) == 2
    assert table.beta[ONE] == Fraction(1, 3)


def test_cache_saves_to_each_path(tmp_path):
    first, second = tmp_path / "first.txt", tmp_path / "second.txt"
    table = LiuXuTable()
    table.get_r(5, MultiIndex((1, 1)))
    written = table.save(str(first))
    assert written > 0
    assert table.save(str(second)) == written
    assert table.save(str(second)) == 0
    assert first.read_text() == second.read_text()
