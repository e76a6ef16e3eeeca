# src/pairing.py
"""
Pairing matrices P_{g,i} (on M_g) and Q_{g,i} (on C_g) and their exact ranks.

P_{g,i}[k][l] = r(kappa_k kappa_l) for kappa monomials of degrees i and g-2-i.
Q_{g,i}[k][l] = s with pi_*(M_k N_l) = s kappa_{g-2} for K/kappa monomials of
degrees i and g-1-i. Labels follow <_kappa and <_* respectively.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import pandas as pd

from combinatorics import (
    CgMonomial, MultiIndex, enumerate_cg_monomials, enumerate_kappa_monomials,
    partition_count,
)
from config import Config
from intersection import r_value
from linalg import integer_rows, rank_bareiss, rank_modular
from pushforward import TautExpression, TautMonomial, pushforward
from utils import ComputationError, format_rational, log_job, logger, validate_degree, validate_genus


class Construction(str, Enum):
    P = 'P'
    P_SUB = 'P_sub'
    Q_BLOCK = 'Q_block'
    Q_DIRECT = 'Q_direct'


@dataclass
class PairingMatrix:
    """An exact rational matrix with monomial labels and provenance"""

    genus: int
    degree: int
    row_labels: list
    col_labels: list
    entries: list
    construction: Construction
    sub_index: int = None

    @property
    def shape(self):
        return len(self.row_labels), len(self.col_labels)

    def transpose(self, degree):
        rows, cols = self.shape
        return PairingMatrix(
            self.genus, degree, list(self.col_labels), list(self.row_labels),
            [[self.entries[r][c] for r in range(rows)] for c in range(cols)],
            self.construction, self.sub_index)

    def construction_name(self):
        if self.construction is Construction.P_SUB:
            return f"P_sub({self.sub_index})"
        return self.construction.value

    def to_dict(self):
        return {
            'genus': self.genus,
            'degree': self.degree,
            'construction': self.construction_name(),
            'row_labels': self.row_labels,
            'col_labels': self.col_labels,
            'entries': [[format_rational(x) for x in row] for row in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_frame(self):
        return pd.DataFrame(
            [[format_rational(x) for x in row] for row in self.entries],
            index=self.row_labels, columns=self.col_labels)

    def to_csv(self):
        return self.to_frame().to_csv()


@dataclass
class RankReport:
    """Rank of a pairing matrix with backend provenance"""

    genus: int
    degree: int
    rows: int
    cols: int
    rank: int
    backend: str
    primes: list = field(default_factory=list)
    modular_ranks: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'genus': self.genus,
            'degree': self.degree,
            'rows': self.rows,
            'cols': self.cols,
            'rank': self.rank,
            'backend': self.backend,
            'primes': [str(p) for p in self.primes],
        }


def _check_p_degree(genus, degree):
    genus = validate_genus(genus)
    degree = validate_degree(degree, 0, genus - 2, "P-matrix degree")
    return genus, degree


def build_p_matrix(genus, degree):
    """
    Build P_{g,i}
    Args:
        genus (int): g >= 2
        degree (int): i with 0 <= i <= g-2
    Returns:
        PairingMatrix: p(i) x p(g-2-i) matrix of r-values
    Raises:
        ValueError: If i is outside [0, g-2]
    """
    genus, degree = _check_p_degree(genus, degree)
    rows = enumerate_kappa_monomials(degree)
    cols = enumerate_kappa_monomials(genus - 2 - degree)
    entries = [[r_value(genus, a + b) for b in cols] for a in rows]
    return PairingMatrix(genus, degree, [m.label() for m in rows], [m.label() for m in cols],
                         entries, Construction.P)


def sub_p_matrix(genus, degree, j):
    """
    Build P^j_{g,i}: rows containing kappa_j (j >= 1), (2g-2) P_{g,i} (j = 0),
    or the p(i+1) x p(g-2-i) zero matrix (j = -1)
    Raises:
        ValueError: Unless -1 <= j <= i <= g-2
    """
    genus, degree = _check_p_degree(genus, degree)
    j = validate_degree(j, -1, degree, "sub-matrix index")
    cols = enumerate_kappa_monomials(genus - 2 - degree)
    col_labels = [m.label() for m in cols]

    if j == -1:
        rows = enumerate_kappa_monomials(degree + 1)
        entries = [[Fraction(0)] * len(cols) for _ in rows]
        return PairingMatrix(genus, degree, [m.label() for m in rows], col_labels,
                             entries, Construction.P_SUB, j)

    full = build_p_matrix(genus, degree)
    if j == 0:
        factor = 2 * genus - 2
        entries = [[factor * x for x in row] for row in full.entries]
        return PairingMatrix(genus, degree, full.row_labels, col_labels, entries,
                             Construction.P_SUB, j)

    keep = [k for k, m in enumerate(enumerate_kappa_monomials(degree)) if m.contains(j)]
    expected = partition_count(degree - j)
    if len(keep) != expected:
        raise ComputationError(f"P^{j}_{{{genus},{degree}}} has {len(keep)} rows, expected {expected}")
    return PairingMatrix(genus, degree, [full.row_labels[k] for k in keep], col_labels,
                         [full.entries[k] for k in keep], Construction.P_SUB, j)


def pairing_entry(genus, row, col):
    """s with pi_*(row * col) = s kappa_{g-2}, by the closed form"""
    k = row.k_power + col.k_power
    if k == 0:
        return Fraction(0)
    kappa = row.kappa_part + col.kappa_part
    if k == 1:
        return (2 * genus - 2) * r_value(genus, kappa)
    return r_value(genus, kappa + MultiIndex.unit(k - 1))


def _check_q_degree(genus, degree):
    genus = validate_genus(genus)
    degree = validate_degree(degree, 0, genus - 1, "Q-matrix degree")
    return genus, degree


def build_q_matrix(genus, degree):
    """
    Assemble Q_{g,i} from the blocks P^{r+c-1}_{g,i-1+c} (row block r = K^r,
    column block c = K^c); Q_{g,0} is the single row labeled 1
    Raises:
        ValueError: If i is outside [0, g-1]
        ComputationError: If a block does not have the expected shape
    """
    genus, degree = _check_q_degree(genus, degree)
    rows = enumerate_cg_monomials(degree)
    cols = enumerate_cg_monomials(genus - 1 - degree)
    row_labels = [m.label() for m in rows]
    col_labels = [m.label() for m in cols]

    if degree == 0:
        entries = [[pairing_entry(genus, rows[0], c) for c in cols]]
        return PairingMatrix(genus, degree, row_labels, col_labels, entries, Construction.Q_BLOCK)

    entries = []
    for r in range(degree + 1):
        band = [[] for _ in range(partition_count(degree - r))]
        for c in range(genus - degree):
            block = sub_p_matrix(genus, degree - 1 + c, r + c - 1)
            want = (partition_count(degree - r), partition_count(genus - 1 - degree - c))
            if block.shape != want:
                raise ComputationError(
                    f"Block ({r},{c}) of Q_{{{genus},{degree}}} has shape {block.shape}, expected {want}")
            for k, row in enumerate(block.entries):
                band[k].extend(row)
        entries.extend(band)

    if len(entries) != len(rows) or any(len(row) != len(cols) for row in entries):
        raise ComputationError(f"Q_{{{genus},{degree}}} assembled with inconsistent shape")
    return PairingMatrix(genus, degree, row_labels, col_labels, entries, Construction.Q_BLOCK)


def build_q_matrix_direct(genus, degree):
    """
    Build Q_{g,i} by pushing every product K^{a+b} kappa_I kappa_J from C_g to M_g
    and reading off the r-values
    """
    genus, degree = _check_q_degree(genus, degree)
    rows = enumerate_cg_monomials(degree)
    cols = enumerate_cg_monomials(genus - 1 - degree)

    entries = []
    for row in rows:
        line = []
        for col in cols:
            product = row * col
            mono = TautMonomial(1, (product.k_power,), (), product.kappa_part)
            image = pushforward(TautExpression.of(mono, 1, genus), 1, genus)
            value = Fraction(0)
            for term, coeff in image.terms.items():
                value += coeff * r_value(genus, term.kappa_part)
            line.append(value)
        entries.append(line)
    return PairingMatrix(genus, degree, [m.label() for m in rows], [m.label() for m in cols],
                         entries, Construction.Q_DIRECT)


def exact_rank(matrix, primes=None, threads=None, exact_max_rows=None):
    """
    Rank over Q: the maximum of the ranks modulo several primes, confirmed by
    Bareiss elimination when the matrix has at most exact_max_rows rows
    Raises:
        ComputationError: If the exact and modular backends disagree
    """
    primes = tuple(primes or Config.PRIMES)
    threads = threads or Config.THREADS
    exact_max_rows = Config.EXACT_RANK_MAX_ROWS if exact_max_rows is None else exact_max_rows
    rows, cols = matrix.shape

    if rows == 0 or cols == 0:
        return RankReport(matrix.genus, matrix.degree, rows, cols, 0, 'trivial')

    int_rows = integer_rows(matrix.entries)
    modular = rank_modular(int_rows, primes, threads)
    rank = max(modular.values())
    if len(set(modular.values())) > 1:
        logger.warning(f"Modular ranks differ across primes for {matrix.construction_name()}"
                       f"_{{{matrix.genus},{matrix.degree}}}: {modular}")
    backend = 'modular'

    if rows <= exact_max_rows:
        exact = rank_bareiss(int_rows)
        if exact != rank:
            raise ComputationError(
                f"Bareiss rank {exact} != modular rank {rank} for "
                f"{matrix.construction_name()}_{{{matrix.genus},{matrix.degree}}}")
        backend = 'modular+bareiss'

    log_job("RANK", matrix.genus, matrix.degree, f"{rows}x{cols} {backend}", status=str(rank))
    return RankReport(matrix.genus, matrix.degree, rows, cols, rank, backend,
                      list(primes), modular)


def q_rank(genus, degree, **kwargs):
    """Rank of Q_{g,i}; Q_{g,0} has rank 1"""
    return exact_rank(build_q_matrix(genus, degree), **kwargs)


def p_rank(genus, degree, **kwargs):
    return exact_rank(build_p_matrix(genus, degree), **kwargs)
