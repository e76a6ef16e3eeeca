# src/advanced/kernel.py
"""
Kernel-dimension statistics for the pairing matrices
Usage: python src/cli.py kernel --l 6

For g = 3k - l - 1:
    n(g, k) = sum_{i<=k} p(i) - rank Q_{g,k}     (C_g, needs 2k <= g-1)
    a(l)    = p(k) - rank P_{g,k}               (M_g, needs 2k <= g-2)
    b(l)    = sum_{0<=i<=l, i != 2 mod 3} a(l-i)
"""

import sys
import os
from dataclasses import dataclass, field

# Add parent directory to path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from combinatorics import partition_count
from pairing import p_rank, q_rank
from utils import ComputationError, log_job, logger, validate_degree, validate_genus

# a(0..11), tabulated from ranks of P_{g,k}
A_TABLE = (1, 1, 2, 3, 5, 6, 10, 13, 18, 24, 33, 41)
MAX_L = len(A_TABLE) - 1

# (g, k) pairs where n(g, k) departs from b(l)
ANOMALIES = {(25, 12): 91, (27, 13): 120}


@dataclass
class KernelStats:
    """Kernel dimension of the C_g pairing in codegree k"""
    genus: int
    codegree: int
    l: int
    monomial_count: int
    rank: int
    n: int
    b: int = None
    anomaly: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            'genus': self.genus,
            'codegree': self.codegree,
            'l': self.l,
            'monomial_count': self.monomial_count,
            'rank': self.rank,
            'n': self.n,
            'b': self.b,
            'anomaly': self.anomaly,
        }


def l_value(genus, codegree):
    """l = 3k - g - 1"""
    return 3 * codegree - genus - 1


def validate_l(l):
    """
    Validate l against the tabulated a-values
    Raises:
        ValueError: If l is outside [0, 11]
    """
    return validate_degree(l, 0, MAX_L, "l")


def a_value(l):
    """a(l) from the table"""
    return A_TABLE[validate_l(l)]


def b_function(l):
    """
    b(l) by the sum formula, checked against the recursion
    Args:
        l (int): 0 <= l <= 11
    Returns:
        int: b(l)
    Raises:
        ValueError: If l > 11 (a-values unavailable)
        ComputationError: If sum formula and recursion disagree
    """
    l = validate_l(l)
    value = sum(A_TABLE[l - i] for i in range(l + 1) if i % 3 != 2)
    recursed = b_recursion(l)
    if value != recursed:
        raise ComputationError(f"b({l}): sum formula gives {value}, recursion gives {recursed}")
    return value


def b_recursion(l):
    """b(l) = 2 sum_{i<l} a(i) + a(l) - b(l-1) - b(l-2), with b(-1) = b(-2) = 0"""
    l = validate_l(l)
    values = []
    for t in range(l + 1):
        prev1 = values[t - 1] if t >= 1 else 0
        prev2 = values[t - 2] if t >= 2 else 0
        values.append(2 * sum(A_TABLE[:t]) + A_TABLE[t] - prev1 - prev2)
    return values[l]


def kernel_dimension_cg(genus, codegree, **rank_options):
    """
    n = sum_{i<=k} p(i) - rank Q_{g,k}
    Args:
        genus (int): g >= 2
        codegree (int): 0 <= k <= g-1
        **rank_options: Passed to exact_rank (primes, threads, exact_max_rows)
    Returns:
        KernelStats: Populated statistics; b and the anomaly flag are set when l is tabulated
    Raises:
        ValueError: If k is outside [0, g-1]
    """
    genus = validate_genus(genus)
    codegree = validate_degree(codegree, 0, genus - 1, "codegree")

    count = sum(partition_count(r) for r in range(codegree + 1))
    report = q_rank(genus, codegree, **rank_options)
    n = count - report.rank
    if n < 0:
        raise ComputationError(f"Negative kernel dimension {n} for Q_{{{genus},{codegree}}}")

    l = l_value(genus, codegree)
    stats = KernelStats(genus, codegree, l, count, report.rank, n)

    if 0 <= l <= MAX_L and 2 * codegree <= genus - 1:
        stats.b = b_function(l)
        if n != stats.b:
            stats.anomaly = True
            known = ANOMALIES.get((genus, codegree))
            note = f"n({genus},{codegree}) = {n} differs from b({l}) = {stats.b}"
            if known != n:
                note += " (not a known anomaly)"
            stats.notes.append(note)
            logger.warning(note)

    log_job("KERNEL_CG", genus, codegree, f"l={l} rows={count}", status=f"n={n}")
    return stats


def kernel_dimension_mg(genus, codegree, **rank_options):
    """p(k) - rank P_{g,k}"""
    genus = validate_genus(genus)
    codegree = validate_degree(codegree, 0, genus - 2, "codegree")
    report = p_rank(genus, codegree, **rank_options)
    value = partition_count(codegree) - report.rank
    log_job("KERNEL_MG", genus, codegree, f"l={l_value(genus, codegree)}", status=f"dim={value}")
    return value


def cg_pair_for_l(l):
    """Smallest (g, k) with g = 3k - l - 1 and 2k <= g-1"""
    l = validate_l(l)
    return 2 * l + 5, l + 2


def mg_pair_for_l(l):
    """Smallest (g, k) with g = 3k - l - 1 and 2k <= g-2"""
    l = validate_l(l)
    return 2 * l + 8, l + 3


def verify_a(l, **rank_options):
    """
    Re-derive a(l) from a P-matrix rank at the smallest admissible genus
    Returns:
        tuple: (computed, tabulated); a mismatch is logged, not raised
    """
    genus, codegree = mg_pair_for_l(l)
    computed = kernel_dimension_mg(genus, codegree, **rank_options)
    tabulated = A_TABLE[l]
    if computed != tabulated:
        logger.warning(f"a({l}) re-derived at (g={genus}, k={codegree}) as {computed}, table has {tabulated}")
    return computed, tabulated


def kernel_report(l, verify=False, **rank_options):
    """
    a(l), b(l) and n at the smallest admissible C_g pair
    Returns:
        dict: l, a, b, n, genus, codegree, anomaly, notes, and a_recomputed when verify is set
    """
    l = validate_l(l)
    genus, codegree = cg_pair_for_l(l)
    stats = kernel_dimension_cg(genus, codegree, **rank_options)
    report = {
        'l': l,
        'a': A_TABLE[l],
        'b': b_function(l),
        'n': stats.n,
        'genus': genus,
        'codegree': codegree,
        'anomaly': stats.anomaly,
        'notes': list(stats.notes),
    }
    if verify:
        report['a_recomputed'] = verify_a(l, **rank_options)[0]
    return report
