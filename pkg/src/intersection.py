# src/intersection.py
"""
Proportionality constants r(kappa_m) in the top degree g-2 of R(M_g).

kappa_m = r(kappa_m) * kappa_{g-2} whenever |m| = g-2. The constants come from
the Liu-Xu recursion

    sum_{m'+m''=m} (-1)^||m'|| beta_m' / (m''! (2|m''|+1)!!) = 0     (m != 0)
    gamma_m  = (-1)^||m|| / (m! (2|m|+1)!!)
    C_m      = sum_{m'+m''=m} 2|m'| beta_m' gamma_m''
    |m| F_g(m) = (g-1) sum_{m'+m''=m, m' != 0} C_m' F_g(m'')
    r(kappa_m) = (2g-3)!! m! / (2g-2) * F_g(m)

beta, gamma and C do not depend on g. The symmetric-group identity for
partitions of g-2 is kept as an independent check on r.
"""

import itertools
import math
import os
import threading
from fractions import Fraction

from combinatorics import MultiIndex, double_factorial
from utils import ComputationError, format_rational, logger, parse_rational, validate_genus


class LiuXuTable:
    """
    Shared memo of beta, gamma, C, F_g and r values.

    Reads are lock-free; a missing entry is computed outside the lock and
    published with setdefault, so a racing recomputation is harmless.
    """

    def __init__(self):
        self.beta = {MultiIndex.zero(): Fraction(1)}
        self.gamma = {}
        self.c_const = {}
        self.f_const = {}
        self.r_const = {}
        self._lock = threading.Lock()
        # cache path -> keys already written there
        self._persisted = {}

    def _publish(self, table, key, value):
        with self._lock:
            return table.setdefault(key, value)

    # --- recursion ---------------------------------------------------------

    def get_beta(self, m):
        value = self.beta.get(m)
        if value is not None:
            return value
        total = Fraction(0)
        for first, second in m.splittings():
            if first == m:
                continue
            term = self.get_beta(first) / (second.factorial * double_factorial(2 * second.weight + 1))
            total += -term if first.length % 2 else term
        # The m' = m term is (-1)^||m|| beta_m
        value = -total if m.length % 2 == 0 else total
        return self._publish(self.beta, m, value)

    def get_gamma(self, m):
        value = self.gamma.get(m)
        if value is not None:
            return value
        sign = -1 if m.length % 2 else 1
        value = Fraction(sign, m.factorial * double_factorial(2 * m.weight + 1))
        return self._publish(self.gamma, m, value)

    def get_c(self, m):
        value = self.c_const.get(m)
        if value is not None:
            return value
        total = Fraction(0)
        for first, second in m.splittings():
            if first.is_zero():
                continue
            total += 2 * first.weight * self.get_beta(first) * self.get_gamma(second)
        return self._publish(self.c_const, m, total)

    def get_f(self, genus, m):
        key = (genus, m)
        value = self.f_const.get(key)
        if value is not None:
            return value
        if m.is_zero():
            return self._publish(self.f_const, key, Fraction(1))
        total = Fraction(0)
        for first, second in m.splittings():
            if first.is_zero():
                continue
            total += self.get_c(first) * self.get_f(genus, second)
        value = (genus - 1) * total / m.weight
        return self._publish(self.f_const, key, value)

    def get_r(self, genus, m):
        key = (genus, m)
        value = self.r_const.get(key)
        if value is not None:
            return value
        value = (Fraction(double_factorial(2 * genus - 3) * m.factorial, 2 * genus - 2)
                 * self.get_f(genus, m))
        return self._publish(self.r_const, key, value)

    # --- persistence -------------------------------------------------------

    def _lines(self):
        for m, v in self.beta.items():
            yield ('beta', m.encode()), f"beta {m.encode()} {format_rational(v)}"
        for m, v in self.c_const.items():
            yield ('c', m.encode()), f"c {m.encode()} {format_rational(v)}"
        for (g, m), v in self.f_const.items():
            yield ('f', g, m.encode()), f"f {g} {m.encode()} {format_rational(v)}"
        for (g, m), v in self.r_const.items():
            yield ('r', g, m.encode()), f"r {g} {m.encode()} {format_rational(v)}"

    def load(self, path):
        """
        Load a cache file written by save()
        Args:
            path (str): Cache file path; a missing file is an empty cache
        Returns:
            int: Number of entries read
        Raises:
            ComputationError: If a key appears twice with different values
            ValueError: If a line is malformed
        """
        if not path or not os.path.exists(path):
            return 0

        seen = {}
        count = 0
        with open(path, 'r', encoding='utf-8') as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                fields = line.split()
                kind = fields[0]
                if kind in ('beta', 'c') and len(fields) == 3:
                    m, value = MultiIndex.parse(fields[1]), parse_rational(fields[2])
                    key = (kind, m.encode())
                elif kind in ('f', 'r') and len(fields) == 4:
                    m, value = MultiIndex.parse(fields[2]), parse_rational(fields[3])
                    key = (kind, int(fields[1]), m.encode())
                else:
                    raise ValueError(f"{path}:{lineno}: malformed cache line: {line}")

                if key in seen and seen[key] != value:
                    raise ComputationError(
                        f"{path}:{lineno}: cache key {key} has conflicting values "
                        f"{format_rational(seen[key])} and {format_rational(value)}")
                seen[key] = value
                count += 1

                if kind == 'beta':
                    self.beta[m] = value
                elif kind == 'c':
                    self.c_const[m] = value
                elif kind == 'f':
                    self.f_const[(key[1], m)] = value
                else:
                    self.r_const[(key[1], m)] = value

        self._persisted.setdefault(os.path.abspath(path), set()).update(seen)
        logger.info(f"Loaded {count} intersection constants from {path}")
        return count

    def save(self, path):
        """
        Append entries not yet in the cache file
        Returns:
            int: Number of lines appended
        """
        if not path:
            return 0
        with self._lock:
            written = self._persisted.setdefault(os.path.abspath(path), set())
            fresh = [(key, line) for key, line in self._lines() if key not in written]
            if not fresh:
                return 0
            with open(path, 'a', encoding='utf-8') as fh:
                for key, line in fresh:
                    fh.write(line + '\n')
                    written.add(key)
        logger.info(f"Appended {len(fresh)} intersection constants to {path}")
        return len(fresh)


# Process-wide table shared by all callers
TABLE = LiuXuTable()


def beta(m, table=None):
    """beta_m from the triangular recursion with beta_0 = 1"""
    return (table or TABLE).get_beta(m)


def gamma(m, table=None):
    """gamma_m = (-1)^||m|| / (m! (2|m|+1)!!)"""
    return (table or TABLE).get_gamma(m)


def c_constant(m, table=None):
    """C_m = sum over m'+m''=m of 2|m'| beta_m' gamma_m''"""
    return (table or TABLE).get_c(m)


def f_constant(genus, m, table=None):
    """
    F_g(m), with F_g(0) = 1
    Raises:
        ValueError: If g < 2 or |m| > g-2
    """
    genus = validate_genus(genus)
    if m.weight > genus - 2:
        raise ValueError(f"|m| = {m.weight} exceeds g-2 = {genus - 2}")
    return (table or TABLE).get_f(genus, m)


def r_value(genus, m, table=None):
    """
    r(kappa_m), defined by kappa_m = r(kappa_m) kappa_{g-2}
    Args:
        genus (int): g >= 2
        m (MultiIndex): Index with |m| = g-2
    Returns:
        Fraction: The proportionality constant
    Raises:
        ValueError: If |m| != g-2
    """
    genus = validate_genus(genus)
    if m.weight != genus - 2:
        raise ValueError(f"r-value needs |m| = g-2: got |m| = {m.weight}, g-2 = {genus - 2}")
    return (table or TABLE).get_r(genus, m)


def _cycles(perm):
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = perm[i]
        yield cycle


def sk_sum_check(genus, dbar, table=None):
    """
    Check the symmetric-group sum identity for a partition of g-2
    Args:
        genus (int): g >= 2
        dbar (list): Positive parts summing to g-2 (empty for g = 2)
    Returns:
        bool: True iff sum over sigma in S_k of r(kappa_sigma(dbar)) equals
              (2g-3+k)! (2g-1)!! / ((2g-1)! prod (2d_j+1)!!)
    Raises:
        ValueError: If dbar is not a partition of g-2 into positive parts
    """
    genus = validate_genus(genus)
    parts = [int(d) for d in dbar]
    if any(d < 1 for d in parts) or sum(parts) != genus - 2:
        raise ValueError(f"{parts} is not a partition of g-2 = {genus - 2} into positive parts")

    k = len(parts)
    lhs = Fraction(0)
    for perm in itertools.permutations(range(k)):
        index = MultiIndex.from_parts(sum(parts[i] for i in cycle) for cycle in _cycles(perm))
        lhs += r_value(genus, index, table)

    rhs = Fraction(
        math.factorial(2 * genus - 3 + k) * double_factorial(2 * genus - 1),
        math.factorial(2 * genus - 1) * math.prod(double_factorial(2 * d + 1) for d in parts))

    if lhs != rhs:
        logger.warning(f"S_k sum mismatch for g={genus}, dbar={parts}: "
                       f"{format_rational(lhs)} != {format_rational(rhs)}")
    return lhs == rhs
