# src/combinatorics.py
"""
Integer partitions, kappa/K monomials and small number-theoretic helpers.

A MultiIndex m = (m_1, m_2, ...) encodes the kappa monomial
kappa_1^m_1 * kappa_2^m_2 * ...; a CgMonomial adds a power of K.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering


@total_ordering
@dataclass(frozen=True, eq=True)
class MultiIndex:
    """Exponent vector of a kappa monomial, trailing zeros stripped"""

    exponents: tuple = ()

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"Exponents must be non-negative, got: {exps}")
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        object.__setattr__(self, 'exponents', exps)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def unit(cls, i):
        """The index of the single class kappa_i (i >= 1)"""
        if i < 1:
            raise ValueError(f"kappa index must be positive, got: {i}")
        return cls((0,) * (i - 1) + (1,))

    @classmethod
    def from_parts(cls, parts):
        """Convert a list of parts (kappa subscripts) into an exponent vector"""
        parts = list(parts)
        if not parts:
            return cls.zero()
        if min(parts) < 1:
            raise ValueError(f"Parts must be positive, got: {parts}")
        exps = [0] * max(parts)
        for p in parts:
            exps[p - 1] += 1
        return cls(tuple(exps))

    @classmethod
    def parse(cls, text):
        """
        Parse the canonical text encoding
        Args:
            text (str): comma-separated exponents, e.g. "2,0,1" for kappa_1^2 kappa_3
        Returns:
            MultiIndex: Parsed index
        Raises:
            ValueError: If the text is malformed
        """
        if text is None or not str(text).strip():
            raise ValueError("Multi-index text must be non-empty")
        try:
            exps = tuple(int(chunk) for chunk in str(text).split(','))
        except ValueError:
            raise ValueError(f"Invalid multi-index: {text}. Use comma-separated exponents")
        return cls(exps)

    def encode(self):
        return ','.join(str(e) for e in self.exponents) if self.exponents else '0'

    def __getitem__(self, i):
        """Exponent m_i of kappa_i (1-based)"""
        if i < 1 or i > len(self.exponents):
            return 0
        return self.exponents[i - 1]

    @property
    def weight(self):
        """|m| = sum i * m_i, the degree of kappa_m"""
        return sum(i * e for i, e in enumerate(self.exponents, start=1))

    @property
    def length(self):
        """||m|| = sum m_i, the number of kappa factors"""
        return sum(self.exponents)

    @property
    def factorial(self):
        """m! = prod m_i!"""
        return math.prod(math.factorial(e) for e in self.exponents)

    def parts(self):
        """Kappa subscripts with multiplicity, largest first"""
        out = []
        for i in range(len(self.exponents), 0, -1):
            out.extend([i] * self.exponents[i - 1])
        return out

    def contains(self, i):
        return self[i] > 0

    def is_zero(self):
        return not self.exponents

    def __add__(self, other):
        n = max(len(self.exponents), len(other.exponents))
        a = self.exponents + (0,) * (n - len(self.exponents))
        b = other.exponents + (0,) * (n - len(other.exponents))
        return MultiIndex(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        n = max(len(self.exponents), len(other.exponents))
        a = self.exponents + (0,) * (n - len(self.exponents))
        b = other.exponents + (0,) * (n - len(other.exponents))
        diff = tuple(x - y for x, y in zip(a, b))
        if any(d < 0 for d in diff):
            raise ValueError(f"{other.encode()} is not contained in {self.encode()}")
        return MultiIndex(diff)

    def splittings(self):
        """All coordinatewise decompositions m = m' + m'' as (m', m'')"""
        for head in itertools.product(*(range(e + 1) for e in self.exponents)):
            first = MultiIndex(head)
            yield first, self - first

    def __lt__(self, other):
        # <_kappa: degree first, then lexicographic on (m_1, m_2, ...)
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return (self.weight, self.exponents) < (other.weight, other.exponents)

    def label(self):
        """Human-readable monomial, e.g. k1^2*k3; the empty index is 1"""
        factors = []
        for i, e in enumerate(self.exponents, start=1):
            if e == 1:
                factors.append(f"k{i}")
            elif e > 1:
                factors.append(f"k{i}^{e}")
        return '*'.join(factors) if factors else '1'

    def __str__(self):
        return self.label()


@total_ordering
@dataclass(frozen=True, eq=True)
class CgMonomial:
    """K^j * kappa_m on the universal curve"""

    k_power: int
    kappa_part: MultiIndex

    def __post_init__(self):
        if self.k_power < 0:
            raise ValueError(f"K-power must be non-negative, got: {self.k_power}")

    @property
    def degree(self):
        return self.k_power + self.kappa_part.weight

    def __lt__(self, other):
        # <_*: K-power ascending, ties broken by <_kappa
        if not isinstance(other, CgMonomial):
            return NotImplemented
        return ((self.degree, self.k_power, self.kappa_part)
                < (other.degree, other.k_power, other.kappa_part))

    def __mul__(self, other):
        return CgMonomial(self.k_power + other.k_power, self.kappa_part + other.kappa_part)

    def label(self):
        factors = []
        if self.k_power == 1:
            factors.append('K')
        elif self.k_power > 1:
            factors.append(f"K^{self.k_power}")
        if not self.kappa_part.is_zero():
            factors.append(self.kappa_part.label())
        return '*'.join(factors) if factors else '1'

    def __str__(self):
        return self.label()


def integer_partitions(n, max_part=None):
    """Partitions of n as non-increasing tuples, generated by largest part"""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for largest in range(min(n, max_part), 0, -1):
        for rest in integer_partitions(n - largest, largest):
            yield (largest,) + rest


@lru_cache(maxsize=None)
def _kappa_monomials(d):
    return tuple(sorted(MultiIndex.from_parts(p) for p in integer_partitions(d)))


def enumerate_kappa_monomials(d):
    """
    All kappa monomials of degree d, ascending under <_kappa
    Args:
        d (int): Degree, d >= 0
    Returns:
        list: p(d) MultiIndexes
    Raises:
        ValueError: If d is negative
    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got: {d}")
    return list(_kappa_monomials(d))


def enumerate_cg_monomials(d):
    """
    All monomials K^j kappa_m of degree d, ascending under <_*
    Args:
        d (int): Degree, d >= 0
    Returns:
        list: sum_{r=0}^{d} p(r) CgMonomials
    Raises:
        ValueError: If d is negative
    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got: {d}")
    return [CgMonomial(j, m)
            for j in range(d + 1)
            for m in enumerate_kappa_monomials(d - j)]


@lru_cache(maxsize=None)
def _partition_count(n, max_part):
    if n == 0:
        return 1
    return sum(_partition_count(n - k, k) for k in range(1, min(n, max_part) + 1))


def partition_count(d):
    """p(d), with p(0) = 1"""
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got: {d}")
    return _partition_count(d, d)


def double_factorial(k):
    """
    k!! with the conventions (-1)!! = 0!! = 1
    Raises:
        ValueError: If k < -1
    """
    if k < -1:
        raise ValueError(f"Double factorial undefined for {k}")
    return math.prod(range(k, 0, -2))


@lru_cache(maxsize=None)
def _even_bernoulli(k):
    # B_{2k} from sum_{r=0}^{n} C(n+1, r) B_r = 0, with B_1 = -1/2 and odd B_r = 0 for r >= 3
    if k == 0:
        return Fraction(1)
    n = 2 * k
    s = Fraction(n + 1) * Fraction(-1, 2)
    for j in range(k):
        s += math.comb(n + 1, 2 * j) * _even_bernoulli(j)
    return -s / (n + 1)


def bernoulli(index):
    """
    Signed Bernoulli number B_index for an even index >= 2 (B_2 = 1/6, B_4 = -1/30)
    Raises:
        ValueError: If the index is odd or not positive
    """
    if index < 2 or index % 2:
        raise ValueError(f"Bernoulli index must be even and >= 2, got: {index}")
    return _even_bernoulli(index // 2)
