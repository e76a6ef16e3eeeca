# src/linalg.py
"""
Exact linear algebra over Q for pairing matrices and relation spaces.

Two independent rank backends: elimination modulo word-size primes on
denominator-cleared rows, and fraction-free (Bareiss) elimination over Z.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from utils import logger


def integer_rows(entries):
    """Scale every row by the lcm of its denominators; row spaces are unchanged"""
    rows = []
    for row in entries:
        row = [Fraction(x) for x in row]
        lcm = 1
        for x in row:
            lcm = math.lcm(lcm, x.denominator)
        rows.append([x.numerator * (lcm // x.denominator) for x in row])
    return rows


def _gauss_rank_dense_modp(A, p):
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nonzero = np.nonzero(A[r:, c] % p)[0]
        if len(nonzero) == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        inv = pow(int(A[r, c]) % p, -1, p)
        A[r, :] = (A[r, :] * inv) % p
        below = A[r + 1:, c] % p
        for offset in np.nonzero(below)[0]:
            i = r + 1 + int(offset)
            A[i, :] = (A[i, :] - int(below[offset]) * A[r, :]) % p
        r += 1
    return r


def rank_mod_p(int_rows, p):
    """Rank over F_p of an integer matrix"""
    if not int_rows or not int_rows[0]:
        return 0
    A = np.array([[x % p for x in row] for row in int_rows], dtype=object)
    return _gauss_rank_dense_modp(A, p)


def rank_modular(int_rows, primes, threads=1):
    """
    Rank modulo each prime, concurrently
    Returns:
        dict: prime -> rank over F_prime (each a lower bound for the rank over Q)
    """
    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(primes))) as pool:
            ranks = list(pool.map(lambda p: rank_mod_p(int_rows, p), primes))
    else:
        ranks = [rank_mod_p(int_rows, p) for p in primes]
    return dict(zip(primes, ranks))


def rank_bareiss(int_rows):
    """Exact rank over Q by fraction-free elimination"""
    M = [list(row) for row in int_rows]
    m = len(M)
    n = len(M[0]) if m else 0
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        pivot_value = M[r][c]
        for i in range(r + 1, m):
            lead = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, n):
                # exact: every entry is a minor of the original matrix
                row_i[j] = (pivot_value * row_i[j] - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot_value
        r += 1
    return r


class RowEchelon:
    """
    Incrementally maintained reduced row echelon form over Q.

    Columns are eliminated in the order given by `column_order` (default:
    natural order); rows are stored with a leading 1 at their pivot.
    """

    def __init__(self, width, column_order=None):
        self.width = width
        self.column_order = list(column_order) if column_order is not None else list(range(width))
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vector):
        v = [Fraction(x) for x in vector]
        for col in self.column_order:
            if v[col] and col in self.rows:
                factor = v[col]
                pivot_row = self.rows[col]
                v = [a - factor * b for a, b in zip(v, pivot_row)]
        return v

    def add(self, vector):
        """Insert a vector; returns True if the rank grew"""
        if len(vector) != self.width:
            raise ValueError(f"Vector length {len(vector)} != width {self.width}")
        v = self.reduce(vector)
        pivot = next((c for c in self.column_order if v[c]), None)
        if pivot is None:
            return False
        scale = v[pivot]
        v = [x / scale for x in v]
        # keep the form reduced: clear the new pivot from existing rows
        for col, row in self.rows.items():
            if row[pivot]:
                factor = row[pivot]
                self.rows[col] = [a - factor * b for a, b in zip(row, v)]
        self.rows[pivot] = v
        logger.debug(f"Echelon rank now {len(self.rows)} (pivot column {pivot})")
        return True

    def pivots(self):
        return [c for c in self.column_order if c in self.rows]

    def free_columns(self):
        return [c for c in self.column_order if c not in self.rows]
