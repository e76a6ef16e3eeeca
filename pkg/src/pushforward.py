# src/pushforward.py
"""
Symbolic classes on the fiber powers C_g^n and pushforward along the map
forgetting the last point.

Monomials are products of K_i, diagonals D_{i,j}, and kappa/lambda classes
pulled back from M_g. Pushforward uses the Harris-Mumford identities

    (1) D_{i,n} D_{j,n} = D_{i,j} D_{i,n}     i < j < n
    (2) D_{i,n}^2       = -K_i D_{i,n}
    (3) K_n D_{i,n}     = K_i D_{i,n}
    (4) pi_*(M D_{i,n}) = M
    (5) pi_*(M K_n^k)   = M kappa_{k-1}       (kappa_0 = 2g-2, kappa_{-1} = 0)

A point index is 1-based; C_g^0 is M_g.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from combinatorics import MultiIndex, bernoulli
from utils import ComputationError, format_rational


@dataclass(frozen=True)
class TautMonomial:
    """A monomial in K_i, D_{i,j}, kappa and lambda classes on C_g^points"""

    points: int
    k_exponents: tuple
    diagonals: tuple = ()
    kappa_part: MultiIndex = MultiIndex()
    lambda_part: MultiIndex = MultiIndex()

    def __post_init__(self):
        if len(self.k_exponents) != self.points:
            raise ValueError(f"Need {self.points} K-exponents, got {len(self.k_exponents)}")
        pairs = []
        for i, j in self.diagonals:
            i, j = min(i, j), max(i, j)
            if i == j or i < 1 or j > self.points:
                raise ValueError(f"Invalid diagonal D_{{{i},{j}}} on C_g^{self.points}")
            pairs.append((i, j))
        object.__setattr__(self, 'diagonals', tuple(sorted(pairs)))

    @classmethod
    def one(cls, points):
        return cls(points, (0,) * points)

    @classmethod
    def k_class(cls, i, points, power=1):
        exps = [0] * points
        exps[i - 1] = power
        return cls(points, tuple(exps))

    @classmethod
    def diagonal(cls, i, j, points):
        return cls(points, (0,) * points, ((i, j),))

    @classmethod
    def kappa(cls, m, points):
        return cls(points, (0,) * points, (), m)

    @classmethod
    def lam(cls, i, points):
        return cls(points, (0,) * points, (), MultiIndex(), MultiIndex.unit(i))

    @classmethod
    def from_diagonals(cls, pairs, points):
        return cls(points, (0,) * points, tuple(pairs))

    @property
    def degree(self):
        return (sum(self.k_exponents) + len(self.diagonals)
                + self.kappa_part.weight + self.lambda_part.weight)

    def involves(self, n):
        """True if some K_n or D_{i,n} factor is present"""
        return self.k_exponents[n - 1] > 0 or any(j == n for _, j in self.diagonals)

    def __mul__(self, other):
        if self.points != other.points:
            raise ValueError(f"Cannot multiply classes on C_g^{self.points} and C_g^{other.points}")
        return TautMonomial(
            self.points,
            tuple(a + b for a, b in zip(self.k_exponents, other.k_exponents)),
            self.diagonals + other.diagonals,
            self.kappa_part + other.kappa_part,
            self.lambda_part + other.lambda_part,
        )

    def pullback(self):
        """Pull back along C_g^{n+1} -> C_g^n forgetting the new last point"""
        return TautMonomial(self.points + 1, self.k_exponents + (0,),
                            self.diagonals, self.kappa_part, self.lambda_part)

    def sort_key(self):
        return (self.diagonals, self.k_exponents,
                self.kappa_part.exponents, self.lambda_part.exponents)

    def label(self):
        factors = []
        for i, e in enumerate(self.k_exponents, start=1):
            if e:
                factors.append(f"K{i}" if e == 1 else f"K{i}^{e}")
        for i, j in self.diagonals:
            factors.append(f"D{i}{j}" if max(i, j) < 10 else f"D{i}_{j}")
        if not self.kappa_part.is_zero():
            factors.append(self.kappa_part.label())
        for i, e in enumerate(self.lambda_part.exponents, start=1):
            if e:
                factors.append(f"l{i}" if e == 1 else f"l{i}^{e}")
        return '*'.join(factors) if factors else '1'

    def __str__(self):
        return self.label()


class TautExpression:
    """A Q-linear combination of TautMonomials on a fixed C_g^points"""

    def __init__(self, points, terms=None, genus=None):
        self.points = points
        self.genus = genus
        self.terms = {}
        for mono, coeff in (terms or {}).items():
            self._accumulate(mono, coeff)

    def _accumulate(self, mono, coeff):
        if mono.points != self.points:
            raise ValueError(f"Term on C_g^{mono.points} added to expression on C_g^{self.points}")
        value = self.terms.get(mono, 0) + Fraction(coeff)
        if value:
            self.terms[mono] = value
        else:
            self.terms.pop(mono, None)

    @classmethod
    def of(cls, mono, coeff=1, genus=None):
        return cls(mono.points, {mono: Fraction(coeff)}, genus)

    @classmethod
    def zero(cls, points, genus=None):
        return cls(points, None, genus)

    @classmethod
    def one(cls, points, genus=None):
        return cls.of(TautMonomial.one(points), 1, genus)

    def _genus_with(self, other):
        if self.genus is not None and other.genus is not None and self.genus != other.genus:
            raise ValueError(f"Genus mismatch: {self.genus} vs {other.genus}")
        return self.genus if self.genus is not None else other.genus

    def copy(self):
        out = TautExpression(self.points, None, self.genus)
        out.terms = dict(self.terms)
        return out

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def degrees(self):
        return {mono.degree for mono in self.terms}

    def add_inplace(self, other, scale=1):
        if other.points != self.points:
            raise ValueError(f"Cannot add C_g^{other.points} class to C_g^{self.points} class")
        self.genus = self._genus_with(other)
        for mono, coeff in other.terms.items():
            self._accumulate(mono, coeff * scale)
        return self

    def __add__(self, other):
        return self.copy().add_inplace(other)

    def __sub__(self, other):
        return self.copy().add_inplace(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        factor = Fraction(factor)
        out = TautExpression(self.points, None, self.genus)
        if factor:
            out.terms = {mono: coeff * factor for mono, coeff in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, TautExpression):
            return self.scale(other)
        out = TautExpression(self.points, None, self._genus_with(other))
        if other.points != self.points:
            raise ValueError(f"Cannot multiply C_g^{self.points} and C_g^{other.points} classes")
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._accumulate(m1 * m2, c1 * c2)
        return out

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TautExpression):
            return NotImplemented
        return self.points == other.points and self.terms == other.terms

    def pullback(self):
        out = TautExpression(self.points + 1, None, self.genus)
        out.terms = {mono.pullback(): coeff for mono, coeff in self.terms.items()}
        return out

    def __str__(self):
        if not self.terms:
            return '0'
        chunks = []
        for mono, coeff in self.items():
            label = mono.label()
            if label == '1':
                text = format_rational(coeff)
            elif coeff == 1:
                text = label
            elif coeff == -1:
                text = f"-{label}"
            else:
                text = f"{format_rational(coeff)}*{label}"
            chunks.append(text)
        return ' + '.join(chunks).replace('+ -', '- ')

    __repr__ = __str__


# --- rewriting ---------------------------------------------------------------

def _normal_form(mono, n):
    """
    Deterministic normal form with respect to point n
    Returns:
        tuple: (sign, monomial) with at most one factor D_{i,n}, and no K_n next to it
    """
    partners = [i for i, j in mono.diagonals if j == n]
    if not partners:
        return 1, mono

    anchor = min(partners)
    e = partners.count(anchor)
    kept = [pair for pair in mono.diagonals if pair[1] != n]
    kept.extend((anchor, j) for j in partners if j != anchor)
    kept.append((anchor, n))

    exps = list(mono.k_exponents)
    exps[anchor - 1] += exps[n - 1] + (e - 1)
    exps[n - 1] = 0
    sign = -1 if (e - 1) % 2 else 1
    return sign, TautMonomial(mono.points, tuple(exps), tuple(kept),
                              mono.kappa_part, mono.lambda_part)


def _rule_instances(exps, diagonals, n):
    """Applicable anchored rule instances as (rule, partner) pairs"""
    partners = [i for i, j in diagonals if j == n]
    if not partners:
        return []
    anchor = min(partners)
    found = [(1, j) for j in partners if j != anchor]
    if partners.count(anchor) > 1:
        found.append((2, anchor))
    if exps[n - 1] > 0:
        found.append((3, anchor))
    return found


def _normal_form_stepwise(mono, n, rng):
    exps = list(mono.k_exponents)
    diagonals = list(mono.diagonals)
    sign = 1
    while True:
        instances = _rule_instances(exps, diagonals, n)
        if not instances:
            break
        rule, partner = rng.choice(instances)
        anchor = min(i for i, j in diagonals if j == n)
        if rule == 1:
            diagonals.remove((partner, n))
            diagonals.append((anchor, partner))
        elif rule == 2:
            diagonals.remove((anchor, n))
            exps[anchor - 1] += 1
            sign = -sign
        else:
            exps[n - 1] -= 1
            exps[anchor - 1] += 1
    return sign, TautMonomial(mono.points, tuple(exps), tuple(diagonals),
                              mono.kappa_part, mono.lambda_part)


def normalize(mono, forget, genus=None, rng=None):
    """
    Rewrite a monomial so that, with respect to point `forget`, it is a
    pulled-back monomial times a single D_{i,n} or a power of K_n
    Args:
        mono (TautMonomial): Monomial on C_g^n
        forget (int): The point n
        genus (int, optional): Genus carried by the result
        rng (random.Random, optional): Apply rule instances in random order
    Returns:
        TautExpression: The single rewritten term with its sign
    """
    if forget < 1 or forget > mono.points:
        raise ValueError(f"Point {forget} not on C_g^{mono.points}")
    if rng is None:
        sign, out = _normal_form(mono, forget)
    else:
        sign, out = _normal_form_stepwise(mono, forget, rng)
    return TautExpression.of(out, sign, genus)


def _push_monomial(mono, genus):
    n = mono.points
    sign, mono = _normal_form(mono, n)
    exps = mono.k_exponents[:-1]
    rest = tuple(pair for pair in mono.diagonals if pair[1] != n)
    if len(rest) < len(mono.diagonals):
        # rule (4): the normal form has exactly one D_{i,n} and no K_n
        return Fraction(sign), TautMonomial(n - 1, exps, rest, mono.kappa_part, mono.lambda_part)

    k = mono.k_exponents[-1]
    if k == 0:
        return None
    if k == 1:
        return (Fraction(sign * (2 * genus - 2)),
                TautMonomial(n - 1, exps, mono.diagonals, mono.kappa_part, mono.lambda_part))
    return (Fraction(sign),
            TautMonomial(n - 1, exps, mono.diagonals,
                         mono.kappa_part + MultiIndex.unit(k - 1), mono.lambda_part))


def pushforward(expr, forget=None, genus=None):
    """
    Push a class on C_g^n forward to C_g^{n-1} (to M_g when n = 1)
    Args:
        expr (TautExpression): Class on C_g^n, n >= 1
        forget (int, optional): Must be n; only the last point can be forgotten
        genus (int, optional): Needed for kappa_0 = 2g-2 when expr carries none
    Returns:
        TautExpression: Image on C_g^{n-1}
    Raises:
        ValueError: If the point or genus is unusable
    """
    n = expr.points
    if n < 1:
        raise ValueError("Nothing to push forward from M_g")
    if forget is not None and forget != n:
        raise ValueError(f"Only the last point ({n}) can be forgotten, got {forget}")
    genus = genus if genus is not None else expr.genus
    if genus is None:
        raise ValueError("Pushforward needs the genus (kappa_0 = 2g-2)")

    out = TautExpression(n - 1, None, genus)
    for mono, coeff in expr.terms.items():
        image = _push_monomial(mono, genus)
        if image is not None:
            factor, target = image
            out._accumulate(target, coeff * factor)
    return out


# --- Chern classes -----------------------------------------------------------

def delta(n, genus=None):
    """Delta_n = D_{1,n} + ... + D_{n-1,n} on C_g^n"""
    out = TautExpression(n, None, genus)
    for i in range(1, n):
        out._accumulate(TautMonomial.diagonal(i, n, n), 1)
    return out


def k_minus_delta(n, genus=None):
    return TautExpression.of(TautMonomial.k_class(n, n), 1, genus) - delta(n, genus)


@lru_cache(maxsize=None)
def _chern_f(n, k, genus):
    if k < 0 or k > n:
        return TautExpression.zero(n, genus)
    if n == 1:
        if k == 0:
            return TautExpression.one(1, genus)
        return TautExpression.of(TautMonomial.k_class(1, 1), 1, genus)
    previous = _chern_f(n - 1, k, genus).pullback()
    lower = _chern_f(n - 1, k - 1, genus).pullback()
    return previous + k_minus_delta(n, genus) * lower


def chern_f(n, k, genus=None):
    """
    c_k(F_n), the degree-k part of (1+K_1)(1+K_2-Delta_2)...(1+K_n-Delta_n)
    built with c_k(F_n) = c_k(F_{n-1}) + (K_n - Delta_n) c_{k-1}(F_{n-1})
    """
    if n < 1 or k < 0:
        raise ValueError(f"chern_f needs n >= 1 and k >= 0, got n={n}, k={k}")
    return _chern_f(n, k, genus).copy()


def chern_fe(n, k, genus):
    """c_k(F_n - E) = sum_{i=0}^{k} (-1)^i lambda_i c_{k-i}(F_n), with lambda_i = 0 for i > g"""
    if n < 1 or k < 0:
        raise ValueError(f"chern_fe needs n >= 1 and k >= 0, got n={n}, k={k}")
    out = TautExpression.zero(n, genus)
    for i in range(0, min(k, genus) + 1):
        term = chern_f(n, k - i, genus)
        if i:
            term = term * TautExpression.of(TautMonomial.lam(i, n), (-1) ** i, genus)
        out.add_inplace(term)
    return out


# --- lambda elimination ------------------------------------------------------

def _poly_mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            value = out.get(m, 0) + c1 * c2
            if value:
                out[m] = value
            else:
                out.pop(m, None)
    return out


@lru_cache(maxsize=None)
def _lambda_table(genus):
    # sum lambda_i t^i = exp(S), S = sum_i B_{2i} kappa_{2i-1} t^{2i-1} / (2i(2i-1));
    # from E' = S'E:  n E_n = sum_{odd k <= n} k S_k E_{n-k}
    series = [{MultiIndex(): Fraction(1)}]
    for n in range(1, genus + 1):
        acc = {}
        for k in range(1, n + 1, 2):
            i = (k + 1) // 2
            coeff = Fraction(k) * bernoulli(2 * i) / (2 * i * (2 * i - 1)) / n
            for m, c in series[n - k].items():
                key = m + MultiIndex.unit(k)
                value = acc.get(key, 0) + coeff * c
                if value:
                    acc[key] = value
                else:
                    acc.pop(key, None)
        series.append(acc)
    return tuple(tuple(sorted(p.items())) for p in series)


def lambda_polynomials(genus):
    """lambda_0..lambda_g as kappa polynomials (MultiIndex -> coefficient)"""
    return [dict(p) for p in _lambda_table(genus)]


def lambda_to_kappa(expr, genus):
    """
    Replace every lambda monomial by its kappa polynomial; lambda_i = 0 for i > g
    Returns:
        TautExpression: Same class with no lambda factors
    """
    lambdas = lambda_polynomials(genus)
    cache = {}
    out = TautExpression(expr.points, None, genus)
    for mono, coeff in expr.terms.items():
        lam = mono.lambda_part
        if lam.is_zero():
            out._accumulate(mono, coeff)
            continue
        if len(lam.exponents) > genus:
            continue
        poly = cache.get(lam)
        if poly is None:
            poly = {MultiIndex(): Fraction(1)}
            for i, e in enumerate(lam.exponents, start=1):
                for _ in range(e):
                    poly = _poly_mul(poly, lambdas[i])
            cache[lam] = poly
        for m, c in poly.items():
            target = TautMonomial(mono.points, mono.k_exponents, mono.diagonals,
                                  mono.kappa_part + m, MultiIndex())
            out._accumulate(target, coeff * c)
    return out


# --- interleaved pushdown ----------------------------------------------------

def push_down_chern(monomial, j, genus, target_points=1):
    """
    Push M * c_j(F_n - E) from C_g^n down to C_g^target_points without
    expanding the Chern class, using
        pi_*(P c_k(F_n)) = pi_*(P) c_k(F_{n-1}) + pi_*(P (K_n - Delta_n)) c_{k-1}(F_{n-1})
    Lambda classes are eliminated once, at the end.
    Args:
        monomial (TautMonomial): M on C_g^n
        j (int): Chern degree
        genus (int): g
        target_points (int): Stop on C_g^target_points (>= 1)
    Returns:
        TautExpression: The pushed class, free of lambda classes
    """
    n = monomial.points
    if target_points < 1 or target_points > n:
        raise ValueError(f"Cannot push from C_g^{n} to C_g^{target_points}")

    # state[k] = P_k with the class equal to sum_k P_k c_k(F_n)
    state = {}
    base = TautExpression.of(monomial, 1, genus)
    for i in range(0, min(j, genus) + 1):
        term = base if i == 0 else base * TautExpression.of(TautMonomial.lam(i, n), (-1) ** i, genus)
        state[j - i] = term

    for point in range(n, target_points, -1):
        factor = k_minus_delta(point, genus)
        next_state = {}
        for k, expr in state.items():
            if k < 0 or k > point or expr.is_zero():
                continue
            if k <= point - 1:
                stay = pushforward(expr, point, genus)
                if not stay.is_zero():
                    next_state.setdefault(k, TautExpression.zero(point - 1, genus)).add_inplace(stay)
            if k >= 1:
                drop = pushforward(expr * factor, point, genus)
                if not drop.is_zero():
                    next_state.setdefault(k - 1, TautExpression.zero(point - 1, genus)).add_inplace(drop)
        state = next_state

    out = TautExpression.zero(target_points, genus)
    for k, expr in state.items():
        if not expr.is_zero():
            out.add_inplace(expr * chern_f(target_points, k, genus))
    return lambda_to_kappa(out, genus)


def expression_degree(expr):
    degrees = expr.degrees()
    if len(degrees) > 1:
        raise ComputationError(f"Inhomogeneous class with degrees {sorted(degrees)}")
    return degrees.pop() if degrees else 0
