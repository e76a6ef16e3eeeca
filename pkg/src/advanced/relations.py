# src/advanced/relations.py
"""
Tautological relations in R^i(C_g) from the vanishing c_j(F_n - E) = 0,
n = 2g-1, j >= g
Usage: python src/cli.py relations --genus 3 --degree 2

Each relation is the pushdown of M_r * c_j(F_n - E) to C_g for a monomial M_r
in the diagonal classes. The relation space of a degree also collects the
multiples of lower-degree relations and the kappa monomials of kappa-degree
above g-2, which vanish on M_g.
"""

import sys
import os
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

# Add parent directory to path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from combinatorics import CgMonomial, enumerate_cg_monomials
from config import Config
from linalg import RowEchelon
from pushforward import TautMonomial, expression_degree, push_down_chern
from utils import ComputationError, format_rational, log_job, logger, validate_degree, validate_genus

COMPLETE = 'complete'
TARGET_REACHED = 'target_reached'
BUDGET_EXHAUSTED = 'budget_exhausted'


@dataclass(frozen=True)
class RelationRecipe:
    """How a relation was produced"""
    source: str  # faber | ideal | vanishing
    monomial: str
    j: int = None

    def to_dict(self):
        return {'source': self.source, 'j': self.j, 'monomial': self.monomial}


@dataclass
class Relation:
    """A vector in the basis enumerate_cg_monomials(degree) of R^degree(C_g)"""
    genus: int
    degree: int
    coefficients: tuple
    recipe: RelationRecipe

    def __post_init__(self):
        self.coefficients = tuple(Fraction(c) for c in self.coefficients)
        expected = len(enumerate_cg_monomials(self.degree))
        if len(self.coefficients) != expected:
            raise ComputationError(
                f"Relation in degree {self.degree} has {len(self.coefficients)} coefficients, expected {expected}")

    def is_zero(self):
        return not any(self.coefficients)

    def normalized(self):
        """Coprime integer coefficients, positive on the largest monomial under <_*"""
        if self.is_zero():
            return self
        lcm = 1
        for c in self.coefficients:
            lcm = math.lcm(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coefficients]
        content = 0
        for x in ints:
            content = math.gcd(content, x)
        lead = next(x for x in reversed(ints) if x)
        if lead < 0:
            content = -content
        return Relation(self.genus, self.degree, tuple(Fraction(x, content) for x in ints), self.recipe)

    def human(self):
        """e.g. 42*K^2 - 21/2*K*k1 + 7/48*k1^2 = 0"""
        labels = [m.label() for m in enumerate_cg_monomials(self.degree)]
        return f"{format_linear(self.coefficients, labels)} = 0"

    def to_dict(self):
        return {
            'coefficients': [format_rational(c) for c in self.coefficients],
            'recipe': self.recipe.to_dict(),
        }


def format_linear(coefficients, labels):
    """Linear combination with the largest monomial first; '0' when empty"""
    chunks = []
    for coeff, label in reversed(list(zip(coefficients, labels))):
        if not coeff:
            continue
        magnitude = abs(coeff)
        if label == '1':
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = label
        else:
            body = f"{format_rational(magnitude)}*{label}"
        if not chunks:
            chunks.append(f"-{body}" if coeff < 0 else body)
        else:
            chunks.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return ' '.join(chunks) if chunks else '0'


# --- Faber monomials ---------------------------------------------------------

def chern_range(genus, degree):
    """Admissible Chern degrees j for relations in R^degree(C_g): g <= j <= g+degree-1"""
    return range(genus, genus + degree)


def faber_monomials(genus, degree, j):
    """
    The diagonal monomials M_0, M_1, ... on C_g^{2g-1} used with c_j(F_{2g-1} - E)
    Args:
        genus (int): g >= 2
        degree (int): Target degree i, 0 <= i <= g-1
        j (int): Chern degree, g <= j <= g+i-1
    Returns:
        list: TautMonomials of degree i+2g-2-j
    Raises:
        ValueError: If q = 2g+2i-2j-1 falls outside [1, 2g-1]
    """
    genus = validate_genus(genus)
    degree = validate_degree(degree, 0, genus - 1, "relation degree")
    j = int(j)
    if j < genus:
        raise ValueError(f"Chern degree j = {j} must be at least g = {genus}")
    q = 2 * genus + 2 * degree - 2 * j - 1
    if q < 1 or q > 2 * genus - 1:
        raise ValueError(f"q = 2g+2i-2j-1 = {q} outside [1, {2 * genus - 1}] for g={genus}, i={degree}, j={j}")

    points = 2 * genus - 1
    star = [(1, t) for t in range(2, q + 1)]
    tail = [(t, t + 1) for t in range(q + 1, points, 2)]

    family = [TautMonomial.from_diagonals(star + tail, points)]
    for r in range(0, q - 2):
        star = [pair for pair in star if pair != (1, q - r)]
        star.append((q - r, q - r + 1))
        family.append(TautMonomial.from_diagonals(star + tail, points))

    expected = degree + 2 * genus - 2 - j
    for mono in family:
        if mono.degree != expected:
            raise ComputationError(f"Monomial {mono.label()} has degree {mono.degree}, expected {expected}")
    return family


def relation_vector(expr, genus, degree):
    """Coefficients of a class on C_g in the basis enumerate_cg_monomials(degree)"""
    basis = enumerate_cg_monomials(degree)
    index = {m: k for k, m in enumerate(basis)}
    vector = [Fraction(0)] * len(basis)
    if expr.points != 1:
        raise ComputationError(f"Expected a class on C_g, got one on C_g^{expr.points}")
    if not expr.is_zero() and expression_degree(expr) != degree:
        raise ComputationError(f"Pushed class has degree {expression_degree(expr)}, expected {degree}")
    for mono, coeff in expr.terms.items():
        if mono.diagonals or not mono.lambda_part.is_zero():
            raise ComputationError(f"Unexpected factor left after pushdown: {mono.label()}")
        vector[index[CgMonomial(mono.k_exponents[0], mono.kappa_part)]] += coeff
    return vector


def push_relation(genus, degree, j, monomial):
    """
    Push M * c_j(F_{2g-1} - E) down to C_g
    Args:
        genus (int): g
        degree (int): i
        j (int): Chern degree, j >= g
        monomial (TautMonomial): M on C_g^{2g-1} of degree i+2g-2-j
    Returns:
        Relation: The raw (unnormalized) relation vector
    Raises:
        ValueError: If a precondition fails
        ComputationError: If the pushed class has the wrong degree
    """
    genus = validate_genus(genus)
    degree = validate_degree(degree, 0, genus - 1, "relation degree")
    points = 2 * genus - 1
    if monomial.points != points:
        raise ValueError(f"Monomial must live on C_g^{points}, got C_g^{monomial.points}")
    if j < points - genus + 1:
        raise ValueError(f"c_j(F_n - E) vanishes only for j >= {points - genus + 1}, got j = {j}")
    if monomial.degree != degree + 2 * genus - 2 - j:
        raise ValueError(f"Monomial degree {monomial.degree} != i+2g-2-j = {degree + 2 * genus - 2 - j}")

    pushed = push_down_chern(monomial, j, genus, target_points=1)
    vector = relation_vector(pushed, genus, degree)
    log_job("PUSH_RELATION", genus, degree, f"j={j} M={monomial.label()}", status="DONE")
    return Relation(genus, degree, tuple(vector), RelationRecipe('faber', monomial.label(), j))


# --- relation spaces ---------------------------------------------------------

@dataclass
class RelationBudget:
    """Search limits: j <= g + chern_offset, at most max_attempts pushdowns per degree"""
    chern_offset: int = 4
    max_attempts: int = None
    include_ideal: bool = True
    include_vanishing: bool = True
    threads: int = 1

    @classmethod
    def from_config(cls, job=None):
        if job is None:
            return cls(Config.CHERN_OFFSET, Config.MAX_ATTEMPTS, threads=Config.THREADS)
        return cls(job.chern_offset, job.max_attempts, threads=job.threads)


def preference_order(basis):
    """Quotient-basis preference: fewest kappa factors, then lowest K power, then <_kappa"""
    return sorted(range(len(basis)),
                  key=lambda k: (basis[k].kappa_part.length, basis[k].k_power, basis[k].kappa_part))


@dataclass
class RelationSpace:
    """Discovered relations of R^degree(C_g) kept in reduced row echelon form"""
    genus: int
    degree: int
    basis: list
    relations: list = field(default_factory=list)
    attempts: int = 0
    status: str = COMPLETE
    target_rank: int = None
    echelon: RowEchelon = None

    def __post_init__(self):
        if self.echelon is None:
            order = list(reversed(preference_order(self.basis)))
            self.echelon = RowEchelon(len(self.basis), order)

    @property
    def rank(self):
        return self.echelon.rank

    @property
    def labels(self):
        return [m.label() for m in self.basis]

    @property
    def upper_bound(self):
        """dim R^degree(C_g) is at most the number of basis monomials minus the rank"""
        return len(self.basis) - self.rank

    def target_met(self):
        return self.target_rank is not None and self.rank >= self.target_rank

    def add(self, relation):
        """Keep the relation if it enlarges the space; returns True if it did"""
        if self.echelon.add(relation.coefficients):
            self.relations.append(relation.normalized())
            return True
        return False

    def reduced_forms(self):
        """
        Every non-basis monomial solved in terms of the quotient basis
        Returns:
            list: (monomial label, right-hand side text) in <_* order
        """
        forms = []
        free = self.echelon.free_columns()
        for col in sorted(self.echelon.pivots()):
            row = self.echelon.rows[col]
            rhs = [Fraction(0)] * len(self.basis)
            for f in free:
                rhs[f] = -row[f]
            forms.append((self.basis[col].label(), format_linear(rhs, self.labels)))
        return forms

    def quotient_basis(self):
        return [self.basis[c].label() for c in sorted(self.echelon.free_columns())]

    def to_dict(self):
        return {
            'genus': self.genus,
            'degree': self.degree,
            'basis': self.labels,
            'rows': [[format_rational(c) for c in r.coefficients] for r in self.relations],
            'recipes': [r.recipe.to_dict() for r in self.relations],
            'rank': self.rank,
            'status': self.status,
            'reduced': [f"{lhs} = {rhs}" for lhs, rhs in self.reduced_forms()],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class RelationSearch:
    """
    Builds relation spaces degree by degree for one genus.

    Spaces are memoized so that higher degrees can multiply up the
    relations already found in lower degrees.
    """

    def __init__(self, genus, budget=None):
        self.genus = validate_genus(genus, maximum=Config.MAX_RELATION_GENUS)
        self.budget = budget or RelationBudget.from_config()
        self._spaces = {}

    def jobs(self, degree):
        """All admissible (j, M) pairs in search order, and the subset the budget allows"""
        every = [(j, mono) for j in chern_range(self.genus, degree)
                 for mono in faber_monomials(self.genus, degree, j)]
        allowed = [(j, mono) for j, mono in every if j <= self.genus + self.budget.chern_offset]
        if self.budget.max_attempts is not None:
            allowed = allowed[:self.budget.max_attempts]
        return every, allowed

    def _push_batch(self, degree, batch):
        if self.budget.threads > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=min(self.budget.threads, len(batch))) as pool:
                return list(pool.map(lambda job: push_relation(self.genus, degree, job[0], job[1]), batch))
        return [push_relation(self.genus, degree, j, mono) for j, mono in batch]

    def _add_faber(self, space, allowed):
        size = max(1, self.budget.threads)
        for start in range(0, len(allowed), size):
            if space.target_met():
                return
            batch = allowed[start:start + size]
            for relation in self._push_batch(space.degree, batch):
                space.attempts += 1
                space.add(relation)
                if space.target_met():
                    return

    def _add_ideal(self, space):
        index = {m: k for k, m in enumerate(space.basis)}
        for lower in range(1, space.degree):
            for relation in self.space(lower).relations:
                lower_basis = enumerate_cg_monomials(lower)
                for factor in enumerate_cg_monomials(space.degree - lower):
                    if space.target_met():
                        return
                    vector = [Fraction(0)] * len(space.basis)
                    for coeff, mono in zip(relation.coefficients, lower_basis):
                        if coeff:
                            vector[index[mono * factor]] += coeff
                    space.add(Relation(self.genus, space.degree, tuple(vector),
                                       RelationRecipe('ideal', f"({relation.recipe.monomial})*{factor.label()}")))

    def _add_vanishing(self, space):
        for k, mono in enumerate(space.basis):
            if space.target_met():
                return
            if mono.kappa_part.weight > self.genus - 2:
                vector = [Fraction(0)] * len(space.basis)
                vector[k] = Fraction(1)
                space.add(Relation(self.genus, space.degree, tuple(vector),
                                   RelationRecipe('vanishing', mono.label())))

    def space(self, degree, target_rank=None):
        """
        Relation space of R^degree(C_g)
        Args:
            degree (int): 0 <= i <= g-1
            target_rank (int, optional): Stop as soon as the rank reaches this value
        Returns:
            RelationSpace: status is complete, target_reached or budget_exhausted
        """
        degree = validate_degree(degree, 0, self.genus - 1, "relation degree")
        cached = self._spaces.get(degree)
        if cached is not None and (target_rank is None or cached.rank >= target_rank
                                   or cached.status == COMPLETE):
            return cached

        space = RelationSpace(self.genus, degree, enumerate_cg_monomials(degree), target_rank=target_rank)
        every, allowed = self.jobs(degree)
        log_job("RELATION_SPACE", self.genus, degree,
                f"{len(allowed)}/{len(every)} pushdowns allowed", status="STARTED")

        self._add_faber(space, allowed)
        if self.budget.include_ideal:
            self._add_ideal(space)
        if self.budget.include_vanishing:
            self._add_vanishing(space)

        if space.target_met():
            space.status = TARGET_REACHED
        elif len(allowed) == len(every) and space.attempts == len(every):
            space.status = COMPLETE
        else:
            space.status = BUDGET_EXHAUSTED
            logger.warning(f"Relation search for g={self.genus}, degree {degree} stopped at rank "
                           f"{space.rank} after {space.attempts} pushdowns")

        log_job("RELATION_SPACE", self.genus, degree, f"rank={space.rank} attempts={space.attempts}",
                status=space.status.upper())
        self._spaces[degree] = space
        return space


def relation_space(genus, degree, budget=None, target_rank=None):
    """
    Relation space of R^degree(C_g) under a search budget
    Args:
        genus (int): 2 <= g <= 9
        degree (int): 0 <= i <= g-1
        budget (RelationBudget, optional): Defaults from Config
        target_rank (int, optional): Early stop
    Returns:
        RelationSpace: Independent relations with recipes and the search status
    """
    return RelationSearch(genus, budget).space(degree, target_rank)
