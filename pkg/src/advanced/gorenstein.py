# src/advanced/gorenstein.py
"""
Gorenstein check for R(C_g) by matching bounds
Usage: python src/cli.py gorenstein --genus 4

In each degree i the pairing rank of Q_{g,i} bounds dim R^i(C_g) from below
and the discovered relations bound it from above. When the two agree in
every degree the pairing into R^{g-1}(C_g) is perfect.
"""

import sys
import os
import json
from dataclasses import dataclass, field

# Add parent directory to path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from advanced.relations import RelationBudget, RelationSearch
from combinatorics import enumerate_cg_monomials
from config import Config
from pairing import q_rank
from utils import ComputationError, log_job, validate_genus

GORENSTEIN = 'GORENSTEIN'
UNDETERMINED = 'UNDETERMINED'


@dataclass
class DegreeBounds:
    degree: int
    monomials: int
    lower: int
    upper: int
    search_status: str

    @property
    def matched(self):
        return self.lower == self.upper

    def to_dict(self):
        return {
            'degree': self.degree,
            'monomials': self.monomials,
            'lower': self.lower,
            'upper': self.upper,
            'matched': self.matched,
            'search_status': self.search_status,
        }


@dataclass
class GorensteinReport:
    genus: int
    degrees: list = field(default_factory=list)
    verdict: str = UNDETERMINED

    @property
    def dimensions(self):
        return [d.lower for d in self.degrees]

    @property
    def top_degree_one_dimensional(self):
        top = self.degrees[-1] if self.degrees else None
        return top is not None and top.lower == 1 and top.upper == 1

    def to_dict(self):
        return {
            'genus': self.genus,
            'verdict': self.verdict,
            'dimensions': self.dimensions,
            'top_degree_one_dimensional': self.top_degree_one_dimensional,
            'vanishing_above': self.genus - 1,
            'degrees': [d.to_dict() for d in self.degrees],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def human(self):
        lines = [f"g = {self.genus}: {self.verdict}",
                 f"{'degree':>6} {'monomials':>9} {'lower':>5} {'upper':>5}  matched"]
        for d in self.degrees:
            lines.append(f"{d.degree:>6} {d.monomials:>9} {d.lower:>5} {d.upper:>5}  "
                         f"{'yes' if d.matched else 'no'}")
        lines.append(f"dims: {', '.join(str(x) for x in self.dimensions)}")
        lines.append(f"R^i(C_g) = 0 for i > {self.genus - 1}")
        return '\n'.join(lines)


def gorenstein_check(genus, budget=None, **rank_options):
    """
    Compare pairing ranks with relation counts in degrees 0..g-1
    Args:
        genus (int): 2 <= g <= 9
        budget (RelationBudget, optional): Relation search limits
        **rank_options: Passed to exact_rank
    Returns:
        GorensteinReport: verdict GORENSTEIN iff every degree matches and the
                          top degree is one-dimensional, UNDETERMINED otherwise
    Raises:
        ComputationError: If an upper bound falls below its lower bound
    """
    genus = validate_genus(genus, maximum=Config.MAX_RELATION_GENUS)
    search = RelationSearch(genus, budget or RelationBudget.from_config())
    report = GorensteinReport(genus)

    for degree in range(genus):
        lower = q_rank(genus, degree, **rank_options).rank
        monomials = len(enumerate_cg_monomials(degree))
        space = search.space(degree, target_rank=monomials - lower)
        upper = space.upper_bound
        if upper < lower:
            raise ComputationError(
                f"Degree {degree} of R(C_{genus}): relations leave {upper} < pairing rank {lower}")
        bounds = DegreeBounds(degree, monomials, lower, upper, space.status)
        report.degrees.append(bounds)
        log_job("GORENSTEIN_DEGREE", genus, degree, f"lower={lower} upper={upper}",
                status="MATCHED" if bounds.matched else "OPEN")

    if all(d.matched for d in report.degrees) and report.top_degree_one_dimensional:
        report.verdict = GORENSTEIN
    log_job("GORENSTEIN", genus, None, f"dims={report.dimensions}", status=report.verdict)
    return report
