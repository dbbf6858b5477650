"""
span_calculus.py - Codimensions of intersections and spans of divisor-defined series.

A series H0(C, O(m)(-Σ d_i Q_i)) is represented only by its multiplicity
vector (d_1..d_q). Under the degree hypothesis every intersection has
codimension Σ_i max d_i, which drives two span computations:
  - span_codim_oracle: inclusion-exclusion over all nonempty subsets
  - span_codim_trace:  sum of the diagonal, valid when each diagonal entry
                       is its column minimum
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from errors import SpanError

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 20


@dataclass(frozen=True)
class DivisorSeries:
    mult: tuple                     # multiplicity of each Q_i in the base locus
    level: int                      # twist m of O(m)
    weight: Fraction = Fraction(0)  # λ-weight bound of the series' elements

    def degree(self) -> int:
        return sum(self.mult)


def _common_level(series) -> int:
    levels = {s.level for s in series}
    if len(levels) > 1:
        raise SpanError("incomparable series")
    return levels.pop()


def _column_max(series) -> tuple:
    return tuple(max(col) for col in zip(*(s.mult for s in series)))


def degree_hypothesis(series, ctx, m: int) -> bool:
    """Σ_i max_j mult_{j,i} < dm - 2g."""
    if not series:
        return True
    if _common_level(series) != m:
        raise SpanError("incomparable series")
    return sum(_column_max(series)) < ctx.d * m - 2 * ctx.g


def intersection_codim(series) -> int:
    if not series:
        raise SpanError("empty intersection")
    _common_level(series)
    return sum(_column_max(series))


def span_codim_oracle(series) -> int:
    """Inclusion-exclusion over every nonempty subset of the series."""
    if not series:
        raise SpanError("empty intersection")
    if len(series) > ORACLE_LIMIT:
        raise SpanError("oracle size limit")
    _common_level(series)

    total = 0
    for size in range(1, len(series) + 1):
        sign = 1 if size % 2 else -1
        for subset in combinations(series, size):
            total += sign * intersection_codim(subset)
    return total


def span_codim_trace(series, diag_check: bool = True) -> int:
    """
    Σ_i mult_{i,i} for q series over q support points.
    With diag_check the column-minimum precondition is enforced.
    """
    if not series:
        raise SpanError("empty intersection")
    _common_level(series)
    q = len(series[0].mult)
    if len(series) != q:
        raise SpanError(f"trace needs one series per support point: {len(series)} series, q = {q}")

    if diag_check:
        for i in range(q):
            column_min = min(s.mult[i] for s in series)
            if series[i].mult[i] != column_min:
                raise SpanError("diagonal minimality violated")
    return sum(series[i].mult[i] for i in range(q))
