"""The circulant metric g built from two scalar fields A and B.

At every point the metric matrix has A on the diagonal and B off the
diagonal. Admissibility requires A > B > 0, which is strictly stronger
than positive definiteness. The scalar D = (A - B)(A + 2B) shows up as
the denominator of the closed-form inverse (diagonal (A+B)/D,
off-diagonal -B/D) and of the closed-form curvature components.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainViolation, PositivityViolation
from .expressions import ScalarFieldExpr, as_point, eval_jet, eval_value, parse
from .jets import Jet2


@dataclass(frozen=True)
class MetricFunctions:
    """The fields A, B plus chart constraints (each required > 0)."""

    A: ScalarFieldExpr
    B: ScalarFieldExpr
    domain_constraints: tuple[ScalarFieldExpr, ...] = ()

    @classmethod
    def from_sources(cls, A: str, B: str, domain_constraints=()) -> "MetricFunctions":
        return cls(parse(A), parse(B), tuple(parse(c) for c in domain_constraints))


@dataclass(frozen=True)
class MetricAtPoint:
    """Metric data at one point: jets of A and B, g, its inverse, and D."""

    A_jet: Jet2
    B_jet: Jet2
    g: np.ndarray
    g_inv: np.ndarray
    D: float

    @property
    def A(self) -> float:
        return self.A_jet.value

    @property
    def B(self) -> float:
        return self.B_jet.value


class PositivityReport(NamedTuple):
    positive_definite: bool
    minors: tuple[float, float, float]


def check_positive_definite(A: float, B: float) -> PositivityReport:
    """Leading principal minors of the circulant matrix and their positivity.

    The minors are A, (A-B)(A+B) and (A-B)^2 (A+2B); g is positive
    definite iff all three are positive. Note A > B > 0 is stricter.
    """
    m1 = float(A)
    m2 = float((A - B) * (A + B))
    m3 = float((A - B) ** 2 * (A + 2 * B))
    return PositivityReport(m1 > 0.0 and m2 > 0.0 and m3 > 0.0, (m1, m2, m3))


def metric_at(m: MetricFunctions, p, allow_weak: bool = False) -> MetricAtPoint:
    """Evaluate the metric at p, enforcing A > B > 0 and the chart constraints.

    With ``allow_weak=True`` a point where A > B > 0 fails but g is still
    positive definite is admitted with a warning instead of an error.
    """
    pt = as_point(p)
    for c in m.domain_constraints:
        val = eval_value(c, pt)
        if not val > 0.0:
            raise DomainViolation(c.source or str(c), val, pt)
    A_jet = eval_jet(m.A, pt)
    B_jet = eval_jet(m.B, pt)
    A, B = A_jet.value, B_jet.value
    if not (A > B > 0.0):
        if allow_weak and check_positive_definite(A, B).positive_definite:
            warnings.warn(
                f"A > B > 0 fails at {tuple(pt)} (A={A!r}, B={B!r}) but g is "
                "still positive definite; continuing",
                stacklevel=2,
            )
        else:
            raise PositivityViolation(A, B, pt)
    g = np.full((3, 3), B)
    np.fill_diagonal(g, A)
    D = (A - B) * (A + 2 * B)
    g_inv = np.full((3, 3), -B / D)
    np.fill_diagonal(g_inv, (A + B) / D)
    return MetricAtPoint(A_jet, B_jet, g, g_inv, D)


def inner(M: MetricAtPoint, x, y) -> float:
    """g(x, y) at the point where M was evaluated."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(x @ M.g @ y)
