"""Gauge normalization along a parametrized simplex and the transport
operators between its positions.

The gauge replaces the measure at each position by the backward
pushforward of the terminal measure, keeping atoms fixed.  Every arrow of
the simplex becomes measure-preserving in the gauged spaces, which is
what makes the transport operators compose on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .exactlinalg import RatMatrix
from .finprob import (
    FiniteProbSpace,
    L1Class,
    MeasureRelation,
    ProbMap,
    compare_measures,
    cond_expectation,
    pushforward,
    radon_nikodym,
)
from .filtration import Filtration
from .nerve import ParamSimplex, segment


@dataclass(frozen=True)
class GaugeChain:
    """A simplex with its per-position gauged measures.

    ``gauged[ell]`` carries the position-ell atoms with the gauge measure;
    ``originals[ell]`` carries the same atoms with the object's own
    measure, kept for distortion reports.
    """

    filtration: Filtration
    sigma: ParamSimplex
    gauged: tuple
    originals: tuple

    @property
    def k(self) -> int:
        return self.sigma.k

    def position_space(self, ell: int) -> FiniteProbSpace:
        return self.gauged[ell]


def build_gauge(filtration: Filtration, sigma: ParamSimplex) -> GaugeChain:
    """Backward gauge recursion along the simplex.

    The terminal position keeps its own measure; each earlier position
    receives the pushforward of its successor's gauge measure.  The gauge
    measure is absolutely continuous with respect to the original at every
    position; a failure means the filtration is invalid along the simplex
    and is raised as such.
    """
    k = sigma.k
    originals = tuple(filtration.space(obj) for obj in sigma.objects)
    gauged = [None] * (k + 1)
    gauged[k] = originals[k]
    for ell in range(k - 1, -1, -1):
        phi = filtration.map_of_path(sigma.arrows[ell])
        gauged[ell] = pushforward(gauged[ell + 1], phi)
    for ell in range(k + 1):
        relation = compare_measures(gauged[ell], originals[ell])
        if relation in (MeasureRelation.RIGHT_AC, MeasureRelation.INCOMPARABLE):
            raise ValueError(
                f"gauge measure at position {ell} is not absolutely continuous "
                f"with respect to the original; the filtration is invalid "
                f"along this simplex"
            )
    return GaugeChain(filtration, sigma, tuple(gauged), originals)


def transport(gauge: GaugeChain, a: int, b: int) -> RatMatrix:
    """Transport operator from position b to position a, as a matrix on
    full atom coordinates.

    a = b yields the identity; a < b yields the conditional expectation of
    the composed segment map between the gauged spaces, whose rows at
    null atoms of the position-a gauge measure are zero.
    """
    if not 0 <= a <= b <= gauge.k:
        raise ValueError(f"need 0 <= a <= b <= {gauge.k}, got a={a}, b={b}")
    if a == b:
        return RatMatrix.identity(len(gauge.gauged[a].atoms))
    phi = gauge.filtration.map_of_path(segment(gauge.sigma, a, b))
    gauged_map = ProbMap(gauge.gauged[b], gauge.gauged[a], phi.images)
    return cond_expectation(gauged_map)


@dataclass(frozen=True)
class PositionDistortion:
    """Comparison of the gauge measure with the original at one position."""

    position: int
    relation: MeasureRelation
    derivative: Optional[L1Class]


def gauge_distortion(gauge: GaugeChain) -> tuple:
    """Per-position comparison of gauge vs original measure, with the
    Radon-Nikodym derivative whenever the gauge measure is absolutely
    continuous (which holds at every position of a valid filtration)."""
    out = []
    for ell in range(gauge.k + 1):
        relation = compare_measures(gauge.gauged[ell], gauge.originals[ell])
        derivative = None
        if relation in (MeasureRelation.EQUAL, MeasureRelation.EQUIVALENT,
                        MeasureRelation.LEFT_AC):
            derivative = radon_nikodym(gauge.gauged[ell], gauge.originals[ell])
        out.append(PositionDistortion(ell, relation, derivative))
    return tuple(out)
