"""Loop detection, holonomy operators, triviality classification, and
loop scanning.

A loop is a parametrized simplex whose initial and terminal positions
carry the same object.  Loops are based and parametrized: rotations of
the same cycle are distinct loops and are reported separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product as iter_product
from typing import Optional

from .category import FinCategory, Quiver, arrow_path, enumerate_arrows
from .exactlinalg import RatMatrix
from .filtration import Filtration
from .finprob import (
    FiniteProbSpace,
    L1Class,
    MeasureRelation,
    compare_measures,
    radon_nikodym,
)
from .gauge import GaugeChain, build_gauge, gauge_distortion, transport
from .nerve import ParamSimplex


class Classification(Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"


@dataclass(frozen=True)
class HolonomyReport:
    """Full account of transport around one based loop.

    ``distortion`` is the derivative of the initial gauge measure against
    the terminal one, present exactly when the former is absolutely
    continuous with respect to the latter.  ``arbitrage`` is an alias of
    nontriviality: the loop's transport fails to preserve the
    probabilistic structure.
    """

    sigma: ParamSimplex
    is_loop: bool
    classification: Classification
    relation: MeasureRelation
    initial: FiniteProbSpace
    terminal: FiniteProbSpace
    distortion: Optional[L1Class]
    holonomy: RatMatrix
    internal: tuple

    @property
    def arbitrage(self) -> bool:
        return self.classification is Classification.NONTRIVIAL


def is_loop(sigma: ParamSimplex) -> bool:
    """True when the initial and terminal positions carry the same object."""
    return sigma.objects[0] == sigma.objects[-1]


def holonomy_operator(gauge: GaugeChain) -> RatMatrix:
    """Transport around the entire loop, from the terminal position back
    to the initial one."""
    if not is_loop(gauge.sigma):
        raise ValueError("holonomy is defined for loops only")
    return transport(gauge, 0, gauge.k)


def classify(filtration: Filtration, sigma: ParamSimplex) -> HolonomyReport:
    """Build the gauge along a loop and classify its holonomy.

    The loop is trivial exactly when the initial and terminal gauge
    measures are equivalent (equal supports); otherwise transport around
    the loop has changed the probabilistic structure itself.
    """
    if not is_loop(sigma):
        raise ValueError(
            f"not a loop: endpoints {sigma.objects[0]!r} and "
            f"{sigma.objects[-1]!r} differ"
        )
    gauge = build_gauge(filtration, sigma)
    initial = gauge.gauged[0]
    terminal = gauge.gauged[gauge.k]
    relation = compare_measures(initial, terminal)
    trivial = relation in (MeasureRelation.EQUAL, MeasureRelation.EQUIVALENT)
    distortion = None
    if relation in (MeasureRelation.EQUAL, MeasureRelation.EQUIVALENT,
                    MeasureRelation.LEFT_AC):
        distortion = radon_nikodym(initial, terminal)
    return HolonomyReport(
        sigma=sigma,
        is_loop=True,
        classification=Classification.TRIVIAL if trivial else Classification.NONTRIVIAL,
        relation=relation,
        initial=initial,
        terminal=terminal,
        distortion=distortion,
        holonomy=holonomy_operator(gauge),
        internal=gauge_distortion(gauge),
    )


@dataclass(frozen=True)
class LoopScan:
    reports: tuple
    max_len: int
    truncated: bool
    limit: Optional[int]


def _free_loops(quiver: Quiver, max_len: int):
    for path in enumerate_arrows(quiver, max_len):
        if path.src != path.dst:
            continue
        if path.is_identity:
            yield ParamSimplex.vertex(path.src)
        else:
            yield ParamSimplex.from_arrow_names(quiver, path.names)


def _table_loops(cat: FinCategory, max_len: int):
    for obj in cat.objects:
        yield ParamSimplex.vertex(obj)
    paths = [arrow_path(cat, name) for name in cat.arrow_names]
    for length in range(1, max_len + 1):
        for combo in iter_product(paths, repeat=length):
            if any(a.dst != b.src for a, b in zip(combo, combo[1:])):
                continue
            if combo[0].src != combo[-1].dst:
                continue
            yield ParamSimplex.from_paths(combo)


def scan_loops(filtration: Filtration, max_len: int,
               limit: Optional[int] = None) -> LoopScan:
    """Classify every based loop of length up to ``max_len``.

    Free mode enumerates generator paths with coinciding endpoints; table
    mode enumerates composable arrow tuples (identities included) whose
    endpoints coincide.  Order is the deterministic enumeration order;
    when ``limit`` caps the report count the scan is flagged truncated.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    pres = filtration.presentation
    loops = (_free_loops(pres, max_len) if isinstance(pres, Quiver)
             else _table_loops(pres, max_len))
    reports = []
    truncated = False
    for sigma in loops:
        if limit is not None and len(reports) >= limit:
            truncated = True
            break
        reports.append(classify(filtration, sigma))
    return LoopScan(tuple(reports), max_len, truncated, limit)
