"""Parametrized simplices, coface actions, weakly monotone index maps, and
segment composites.

A parametrized simplex is an ordered transport history: positions are not
deduplicated, so repeated objects occupy distinct positions.  Degenerate
data (identity arrows, non-injective monotone maps) are retained
everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .category import (
    CompositionError,
    FinCategory,
    Path,
    Presentation,
    Quiver,
    arrow_path,
    compose,
    enumerate_arrows,
    identity_path,
)


@dataclass(frozen=True)
class MonotoneMap:
    """Weakly increasing map [n] -> [k], stored as its value sequence."""

    n: int
    k: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.n < 0 or self.k < 0:
            raise ValueError("degrees must be nonnegative")
        if len(self.values) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} values")
        for v in self.values:
            if not 0 <= v <= self.k:
                raise ValueError(f"value {v} outside 0..{self.k}")
        for a, b in zip(self.values, self.values[1:]):
            if a > b:
                raise ValueError("values must be weakly increasing")

    def __call__(self, i: int) -> int:
        return self.values[i]


def enumerate_monotone(n: int, k: int) -> list:
    """All weakly increasing maps [n] -> [k] in lexicographic order.

    The count is binomial(n + k + 1, n + 1).
    """
    if n < 0 or k < 0:
        raise ValueError("degrees must be nonnegative")
    return [MonotoneMap(n, k, vals)
            for vals in combinations_with_replacement(range(k + 1), n + 1)]


def face(theta: MonotoneMap, ell: int) -> MonotoneMap:
    """Precompose with the coface skipping ``ell``: delete position ``ell``."""
    if theta.n < 1:
        raise ValueError("cannot take a face of a 0-simplex index")
    if not 0 <= ell <= theta.n:
        raise ValueError(f"face index {ell} outside 0..{theta.n}")
    vals = theta.values[:ell] + theta.values[ell + 1 :]
    return MonotoneMap(theta.n - 1, theta.k, vals)


@dataclass(frozen=True)
class ParamSimplex:
    """Composable chain of arrows with explicit positions 0..k.

    ``objects`` lists the k+1 position objects; ``arrows[ell]`` is the
    arrow (as a :class:`Path`) from position ell to position ell+1.
    k = 0 means a single object with no arrows.
    """

    objects: tuple
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if not self.objects:
            raise ValueError("a simplex has at least one position")
        if len(self.arrows) != len(self.objects) - 1:
            raise ValueError("arrow count must be position count minus one")
        for ell, p in enumerate(self.arrows):
            if p.src != self.objects[ell] or p.dst != self.objects[ell + 1]:
                raise CompositionError(
                    f"arrow at position {ell + 1} does not run "
                    f"{self.objects[ell]!r} -> {self.objects[ell + 1]!r}"
                )

    @property
    def k(self) -> int:
        return len(self.arrows)

    @property
    def presentation(self) -> Presentation:
        return self.arrows[0].presentation if self.arrows else None

    @classmethod
    def vertex(cls, obj: str) -> "ParamSimplex":
        return cls((obj,), ())

    @classmethod
    def from_paths(cls, paths: Sequence[Path]) -> "ParamSimplex":
        if not paths:
            raise ValueError("use ParamSimplex.vertex for 0-simplices")
        objects = [paths[0].src] + [p.dst for p in paths]
        return cls(tuple(objects), tuple(paths))

    @classmethod
    def from_arrow_names(cls, pres: Presentation, names: Sequence[str]) -> "ParamSimplex":
        return cls.from_paths([arrow_path(pres, n) for n in names])


def simplex_face(tau: ParamSimplex, ell: int) -> ParamSimplex:
    """Delete vertex ``ell``, composing the two adjacent arrows when inner."""
    k = tau.k
    if k < 1:
        raise ValueError("cannot take a face of a 0-simplex")
    if not 0 <= ell <= k:
        raise ValueError(f"face index {ell} outside 0..{k}")
    if ell == 0:
        return ParamSimplex(tau.objects[1:], tau.arrows[1:])
    if ell == k:
        return ParamSimplex(tau.objects[:-1], tau.arrows[:-1])
    merged = compose(tau.arrows[ell - 1], tau.arrows[ell])
    return ParamSimplex(
        tau.objects[:ell] + tau.objects[ell + 1 :],
        tau.arrows[: ell - 1] + (merged,) + tau.arrows[ell + 1 :],
    )


def segment(sigma: ParamSimplex, a: int, b: int) -> Path:
    """Composite of the arrows strictly between positions a and b.

    a = b yields the identity path at position a.
    """
    if not 0 <= a <= b <= sigma.k:
        raise ValueError(f"need 0 <= a <= b <= {sigma.k}, got a={a}, b={b}")
    if a == b:
        if sigma.arrows:
            pres = sigma.arrows[0].presentation
            return identity_path(pres, sigma.objects[a])
        raise ValueError("0-simplex has no presentation to build a path in")
    path = sigma.arrows[a]
    for p in sigma.arrows[a + 1 : b]:
        path = compose(path, p)
    return path


def table_nerve_slice(cat: FinCategory, n: int) -> list:
    """All n-chains of composable arrows (identities included), exactly.

    Deterministic order: chains are extended one arrow at a time in the
    order of :attr:`FinCategory.arrow_names`.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return [ParamSimplex.vertex(o) for o in cat.objects]
    paths = [arrow_path(cat, name) for name in cat.arrow_names]
    # identity arrows become identity paths; keep one entry per arrow name
    slices = [ParamSimplex.from_paths((p,)) for p in paths]
    for _ in range(n - 1):
        nxt = []
        for tau in slices:
            for p in paths:
                if p.src == tau.objects[-1]:
                    nxt.append(ParamSimplex(tau.objects + (p.dst,), tau.arrows + (p,)))
        slices = nxt
    return slices


def free_nerve_slice(q: Quiver, n: int, max_total_len: int) -> list:
    """n-chains of free-category arrows with bounded total generator count.

    The nerve of a free category with cycles is infinite in every degree;
    this enumerates the finite slice whose arrows use at most
    ``max_total_len`` generators in total, identity arrows included.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if max_total_len < 0:
        raise ValueError("max_total_len must be nonnegative")
    if n == 0:
        return [ParamSimplex.vertex(o) for o in q.objects]
    paths = enumerate_arrows(q, max_total_len)
    slices = []

    def extend(tau, used):
        if tau.k == n:
            slices.append(tau)
            return
        for p in paths:
            if p.length > max_total_len - used:
                continue
            if p.src != tau.objects[-1]:
                continue
            extend(ParamSimplex(tau.objects + (p.dst,), tau.arrows + (p,)),
                   used + p.length)

    for o in q.objects:
        extend(ParamSimplex.vertex(o), 0)
    return slices
