"""Finite presentations of the time category.

Two presentation modes are supported.  A :class:`Quiver` presents the free
category on its generators: arrows are paths, composition is concatenation,
and enumeration is bounded (free categories on cyclic quivers have
infinitely many arrows).  A :class:`FinCategory` is an explicit finite
category with a composition table, which supports exact global
constructions such as the martingale kernel over every arrow.

Identity arrows always exist and are named ``id_<object>``; the identity
path is the path with an empty name list.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union


class CompositionError(ValueError):
    """Raised when paths or arrows fail to compose head-to-tail."""


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Quiver:
    """Finite quiver presenting the free category on its generators."""

    objects: tuple
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.objects) != len(set(self.objects)):
            raise ValueError("object names must be distinct")
        names = [g.name for g in self.generators]
        if len(names) != len(set(names)):
            raise ValueError("generator names must be distinct")
        known = set(self.objects)
        for g in self.generators:
            if g.src not in known or g.dst not in known:
                raise ValueError(f"generator {g.name!r} references unknown objects")

    @property
    def mode(self) -> str:
        return "free"

    @cached_property
    def _by_name(self) -> dict:
        return {g.name: g for g in self.generators}

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"unknown generator {name!r}") from None

    def has_cycle(self) -> bool:
        """True when some directed cycle of generators exists."""
        out = {o: [] for o in self.objects}
        for g in self.generators:
            out[g.src].append(g.dst)
        state = {o: 0 for o in self.objects}  # 0 new, 1 active, 2 done

        def visit(o) -> bool:
            state[o] = 1
            for nxt in out[o]:
                if state[nxt] == 1 or (state[nxt] == 0 and visit(nxt)):
                    return True
            state[o] = 2
            return False

        return any(state[o] == 0 and visit(o) for o in self.objects)


@dataclass(frozen=True)
class ArrowDecl:
    name: str
    src: str
    dst: str


def identity_name(obj: str) -> str:
    return f"id_{obj}"


@dataclass(frozen=True)
class FinCategory:
    """Explicit finite category: declared non-identity arrows plus a
    composition table on composable non-identity pairs.

    ``compositions`` holds triples ``(first, then, result)`` meaning
    ``result = then o first``.  Identity arrows are implicit, one per
    object, and absorb under composition.  Law violations (missing
    composites, broken associativity) are reported by
    :func:`validate_table`, not rejected at construction, so defective
    tables can be diagnosed.
    """

    objects: tuple
    arrows: tuple
    compositions: tuple

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "compositions", tuple(
            (a, b, r) for a, b, r in self.compositions
        ))
        if len(self.objects) != len(set(self.objects)):
            raise ValueError("object names must be distinct")
        names = [a.name for a in self.arrows]
        reserved = {identity_name(o) for o in self.objects}
        clashes = [n for n in names if n in reserved]
        if clashes:
            raise ValueError(f"arrow names clash with identities: {clashes}")
        if len(names) != len(set(names)):
            raise ValueError("arrow names must be distinct")
        known = set(self.objects)
        for a in self.arrows:
            if a.src not in known or a.dst not in known:
                raise ValueError(f"arrow {a.name!r} references unknown objects")
        valid = set(names)
        for first, then, result in self.compositions:
            for n in (first, then, result):
                if n not in valid:
                    raise ValueError(f"composition references unknown arrow {n!r}")

    @property
    def mode(self) -> str:
        return "table"

    @cached_property
    def _arrow_by_name(self) -> dict:
        return {a.name: a for a in self.arrows}

    @cached_property
    def _table(self) -> dict:
        table = {}
        for first, then, result in self.compositions:
            key = (first, then)
            if key in table and table[key] != result:
                raise ValueError(f"conflicting table entries for {key}")
            table[key] = result
        return table

    @cached_property
    def identity_objects(self) -> dict:
        return {identity_name(o): o for o in self.objects}

    def is_identity(self, name: str) -> bool:
        return name in self.identity_objects

    @property
    def arrow_names(self) -> tuple:
        """All arrow names: identities (object order) then declared arrows."""
        return tuple(identity_name(o) for o in self.objects) + tuple(
            a.name for a in self.arrows
        )

    def src_of(self, name: str) -> str:
        if self.is_identity(name):
            return self.identity_objects[name]
        return self._decl(name).src

    def dst_of(self, name: str) -> str:
        if self.is_identity(name):
            return self.identity_objects[name]
        return self._decl(name).dst

    def _decl(self, name: str) -> ArrowDecl:
        try:
            return self._arrow_by_name[name]
        except KeyError:
            raise ValueError(f"unknown arrow {name!r}") from None

    def compose_pair(self, first: str, then: str) -> str:
        """Table composition ``then o first`` with identity absorption."""
        if self.dst_of(first) != self.src_of(then):
            raise CompositionError(f"arrows do not compose: {first!r} then {then!r}")
        if self.is_identity(first):
            return then
        if self.is_identity(then):
            return first
        try:
            return self._table[(first, then)]
        except KeyError:
            raise CompositionError(
                f"composition table has no entry for ({first!r}, {then!r})"
            ) from None


Presentation = Union[Quiver, FinCategory]


@dataclass(frozen=True)
class Path:
    """Composable chain of arrow names in a presentation.

    An empty name list denotes the identity at ``src`` (= ``dst``).  In
    table mode paths are kept resolved: at most one non-identity arrow
    name.  In free mode the names are generator names and the path itself
    is an arrow of the free category.
    """

    presentation: Presentation
    src: str
    dst: str
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def is_identity(self) -> bool:
        return not self.names

    @property
    def length(self) -> int:
        return len(self.names)

    def display(self) -> str:
        if not self.names:
            return identity_name(self.src)
        return "*".join(reversed(self.names))


def identity_path(pres: Presentation, obj: str) -> Path:
    if obj not in pres.objects:
        raise ValueError(f"unknown object {obj!r}")
    return Path(pres, obj, obj, ())


def arrow_path(pres: Presentation, name: str) -> Path:
    """The length-1 path of a single generator (free) or arrow (table)."""
    if isinstance(pres, Quiver):
        g = pres.generator(name)
        return Path(pres, g.src, g.dst, (name,))
    if pres.is_identity(name):
        return identity_path(pres, pres.identity_objects[name])
    decl = pres._decl(name)
    return Path(pres, decl.src, decl.dst, (name,))


def path_from_names(pres: Presentation, names: Sequence[str]) -> Path:
    """Compose a head-to-tail sequence of generator/arrow names."""
    if not names:
        raise ValueError("empty name sequence has no endpoints; use identity_path")
    path = arrow_path(pres, names[0])
    for name in names[1:]:
        path = compose(path, arrow_path(pres, name))
    return path


def compose(p: Path, q: Path) -> Path:
    """Composite path: ``p`` then ``q``.

    Concatenation in free mode; table lookup (with identity absorption) in
    table mode, so table-mode results stay resolved.
    """
    if p.presentation != q.presentation:
        raise CompositionError("paths belong to different presentations")
    if p.dst != q.src:
        raise CompositionError(
            f"paths do not compose: {p.display()} ends at {p.dst!r}, "
            f"{q.display()} starts at {q.src!r}"
        )
    pres = p.presentation
    if isinstance(pres, Quiver):
        return Path(pres, p.src, q.dst, p.names + q.names)
    name = None
    for step in p.names + q.names:
        name = step if name is None else pres.compose_pair(name, step)
    if name is None or pres.is_identity(name):
        return identity_path(pres, p.src)
    return Path(pres, p.src, q.dst, (name,))


def enumerate_arrows(q: Quiver, max_len: int) -> list:
    """All paths of length 0..max_len in deterministic order.

    Ordered by length, then lexicographically by generator position; the
    result is duplicate-free and closed under taking prefixes.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    frontier = [identity_path(q, o) for o in q.objects]
    out = list(frontier)
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for g in q.generators:
                if g.src == p.dst:
                    nxt.append(Path(q, p.src, g.dst, p.names + (g.name,)))
        out.extend(nxt)
        frontier = nxt
    return out


@dataclass(frozen=True)
class TableValidation:
    ok: bool
    issues: tuple


def validate_table(c: FinCategory) -> TableValidation:
    """Check totality, endpoint correctness, identity laws, associativity."""
    issues = []
    names = c.arrow_names
    table_ok = {}
    for first in names:
        for then in names:
            if c.dst_of(first) != c.src_of(then):
                continue
            try:
                result = c.compose_pair(first, then)
            except CompositionError:
                issues.append(f"missing composite for ({first}, {then})")
                continue
            if c.src_of(result) != c.src_of(first) or c.dst_of(result) != c.dst_of(then):
                issues.append(
                    f"composite {result} of ({first}, {then}) has wrong endpoints"
                )
                continue
            table_ok[(first, then)] = result
            if c.is_identity(first) and result != then:
                issues.append(f"identity law broken: {then} o {first} = {result}")
            if c.is_identity(then) and result != first:
                issues.append(f"identity law broken: {then} o {first} = {result}")
    for a in names:
        for b in names:
            if (a, b) not in table_ok:
                continue
            ab = table_ok[(a, b)]
            for d in names:
                if (b, d) not in table_ok:
                    continue
                bd = table_ok[(b, d)]
                left = table_ok.get((ab, d))
                right = table_ok.get((a, bd))
                if left is None or right is None:
                    continue  # already reported as missing
                if left != right:
                    issues.append(
                        f"associativity broken on ({a}, {b}, {d}): "
                        f"{left} != {right}"
                    )
    return TableValidation(not issues, tuple(issues))


def dag_table_closure(q: Quiver) -> FinCategory:
    """Finite category of all paths of an acyclic quiver.

    Every path of length >= 1 becomes an arrow; a composite path is named
    by joining its generator names in composition order with ``*``
    (``"g2*g1"`` is ``g2 o g1``).  Raises on cyclic quivers, whose free
    categories are infinite.
    """
    if q.has_cycle():
        raise ValueError("quiver has a directed cycle; its free category is infinite")
    paths = [p for p in enumerate_arrows(q, max(len(q.objects) - 1, 0)) if p.names]

    def arrow_name(p: Path) -> str:
        return "*".join(reversed(p.names))

    arrows = tuple(ArrowDecl(arrow_name(p), p.src, p.dst) for p in paths)
    compositions = []
    by_names = {p.names: p for p in paths}
    for p1 in paths:
        for p2 in paths:
            if p1.dst != p2.src:
                continue
            joined = by_names[p1.names + p2.names]
            compositions.append((arrow_name(p1), arrow_name(p2), arrow_name(joined)))
    return FinCategory(q.objects, arrows, tuple(compositions))
