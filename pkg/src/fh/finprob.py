"""Finite probability spaces, null-preserving maps, densities, and the
conditional expectation operator.

A measure "on the same atom set" is always represented by a second
:class:`FiniteProbSpace` sharing the atom list; the gauge construction
replaces measures while keeping atoms fixed, and this representation makes
that explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Mapping, Sequence

from .exactlinalg import ONE, RatMatrix, Rational, ZERO, rat


class NotAbsolutelyContinuousError(ValueError):
    """Raised when a Radon-Nikodym derivative is requested but m1 is not
    absolutely continuous with respect to m2; carries the offending atom."""

    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"not absolutely continuous: atom {atom!r} is null "
                         f"in the reference measure but carries mass")


class MeasureRelation(Enum):
    """Support/value comparison of two measures on a shared atom set."""

    EQUAL = "equal"
    EQUIVALENT = "equivalent"
    LEFT_AC = "left_absolutely_continuous"    # first << second only
    RIGHT_AC = "right_absolutely_continuous"  # second << first only
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class FiniteProbSpace:
    """Ordered finite atom set with exact rational probability weights.

    The sigma-algebra is always the full power set, so the space is
    determined by its atoms and their weights.  Weights are nonnegative
    and sum to exactly 1.
    """

    atoms: tuple
    weights: tuple

    def __post_init__(self):
        atoms = tuple(self.atoms)
        weights = tuple(rat(w) for w in self.weights)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)
        if len(atoms) != len(set(atoms)):
            raise ValueError("atom labels must be distinct")
        if len(atoms) != len(weights):
            raise ValueError("one weight per atom required")
        if not atoms:
            raise ValueError("a probability space needs at least one atom")
        for a, w in zip(atoms, weights):
            if w < 0:
                raise ValueError(f"negative weight {w} at atom {a!r}")
        if sum(weights, ZERO) != ONE:
            raise ValueError("weights must sum to exactly 1")

    def weight(self, atom) -> Rational:
        return self.weights[self.index(atom)]

    def index(self, atom) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise ValueError(f"unknown atom {atom!r}") from None

    @cached_property
    def _index(self) -> dict:
        return {a: i for i, a in enumerate(self.atoms)}

    @cached_property
    def support(self) -> tuple:
        return tuple(a for a, w in zip(self.atoms, self.weights) if w)

    @cached_property
    def support_indices(self) -> tuple:
        return tuple(i for i, w in enumerate(self.weights) if w)

    def is_null(self, atom) -> bool:
        return not self.weight(atom)

    def with_weights(self, weights: Sequence) -> "FiniteProbSpace":
        """Same atoms, different measure."""
        return FiniteProbSpace(self.atoms, tuple(weights))

    def same_atoms(self, other: "FiniteProbSpace") -> bool:
        return self.atoms == other.atoms


@dataclass(frozen=True)
class ProbMap:
    """Atom-level measurable map between finite probability spaces.

    ``images[i]`` is the target atom of ``source.atoms[i]``.  The map is
    null-preserving when the pushforward of the source measure is
    absolutely continuous with respect to the target measure; that is a
    validity condition checked by :meth:`null_violations`, not a
    construction-time requirement, so that invalid maps can be built and
    then reported on.
    """

    source: FiniteProbSpace
    target: FiniteProbSpace
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.source.atoms):
            raise ValueError("map must assign an image to every source atom")
        for y in images:
            self.target.index(y)

    @classmethod
    def from_dict(cls, source: FiniteProbSpace, target: FiniteProbSpace,
                  assignment: Mapping) -> "ProbMap":
        missing = [a for a in source.atoms if a not in assignment]
        if missing:
            raise ValueError(f"map is not total: missing atoms {missing}")
        extra = [a for a in assignment if a not in source.atoms]
        if extra:
            raise ValueError(f"map defined on unknown atoms {extra}")
        return cls(source, target, tuple(assignment[a] for a in source.atoms))

    @classmethod
    def identity(cls, space: FiniteProbSpace) -> "ProbMap":
        return cls(space, space, space.atoms)

    def __call__(self, atom):
        return self.images[self.source.index(atom)]

    def then(self, other: "ProbMap") -> "ProbMap":
        """Composite map: apply ``self`` first, then ``other``."""
        if self.target.atoms != other.source.atoms:
            raise ValueError("maps are not composable: atom sets differ")
        return ProbMap(self.source, other.target,
                       tuple(other(y) for y in self.images))

    def fiber(self, atom) -> tuple:
        """Preimage of a target atom."""
        return tuple(a for a, y in zip(self.source.atoms, self.images) if y == atom)

    def null_violations(self) -> list:
        """Target atoms that are null yet receive positive pushforward mass."""
        pushed = pushforward(self.source, self).weights
        return [a for a, w, orig in zip(self.target.atoms, pushed, self.target.weights)
                if orig == 0 and w != 0]

    @property
    def is_null_preserving(self) -> bool:
        return not self.null_violations()


def pushforward(measure: FiniteProbSpace, phi: ProbMap) -> FiniteProbSpace:
    """Image measure of ``measure`` under ``phi``, on ``phi.target``'s atoms.

    ``measure`` may be any space sharing ``phi.source``'s atom list (the
    gauge construction pushes modified measures along the original maps).
    """
    if measure.atoms != phi.source.atoms:
        raise ValueError("measure does not live on the map's source atoms")
    acc = {a: ZERO for a in phi.target.atoms}
    for a, w in zip(measure.atoms, measure.weights):
        if w:
            acc[phi(a)] += w
    return FiniteProbSpace(phi.target.atoms, tuple(acc[a] for a in phi.target.atoms))


def compare_measures(m1: FiniteProbSpace, m2: FiniteProbSpace) -> MeasureRelation:
    """Classify two measures on the same atoms by support inclusion."""
    if m1.atoms != m2.atoms:
        raise ValueError("measures live on different atom sets")
    if m1.weights == m2.weights:
        return MeasureRelation.EQUAL
    s1, s2 = set(m1.support), set(m2.support)
    if s1 == s2:
        return MeasureRelation.EQUIVALENT
    if s1 <= s2:
        return MeasureRelation.LEFT_AC
    if s2 <= s1:
        return MeasureRelation.RIGHT_AC
    return MeasureRelation.INCOMPARABLE


@dataclass(frozen=True)
class L1Class:
    """An integrable-function class in canonical representative form.

    Classes modulo null sets have a unique stored form: the value is
    exactly 0 on every atom of weight 0.  With that convention, operator
    identities that hold almost everywhere hold as literal equalities.
    """

    space: FiniteProbSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.space.atoms):
            raise ValueError("one value per atom required")
        vals = tuple(
            rat(v) if w else ZERO
            for v, w in zip(self.values, self.space.weights)
        )
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, space: FiniteProbSpace, value) -> "L1Class":
        return cls(space, (rat(value),) * len(space.atoms))

    @classmethod
    def zero(cls, space: FiniteProbSpace) -> "L1Class":
        return cls(space, (ZERO,) * len(space.atoms))

    @classmethod
    def from_support_vector(cls, space: FiniteProbSpace, vec: Sequence) -> "L1Class":
        """Inflate a vector indexed by support atoms to a canonical class."""
        if len(vec) != len(space.support_indices):
            raise ValueError("support vector has wrong length")
        values = [ZERO] * len(space.atoms)
        for i, v in zip(space.support_indices, vec):
            values[i] = rat(v)
        return cls(space, tuple(values))

    def value(self, atom) -> Rational:
        return self.values[self.space.index(atom)]

    def support_vector(self) -> tuple:
        return tuple(self.values[i] for i in self.space.support_indices)

    def _same_space(self, other: "L1Class"):
        if self.space != other.space:
            raise ValueError("classes live on different spaces")

    def __add__(self, other: "L1Class") -> "L1Class":
        self._same_space(other)
        return L1Class(self.space,
                       tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "L1Class") -> "L1Class":
        self._same_space(other)
        return L1Class(self.space,
                       tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, other: "L1Class") -> "L1Class":
        """Pointwise product of canonical representatives."""
        self._same_space(other)
        return L1Class(self.space,
                       tuple(a * b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "L1Class":
        return L1Class(self.space, tuple(-a for a in self.values))

    def scale(self, c) -> "L1Class":
        c = rat(c)
        return L1Class(self.space, tuple(c * a for a in self.values))

    def integral(self) -> Rational:
        return sum((v * w for v, w in zip(self.values, self.space.weights)), ZERO)

    def is_zero(self) -> bool:
        return all(not v for v in self.values)


def radon_nikodym(m1: FiniteProbSpace, m2: FiniteProbSpace) -> L1Class:
    """Derivative dm1/dm2 as a canonical class on ``(m2.atoms, m2)``.

    Requires m1 << m2; the value is m1(w)/m2(w) on the support of m2 and 0
    elsewhere.  Raises :class:`NotAbsolutelyContinuousError` naming the
    first atom where absolute continuity fails.
    """
    if m1.atoms != m2.atoms:
        raise ValueError("measures live on different atom sets")
    values = []
    for a, w1, w2 in zip(m1.atoms, m1.weights, m2.weights):
        if w2 == 0:
            if w1 != 0:
                raise NotAbsolutelyContinuousError(a)
            values.append(ZERO)
        else:
            values.append(w1 / w2)
    return L1Class(m2, tuple(values))


def cond_expectation(phi: ProbMap) -> RatMatrix:
    """Conditional expectation operator of a null-preserving map as a matrix.

    Rows are indexed by target atoms, columns by source atoms.  For a
    target atom y of positive weight the row averages the fiber:
    entry (y, x) is mu_X(x)/mu_Y(y) when phi(x) = y.  Rows at null target
    atoms are zero, so the output of the operator is always canonical.
    """
    bad = phi.null_violations()
    if bad:
        raise NotAbsolutelyContinuousError(bad[0])
    src, tgt = phi.source, phi.target
    n_rows, n_cols = len(tgt.atoms), len(src.atoms)
    entries = [ZERO] * (n_rows * n_cols)
    for j, (x, wx) in enumerate(zip(src.atoms, src.weights)):
        if not wx:
            continue
        i = tgt.index(phi(x))
        wy = tgt.weights[i]
        entries[i * n_cols + j] = wx / wy
    return RatMatrix(n_rows, n_cols, tuple(entries))


def apply_operator(op: RatMatrix, f: L1Class, target: FiniteProbSpace) -> L1Class:
    """Apply a full-atom operator matrix to a class, landing on ``target``."""
    return L1Class(target, op.apply(f.values))


@dataclass(frozen=True)
class BlockLayout:
    """Layout of a direct sum of support-coordinate blocks.

    Assembled linear maps between products of L1 spaces act on vectors
    that concatenate, per key, the values of a class at the support atoms
    of its space.  The layout records the keys, their spaces, and the
    block offsets.
    """

    keys: tuple
    spaces: tuple
    offsets: tuple
    total: int

    @classmethod
    def build(cls, keys: Sequence, spaces: Sequence[FiniteProbSpace]) -> "BlockLayout":
        offsets = []
        total = 0
        for sp in spaces:
            offsets.append(total)
            total += len(sp.support_indices)
        return cls(tuple(keys), tuple(spaces), tuple(offsets), total)

    @cached_property
    def _key_index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def position(self, key) -> int:
        return self._key_index[key]

    def offset_of(self, key) -> int:
        return self.offsets[self.position(key)]

    def space_of(self, key) -> FiniteProbSpace:
        return self.spaces[self.position(key)]

    def block_dim(self, key) -> int:
        return len(self.space_of(key).support_indices)

    def pack(self, classes: Mapping) -> tuple:
        """Concatenate canonical classes (one per key) into a vector."""
        vec = []
        for key, sp in zip(self.keys, self.spaces):
            f = classes[key]
            if f.space != sp:
                raise ValueError(f"class at {key!r} lives on the wrong space")
            vec.extend(f.support_vector())
        return tuple(vec)

    def unpack(self, vec: Sequence) -> dict:
        if len(vec) != self.total:
            raise ValueError(f"expected vector of length {self.total}")
        out = {}
        for key, sp, off in zip(self.keys, self.spaces, self.offsets):
            dim = len(sp.support_indices)
            out[key] = L1Class.from_support_vector(sp, vec[off : off + dim])
        return out
