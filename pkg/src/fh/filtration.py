"""Contravariant filtrations over a finite presentation: validation,
densities, the martingale operator, and the naive chain with its
obstruction witness.

For an arrow i: s -> t of the time category, the stored map F(i) runs
between the spaces in the opposite direction, from the space at t to the
space at s; contravariance is explicit in the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .category import FinCategory, Path, Presentation, Quiver, enumerate_arrows
from .exactlinalg import (
    RatMatrix,
    add_block,
    grid_matrix,
    kernel_basis,
    zeros_grid,
)
from .finprob import (
    BlockLayout,
    FiniteProbSpace,
    L1Class,
    ProbMap,
    apply_operator,
    cond_expectation,
    pushforward,
    radon_nikodym,
)
from .nerve import ParamSimplex, free_nerve_slice, simplex_face, table_nerve_slice


@dataclass(frozen=True)
class Filtration:
    """Assignment of spaces to objects and maps to arrows, contravariantly.

    ``maps`` covers every generator (free mode) or every declared
    non-identity arrow (table mode); identity arrows always get the
    identity map.  Null-preservation and table functoriality are validity
    conditions reported by :func:`validate`, not construction-time
    requirements.
    """

    presentation: Presentation
    spaces: Mapping[str, FiniteProbSpace]
    maps: Mapping[str, ProbMap]

    def __post_init__(self):
        missing = [o for o in self.presentation.objects if o not in self.spaces]
        if missing:
            raise ValueError(f"objects without spaces: {missing}")
        for name in self._arrow_decls():
            if name not in self.maps:
                raise ValueError(f"arrow {name!r} has no map")
        for name in self._arrow_decls():
            phi = self.maps[name]
            s, t = self._endpoints(name)
            if phi.source != self.spaces[t] or phi.target != self.spaces[s]:
                raise ValueError(
                    f"map of arrow {name!r} must run from the space at {t!r} "
                    f"to the space at {s!r}"
                )

    def _arrow_decls(self):
        if isinstance(self.presentation, Quiver):
            return [g.name for g in self.presentation.generators]
        return [a.name for a in self.presentation.arrows]

    def _endpoints(self, name):
        if isinstance(self.presentation, Quiver):
            g = self.presentation.generator(name)
            return g.src, g.dst
        return self.presentation.src_of(name), self.presentation.dst_of(name)

    @property
    def mode(self) -> str:
        return self.presentation.mode

    def space(self, obj: str) -> FiniteProbSpace:
        try:
            return self.spaces[obj]
        except KeyError:
            raise ValueError(f"unknown object {obj!r}") from None

    def map_of(self, name: str) -> ProbMap:
        if isinstance(self.presentation, FinCategory) and self.presentation.is_identity(name):
            return ProbMap.identity(self.space(self.presentation.identity_objects[name]))
        try:
            return self.maps[name]
        except KeyError:
            raise ValueError(f"unknown arrow {name!r}") from None

    def map_of_path(self, p: Path) -> ProbMap:
        """Image of an arrow of the category: composes generator images.

        For p: s -> t the result maps the space at t to the space at s;
        the last name of the path acts first.
        """
        if p.is_identity:
            return ProbMap.identity(self.space(p.src))
        phi = None
        for name in reversed(p.names):
            step = self.map_of(name)
            phi = step if phi is None else phi.then(step)
        return phi

    def analysis_arrows(self, max_path_len: Optional[int] = None) -> tuple:
        """Arrow set for global computations.

        Table mode: every arrow, exactly.  Free mode: all paths up to
        ``max_path_len`` (default twice the generator count), since the
        free category on a cyclic quiver has infinitely many arrows.
        """
        from .category import arrow_path

        if isinstance(self.presentation, FinCategory):
            return tuple(arrow_path(self.presentation, n)
                         for n in self.presentation.arrow_names)
        bound = max_path_len
        if bound is None:
            bound = 2 * len(self.presentation.generators)
        return tuple(enumerate_arrows(self.presentation, bound))


def table_closure(filtration: Filtration) -> Filtration:
    """Close a free-mode filtration on an acyclic quiver into table mode.

    Every path becomes an arrow of the finite category and its map is the
    composite of the generator maps, so the result is functorial by
    construction.
    """
    from .category import dag_table_closure

    if not isinstance(filtration.presentation, Quiver):
        raise ValueError("table_closure expects a free-mode filtration")
    quiver = filtration.presentation
    cat = dag_table_closure(quiver)
    paths = [p for p in enumerate_arrows(quiver, max(len(quiver.objects) - 1, 0))
             if p.names]
    maps = {}
    for p in paths:
        maps["*".join(reversed(p.names))] = filtration.map_of_path(p)
    return Filtration(cat, dict(filtration.spaces), maps)


@dataclass(frozen=True)
class FiltrationValidation:
    ok: bool
    issues: tuple


def validate(filtration: Filtration) -> FiltrationValidation:
    """Report null-preservation failures per arrow (with a witness atom)
    and, in table mode, composition-table and functoriality failures."""
    issues = []
    pres = filtration.presentation
    if isinstance(pres, FinCategory):
        from .category import validate_table

        table_report = validate_table(pres)
        issues.extend(table_report.issues)
    for name in filtration._arrow_decls():
        phi = filtration.maps[name]
        bad = phi.null_violations()
        if bad:
            issues.append(
                f"arrow {name}: null-preservation fails at atom {bad[0]!r}"
            )
    if isinstance(pres, FinCategory):
        for first, then, result in pres.compositions:
            composed = filtration.map_of(then).then(filtration.map_of(first))
            declared = filtration.map_of(result)
            if composed.images != declared.images:
                witness = next(
                    a for a, x, y in zip(declared.source.atoms,
                                         composed.images, declared.images)
                    if x != y
                )
                issues.append(
                    f"functoriality fails on pair ({first}, {then}): "
                    f"map of {result} disagrees with the composite at atom "
                    f"{witness!r}"
                )
    return FiltrationValidation(not issues, tuple(issues))


def density(filtration: Filtration, i: Path) -> L1Class:
    """Density of an arrow: derivative of the pushed measure against the
    measure at the arrow's source object.  Constant 1 on the support
    exactly when the map is measure-preserving."""
    phi = filtration.map_of_path(i)
    pushed = pushforward(phi.source, phi)
    return radon_nikodym(pushed, filtration.space(i.src))


@dataclass(frozen=True)
class AdaptedProcess:
    """One integrable class per object, each in canonical form."""

    components: Mapping[str, L1Class]

    def __getitem__(self, obj: str) -> L1Class:
        return self.components[obj]

    @classmethod
    def constant(cls, filtration: Filtration, value) -> "AdaptedProcess":
        return cls({o: L1Class.constant(filtration.space(o), value)
                    for o in filtration.presentation.objects})


def delta1(filtration: Filtration, f: AdaptedProcess, arrows: Sequence[Path]) -> dict:
    """First transport differential, one class per supplied arrow.

    The component at i: s -> t is the conditional expectation of the
    t-component minus the pointwise product of the s-component with the
    arrow's density.
    """
    out = {}
    for i in arrows:
        for obj in (i.src, i.dst):
            if f[obj].space != filtration.space(obj):
                raise ValueError(f"process component at {obj!r} lives on the "
                                 f"wrong space")
        phi = filtration.map_of_path(i)
        target_space = filtration.space(i.src)
        transported = apply_operator(cond_expectation(phi), f[i.dst], target_space)
        out[i] = transported - f[i.src] * density(filtration, i)
    return out


def martingale_layouts(filtration: Filtration, arrows: Sequence[Path]):
    objects = filtration.presentation.objects
    col_layout = BlockLayout.build(objects, [filtration.space(o) for o in objects])
    row_layout = BlockLayout.build(
        tuple(arrows), [filtration.space(i.src) for i in arrows]
    )
    return row_layout, col_layout


def martingale_matrix(filtration: Filtration, arrows: Sequence[Path]) -> RatMatrix:
    """Assembled matrix of the first differential on support coordinates."""
    row_layout, col_layout = martingale_layouts(filtration, arrows)
    grid = zeros_grid(row_layout.total, col_layout.total)
    for i in arrows:
        row_off = row_layout.offset_of(i)
        space_s = filtration.space(i.src)
        space_t = filtration.space(i.dst)
        phi = filtration.map_of_path(i)
        cond = cond_expectation(phi).submatrix(
            space_s.support_indices, space_t.support_indices
        )
        add_block(grid, row_off, col_layout.offset_of(i.dst), cond, +1)
        diag = RatMatrix.diagonal(density(filtration, i).support_vector())
        add_block(grid, row_off, col_layout.offset_of(i.src), diag, -1)
    return grid_matrix(grid, col_layout.total)


@dataclass(frozen=True)
class MartingaleKernel:
    dimension: int
    basis: tuple
    matrix: RatMatrix
    arrows: tuple
    max_path_len: Optional[int]


def martingale_kernel(filtration: Filtration,
                      arrows: Optional[Sequence[Path]] = None,
                      max_path_len: Optional[int] = None) -> MartingaleKernel:
    """Exact kernel of the assembled first differential.

    The kernel is the space of processes annihilated by every supplied
    arrow's differential; in free mode the arrow set is truncated at
    ``max_path_len`` and recorded in the result.
    """
    if arrows is None:
        arrows = filtration.analysis_arrows(max_path_len)
    arrows = tuple(arrows)
    matrix = martingale_matrix(filtration, arrows)
    _, col_layout = martingale_layouts(filtration, arrows)
    basis = tuple(
        AdaptedProcess(col_layout.unpack(vec)) for vec in kernel_basis(matrix)
    )
    used_bound = None
    if isinstance(filtration.presentation, Quiver):
        used_bound = (max_path_len if max_path_len is not None
                      else 2 * len(filtration.presentation.generators))
    return MartingaleKernel(len(basis), basis, matrix, arrows, used_bound)


def chain_layout(filtration: Filtration, simplices: Sequence[ParamSimplex]) -> BlockLayout:
    """Block layout of a naive chain group: one block per simplex, on the
    support of the measure at the simplex's initial object."""
    return BlockLayout.build(
        tuple(simplices), [filtration.space(tau.objects[0]) for tau in simplices]
    )


def naive_delta(filtration: Filtration,
                lower: Sequence[ParamSimplex],
                upper: Sequence[ParamSimplex]) -> RatMatrix:
    """Matrix of the naive coboundary from the lower to the upper slice.

    Per simplex the alternating sum applies: conditional expectation along
    the first arrow (face 0), multiplication by the first arrow's density
    (face 1), and identities (faces >= 2).  The lower slice must contain
    every face of every upper simplex.
    """
    lower_layout = chain_layout(filtration, lower)
    upper_layout = chain_layout(filtration, upper)
    grid = zeros_grid(upper_layout.total, lower_layout.total)
    for tau in upper:
        n = tau.k
        if n < 1:
            raise ValueError("upper slice must consist of simplices of degree >= 1")
        row_off = upper_layout.offset_of(tau)
        space0 = filtration.space(tau.objects[0])
        first = tau.arrows[0]
        for ell in range(n + 1):
            face_tau = simplex_face(tau, ell)
            try:
                col_off = lower_layout.offset_of(face_tau)
            except KeyError:
                raise ValueError(
                    "lower slice is not closed under the faces of the upper slice"
                ) from None
            sign = 1 if ell % 2 == 0 else -1
            if ell == 0:
                space1 = filtration.space(tau.objects[1])
                op = cond_expectation(filtration.map_of_path(first)).submatrix(
                    space0.support_indices, space1.support_indices
                )
            elif ell == 1:
                op = RatMatrix.diagonal(
                    density(filtration, first).support_vector()
                )
            else:
                op = RatMatrix.identity(len(space0.support_indices))
            add_block(grid, row_off, col_off, op, sign)
    return grid_matrix(grid, lower_layout.total)


@dataclass(frozen=True)
class NaiveWitness:
    basis_simplex: ParamSimplex
    basis_atom: object
    simplex: ParamSimplex
    value: L1Class


@dataclass(frozen=True)
class NaiveObstruction:
    degree: int
    is_zero: bool
    witness: Optional[NaiveWitness]
    composite: RatMatrix
    lower: BlockLayout
    mid: BlockLayout
    upper: BlockLayout
    truncated: bool
    bound: Optional[int]


def nerve_slices(filtration: Filtration, degrees: Sequence[int],
                 max_total_len: Optional[int] = None):
    """Nerve slices for the requested degrees: exact in table mode,
    truncated to a total generator length in free mode."""
    pres = filtration.presentation
    if isinstance(pres, FinCategory):
        return [table_nerve_slice(pres, n) for n in degrees], False, None
    bound = max_total_len
    if bound is None:
        bound = 2 * len(pres.generators)
    return [free_nerve_slice(pres, n, bound) for n in degrees], True, bound


def naive_obstruction(filtration: Filtration, n: int,
                      max_total_len: Optional[int] = None) -> NaiveObstruction:
    """Exact composite of two consecutive naive coboundaries.

    The naive chain is not a cochain complex in general; when the
    composite is nonzero the report carries a witness basis cochain, the
    simplex where it evaluates nonzero, and the value.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    (low, mid, up), truncated, bound = nerve_slices(
        filtration, [n - 1, n, n + 1], max_total_len
    )
    d_n = naive_delta(filtration, low, mid)
    d_next = naive_delta(filtration, mid, up)
    composite = d_next @ d_n
    lower_layout = chain_layout(filtration, low)
    upper_layout = chain_layout(filtration, up)
    witness = None
    if not composite.is_zero():
        witness = _first_witness(composite, lower_layout, upper_layout)
    return NaiveObstruction(
        degree=n,
        is_zero=witness is None,
        witness=witness,
        composite=composite,
        lower=lower_layout,
        mid=chain_layout(filtration, mid),
        upper=upper_layout,
        truncated=truncated,
        bound=bound,
    )


def _first_witness(composite: RatMatrix, lower: BlockLayout,
                   upper: BlockLayout) -> NaiveWitness:
    for j in range(composite.cols):
        column = composite.column(j)
        if all(not x for x in column):
            continue
        pos, atom = _locate(lower, j)
        for key, space, off in zip(upper.keys, upper.spaces, upper.offsets):
            dim = len(space.support_indices)
            block = column[off : off + dim]
            if any(block):
                value = L1Class.from_support_vector(space, block)
                return NaiveWitness(pos, atom, key, value)
    raise AssertionError("nonzero composite without a locatable witness")


def _locate(layout: BlockLayout, flat_index: int):
    for key, space, off in zip(layout.keys, layout.spaces, layout.offsets):
        dim = len(space.support_indices)
        if off <= flat_index < off + dim:
            atom = space.atoms[space.support_indices[flat_index - off]]
            return key, atom
    raise IndexError(flat_index)
