"""The gauged cochain complex of a parametrized simplex: coboundaries,
exact verification of the cochain condition, transport cohomology, and
the cocycle-consistency checks.

Degree-n cochains assign to each weakly monotone index map [n] -> [k] a
class on the gauged space at the image of 0.  Coordinates are always
support coordinates of the gauge measures, so operator identities hold as
literal matrix equalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Union

from .exactlinalg import (
    RatMatrix,
    ZERO,
    add_block,
    cohomology_dim,
    grid_matrix,
    kernel_basis,
    rank,
    zeros_grid,
)
from .finprob import BlockLayout, L1Class, apply_operator
from .gauge import GaugeChain, transport
from .nerve import MonotoneMap, enumerate_monotone, face


@dataclass(frozen=True)
class SigmaCochain:
    """Cochain of one degree: one class per index map, in index order."""

    degree: int
    values: tuple


@dataclass(frozen=True)
class CohomologyData:
    degree: int
    cocycle_dim: int
    coboundary_dim: int
    cohomology_dim: int
    cocycle_basis: Optional[tuple]


@dataclass(frozen=True)
class CocycleIdentityReport:
    theta: MonotoneMap
    left: L1Class
    right: L1Class
    holds: bool


@dataclass(frozen=True)
class PathDecompositionReport:
    theta: MonotoneMap
    is_cocycle: bool
    noncocycle_theta: Optional[MonotoneMap]
    left: Optional[L1Class]
    right: Optional[L1Class]
    holds: Optional[bool]


class SigmaComplex:
    """Cochain complex along a gauged simplex, built up to a top degree.

    Coboundary matrices are kept blockwise (identity blocks are implicit),
    with dense matrices materialized on demand for rank and kernel
    computations.  Construction verifies that consecutive coboundaries
    compose to zero, exactly, and fails loudly otherwise: the gauge makes
    that a theorem, so a failure indicates an implementation bug.
    """

    def __init__(self, gauge: GaugeChain, max_degree: int):
        if max_degree < 1:
            raise ValueError("max_degree must be >= 1")
        self.gauge = gauge
        self.max_degree = max_degree
        k = gauge.k
        self.index_sets = [tuple(enumerate_monotone(n, k))
                           for n in range(max_degree + 1)]
        self.layouts = [
            BlockLayout.build(
                thetas, [gauge.gauged[theta(0)] for theta in thetas]
            )
            for thetas in self.index_sets
        ]
        self._transport_blocks = {}
        self._entries = [None]  # per degree >= 1: rows of (col, sign, op)
        for n in range(1, max_degree + 1):
            self._entries.append(self._build_entries(n))
        self._dense = {}
        for n in range(1, max_degree):
            self._verify_square_zero(n)
        self.delta_squared_is_zero = True

    # -- construction -----------------------------------------------------

    def _restricted_transport(self, a: int, b: int) -> Optional[RatMatrix]:
        """Transport between support coordinates; None encodes identity."""
        key = (a, b)
        if key not in self._transport_blocks:
            if a == b:
                self._transport_blocks[key] = None
            else:
                full = transport(self.gauge, a, b)
                block = full.submatrix(
                    self.gauge.gauged[a].support_indices,
                    self.gauge.gauged[b].support_indices,
                )
                if (block.rows == block.cols
                        and block == RatMatrix.identity(block.rows)):
                    block = None
                self._transport_blocks[key] = block
        return self._transport_blocks[key]

    def _build_entries(self, n: int) -> list:
        lower_index = self.layouts[n - 1]
        rows = []
        for theta in self.index_sets[n]:
            entries = []
            for ell in range(n + 1):
                col = lower_index.position(face(theta, ell))
                sign = 1 if ell % 2 == 0 else -1
                op = self._restricted_transport(theta(0), theta(1)) if ell == 0 else None
                entries.append((col, sign, op))
            rows.append(tuple(entries))
        return rows

    def _verify_square_zero(self, n: int):
        """Blockwise check that the degree n+1 coboundary annihilates the
        degree n one; identity blocks are tracked by integer coefficient."""
        upper_rows = self._entries[n + 1]
        mid_rows = self._entries[n]
        for row_entries in upper_rows:
            acc = {}
            for mid_idx, sign1, op1 in row_entries:
                for col_idx, sign2, op2 in mid_rows[mid_idx]:
                    sign = sign1 * sign2
                    if op1 is None and op2 is None:
                        prod = None
                    elif op1 is None:
                        prod = op2
                    elif op2 is None:
                        prod = op1
                    else:
                        prod = op1 @ op2
                    slot = acc.setdefault(col_idx, [0, None])
                    if prod is None:
                        slot[0] += sign
                    else:
                        if slot[1] is None:
                            slot[1] = zeros_grid(prod.rows, prod.cols)
                        add_block(slot[1], 0, 0, prod, sign)
            for coeff, grid in acc.values():
                if grid is None:
                    if coeff:
                        raise RuntimeError(
                            "cochain condition failed: composite coboundary "
                            "is a nonzero multiple of the identity"
                        )
                    continue
                for i, row in enumerate(grid):
                    for j, x in enumerate(row):
                        total = x + coeff if i == j else x
                        if total:
                            raise RuntimeError(
                                "cochain condition failed: composite "
                                "coboundary has a nonzero entry"
                            )

    def verify_cochain_condition(self) -> bool:
        """Re-run the exact square-zero check for every built degree."""
        for n in range(1, self.max_degree):
            self._verify_square_zero(n)
        return True

    # -- matrices and application ------------------------------------------

    def dim(self, n: int) -> int:
        return self.layouts[n].total

    def block_dims(self, n: int) -> tuple:
        layout = self.layouts[n]
        return tuple(len(sp.support_indices) for sp in layout.spaces)

    def delta_matrix(self, n: int) -> RatMatrix:
        """Dense coboundary into degree n; degree 0 receives the zero map
        from the zero space (the augmentation-free convention)."""
        if not 0 <= n <= self.max_degree:
            raise ValueError(f"degree {n} outside built range 0..{self.max_degree}")
        if n == 0:
            return RatMatrix.zeros(self.dim(0), 0)
        if n not in self._dense:
            upper = self.layouts[n]
            lower = self.layouts[n - 1]
            grid = zeros_grid(upper.total, lower.total)
            for r, row_entries in enumerate(self._entries[n]):
                row_off = upper.offsets[r]
                row_dim = len(upper.spaces[r].support_indices)
                for col_idx, sign, op in row_entries:
                    block = op if op is not None else RatMatrix.identity(row_dim)
                    add_block(grid, row_off, lower.offsets[col_idx], block, sign)
            self._dense[n] = grid_matrix(grid, lower.total)
        return self._dense[n]

    def zero_cochain(self, n: int) -> SigmaCochain:
        return SigmaCochain(n, tuple(
            L1Class.zero(sp) for sp in self.layouts[n].spaces
        ))

    def cochain(self, n: int,
                values: Union[Mapping, Callable[[MonotoneMap], L1Class]]) -> SigmaCochain:
        """Build a degree-n cochain from a mapping or callable on index maps."""
        out = []
        for theta, sp in zip(self.index_sets[n], self.layouts[n].spaces):
            f = values[theta] if isinstance(values, Mapping) else values(theta)
            if f.space != sp:
                raise ValueError(f"class at {theta} lives on the wrong space")
            out.append(f)
        return SigmaCochain(n, tuple(out))

    def cochain_from_vector(self, n: int, vec: Sequence) -> SigmaCochain:
        unpacked = self.layouts[n].unpack(vec)
        return SigmaCochain(n, tuple(
            unpacked[theta] for theta in self.index_sets[n]
        ))

    def cochain_value(self, c: SigmaCochain, theta: MonotoneMap) -> L1Class:
        return c.values[self.layouts[c.degree].position(theta)]

    def apply_delta(self, c: SigmaCochain) -> SigmaCochain:
        """Apply the coboundary blockwise (independent of the dense form)."""
        n = c.degree + 1
        if n > self.max_degree:
            raise ValueError(f"degree {n} coboundary was not built")
        if len(c.values) != len(self.index_sets[c.degree]):
            raise ValueError("cochain has the wrong number of components")
        out = []
        for row_entries, sp in zip(self._entries[n], self.layouts[n].spaces):
            dim = len(sp.support_indices)
            acc = [ZERO] * dim
            for col_idx, sign, op in row_entries:
                vec = c.values[col_idx].support_vector()
                if op is not None:
                    vec = op.apply(vec)
                if sign > 0:
                    acc = [a + v for a, v in zip(acc, vec)]
                else:
                    acc = [a - v for a, v in zip(acc, vec)]
            out.append(L1Class.from_support_vector(sp, acc))
        return SigmaCochain(n, tuple(out))

    # -- cohomology ---------------------------------------------------------

    def cohomology(self, n: int, with_basis: bool = False) -> CohomologyData:
        """Cocycles via the kernel of the outgoing coboundary, coboundaries
        via the rank of the incoming one."""
        if n < 0 or n + 1 > self.max_degree:
            raise ValueError(
                f"cohomology in degree {n} needs coboundaries up to degree "
                f"{n + 1}; built up to {self.max_degree}"
            )
        d_out = self.delta_matrix(n + 1)
        d_in = self.delta_matrix(n)
        kernel = kernel_basis(d_out)
        z_dim = len(kernel)
        b_dim = rank(d_in)
        h_dim = cohomology_dim(d_in, d_out)
        if h_dim != z_dim - b_dim:
            raise RuntimeError("inconsistent cohomology dimensions")
        basis = None
        if with_basis:
            basis = tuple(self.cochain_from_vector(n, vec) for vec in kernel)
        return CohomologyData(n, z_dim, b_dim, h_dim, basis)

    # -- cocycle consistency --------------------------------------------------

    def check_cocycle_identity(self, a: SigmaCochain,
                               theta: MonotoneMap) -> CocycleIdentityReport:
        """Evaluate both sides of the degree-1 cocycle identity at one
        index map [2] -> [k]; the two sides agree for every such map
        exactly when the degree-2 coboundary annihilates the cochain."""
        if a.degree != 1:
            raise ValueError("expected a degree-1 cochain")
        if theta.n != 2 or theta.k != self.gauge.k:
            raise ValueError("expected an index map [2] -> [k]")
        a01 = self.cochain_value(a, face(theta, 2))
        a12 = self.cochain_value(a, face(theta, 0))
        a02 = self.cochain_value(a, face(theta, 1))
        target = self.gauge.gauged[theta(0)]
        moved = apply_operator(
            transport(self.gauge, theta(0), theta(1)), a12, target
        )
        right = moved + a01
        return CocycleIdentityReport(theta, a02, right, a02 == right)

    def _edge(self, p: int, q: int) -> MonotoneMap:
        return MonotoneMap(1, self.gauge.k, (p, q))

    def find_noncocycle_witness(self, a: SigmaCochain) -> Optional[MonotoneMap]:
        """First degree-2 index map where the coboundary of ``a`` is nonzero."""
        image = self.apply_delta(a)
        for theta, value in zip(self.index_sets[2], image.values):
            if not value.is_zero():
                return theta
        return None

    def check_path_decomposition(self, a: SigmaCochain,
                                 theta: MonotoneMap) -> PathDecompositionReport:
        """Check that a cocycle's value on a long edge is the transported
        sum of its values on the consecutive edges of a strictly
        increasing index map.

        The decomposition is an iterated cocycle identity, so a cochain
        that is not a cocycle is reported (with a witness index map)
        rather than silently decomposed.
        """
        if a.degree != 1:
            raise ValueError("expected a degree-1 cochain")
        if theta.k != self.gauge.k:
            raise ValueError("index map has the wrong codomain")
        for u, v in zip(theta.values, theta.values[1:]):
            if u >= v:
                raise ValueError("index map must be strictly increasing")
        if self.max_degree < 2:
            raise ValueError("cocycle checking needs the degree-2 coboundary")
        witness = self.find_noncocycle_witness(a)
        if witness is not None:
            return PathDecompositionReport(theta, False, witness,
                                           None, None, None)
        m = theta.n
        base = theta(0)
        target = self.gauge.gauged[base]
        left = self.cochain_value(a, self._edge(base, theta(m)))
        total = L1Class.zero(target)
        for ell in range(m):
            piece = self.cochain_value(a, self._edge(theta(ell), theta(ell + 1)))
            moved = apply_operator(
                transport(self.gauge, base, theta(ell)), piece, target
            )
            total = total + moved
        return PathDecompositionReport(theta, True, None, left, total,
                                       left == total)


def build_complex(gauge: GaugeChain, max_degree: int) -> SigmaComplex:
    """Construct the gauged cochain complex up to ``max_degree`` and verify
    the cochain condition exactly."""
    return SigmaComplex(gauge, max_degree)
