import pytest

from fh.exactlinalg import rat
from fh.finprob import L1Class
from fh.gauge import build_gauge
from fh.nerve import MonotoneMap, ParamSimplex, enumerate_monotone
from fh.randgen import random_chain
from fh.sigmacomplex import build_complex
from fh.specfile import load

from conftest import example_path


def load_complex(name, arrows, max_degree):
    filtration = load(example_path(name))[1]
    sigma = ParamSimplex.from_arrow_names(filtration.presentation, list(arrows))
    gauge = build_gauge(filtration, sigma)
    return build_complex(gauge, max_degree)


@pytest.fixture
def chain_complex():
    return load_complex("identity_chain.json", ("i1", "i2"), 3)


@pytest.fixture
def cycle_complex():
    return load_complex("collapsing_cycle.json", ("i1", "i2", "i3"), 2)


def slope_cochain(sc, values=(0, 1, 2)):
    """Degree-1 cochain with value m[q] - m[p] on the index map (p, q)."""
    def builder(theta):
        space = sc.gauge.gauged[theta(0)]
        return L1Class.constant(space, values[theta(1)] - values[theta(0)])

    return sc.cochain(1, builder)


def test_block_dims_identity_chain(chain_complex):
    sc = chain_complex
    assert sc.dim(0) == 6
    assert sc.dim(1) == 12
    assert sc.dim(2) == 20
    assert sc.block_dims(2) == (2,) * 10


def test_block_dims_collapsing_cycle(cycle_complex):
    assert cycle_complex.block_dims(0) == (1, 1, 2, 2)
    assert cycle_complex.dim(0) == 6


def test_identity_transport_coboundary_is_difference(chain_complex):
    sc = chain_complex
    c = sc.cochain(0, lambda theta: L1Class.constant(
        sc.gauge.gauged[theta(0)], theta(0) * 10))
    image = sc.apply_delta(c)
    for theta, value in zip(sc.index_sets[1], image.values):
        expected = L1Class.constant(
            sc.gauge.gauged[theta(0)], theta(1) * 10 - theta(0) * 10)
        assert value == expected


def test_delta_squared_verified_on_build(chain_complex, cycle_complex):
    assert chain_complex.delta_squared_is_zero
    assert cycle_complex.delta_squared_is_zero
    assert chain_complex.verify_cochain_condition()


def test_delta_squared_matrix_product(chain_complex):
    for n in range(1, chain_complex.max_degree):
        product = chain_complex.delta_matrix(n + 1) @ chain_complex.delta_matrix(n)
        assert product.is_zero()


def test_coboundaries_are_cocycles_vectorwise(rng):
    for _ in range(10):
        filtration, sigma = random_chain(rng, rng.randint(1, 4), max_atoms=4)
        sc = build_complex(build_gauge(filtration, sigma), 3)
        for degree in (0, 1):
            values = []
            for sp in sc.layouts[degree].spaces:
                values.append(L1Class(
                    sp, tuple(rat(rng.randint(-3, 3)) for _ in sp.atoms)))
            c = sc.cochain(degree, dict(zip(sc.index_sets[degree], values)))
            image = sc.apply_delta(sc.apply_delta(c))
            assert all(v.is_zero() for v in image.values)


def test_cohomology_identity_chain(chain_complex):
    dims = [chain_complex.cohomology(n).cohomology_dim for n in range(3)]
    assert dims == [2, 0, 0]


def test_cohomology_collapsing_cycle(cycle_complex):
    data = cycle_complex.cohomology(0)
    assert data.cohomology_dim == 2
    assert data.coboundary_dim == 0


def test_cohomology_vertex_simplex():
    filtration = load(example_path("collapsing_cycle.json"))[1]
    gauge = build_gauge(filtration, ParamSimplex.vertex("t0"))
    sc = build_complex(gauge, 1)
    assert sc.cohomology(0).cohomology_dim == 2  # support size at t0


def test_cohomology_range_checks(chain_complex):
    with pytest.raises(ValueError):
        chain_complex.cohomology(3)
    with pytest.raises(ValueError):
        build_complex(chain_complex.gauge, 0)


def test_cohomology_basis_members_are_cocycles(cycle_complex):
    data = cycle_complex.cohomology(0, with_basis=True)
    assert len(data.cocycle_basis) == data.cocycle_dim
    for cochain in data.cocycle_basis:
        image = cycle_complex.apply_delta(cochain)
        assert all(v.is_zero() for v in image.values)


def test_slope_cochain_is_cocycle(chain_complex):
    a = slope_cochain(chain_complex)
    image = chain_complex.apply_delta(a)
    assert len(image.values) == 10
    assert all(v.is_zero() for v in image.values)


def test_cocycle_identity_on_slope(chain_complex):
    sc = chain_complex
    a = slope_cochain(sc)
    report = sc.check_cocycle_identity(a, MonotoneMap(2, 2, (0, 1, 2)))
    assert report.holds
    assert report.left.values == (rat(2), rat(2))
    assert report.right.values == (rat(2), rat(2))

    degenerate = sc.check_cocycle_identity(a, MonotoneMap(2, 2, (0, 0, 2)))
    assert degenerate.holds
    assert degenerate.left.values == (rat(2), rat(2))


def test_cocycle_identity_zero_cochain(cycle_complex):
    zero = cycle_complex.zero_cochain(1)
    for theta in enumerate_monotone(2, cycle_complex.gauge.k):
        report = cycle_complex.check_cocycle_identity(zero, theta)
        assert report.holds
        assert report.left.is_zero()


def test_cocycle_identity_for_kernel_basis(cycle_complex):
    data = cycle_complex.cohomology(1, with_basis=True)
    for cochain in data.cocycle_basis:
        for theta in enumerate_monotone(2, cycle_complex.gauge.k):
            assert cycle_complex.check_cocycle_identity(cochain, theta).holds


def test_path_decomposition_slope(chain_complex):
    sc = chain_complex
    a = slope_cochain(sc)
    report = sc.check_path_decomposition(a, MonotoneMap(2, 2, (0, 1, 2)))
    assert report.is_cocycle and report.holds
    assert report.left.values == (rat(2), rat(2))

    single = sc.check_path_decomposition(a, MonotoneMap(1, 2, (0, 2)))
    assert single.holds  # one segment: both sides are the same value


def test_path_decomposition_on_cycle_cocycle(cycle_complex):
    data = cycle_complex.cohomology(1, with_basis=True)
    theta = MonotoneMap(2, 3, (0, 2, 3))
    for cochain in data.cocycle_basis:
        report = cycle_complex.check_path_decomposition(cochain, theta)
        assert report.is_cocycle and report.holds


def test_path_decomposition_rejects_non_cocycle(cycle_complex):
    sc = cycle_complex
    values = {}
    for theta, sp in zip(sc.index_sets[1], sc.layouts[1].spaces):
        values[theta] = L1Class.constant(sp, 1 if theta.values == (0, 1) else 0)
    a = sc.cochain(1, values)
    report = sc.check_path_decomposition(a, MonotoneMap(2, 3, (0, 2, 3)))
    assert not report.is_cocycle
    assert report.noncocycle_theta is not None
    assert report.holds is None


def test_path_decomposition_requires_strict_increase(chain_complex):
    a = slope_cochain(chain_complex)
    with pytest.raises(ValueError, match="strictly increasing"):
        chain_complex.check_path_decomposition(a, MonotoneMap(2, 2, (0, 0, 2)))


def test_verifier_detects_corrupted_blocks(cycle_complex):
    """The square-zero check fails loudly when a block is wrong; a failure
    on honest input would indicate an implementation bug."""
    sc = cycle_complex
    rows = sc._entries[2]
    tampered = False
    for r, theta in enumerate(sc.index_sets[2]):
        strictly_increasing = all(
            u < v for u, v in zip(theta.values, theta.values[1:])
        )
        col, sign, op = rows[r][0]
        if strictly_increasing and op is not None:
            rows[r] = ((col, sign, op.scale(2)),) + rows[r][1:]
            tampered = True
            break
    assert tampered
    with pytest.raises(RuntimeError, match="cochain condition"):
        sc.verify_cochain_condition()


def test_identity_transport_cohomology_vanishes(rng):
    """With all transports identity the complex is contractible above
    degree 0, and degree 0 carries the common support dimension."""
    filtration = load(example_path("identity_chain.json"))[1]
    for arrows in (("i1",), ("i1", "i2")):
        sigma = ParamSimplex.from_arrow_names(filtration.presentation, list(arrows))
        sc = build_complex(build_gauge(filtration, sigma), 3)
        assert sc.cohomology(0).cohomology_dim == 2
        for n in range(1, 3):
            assert sc.cohomology(n).cohomology_dim == 0


def test_identity_transport_cohomology_counts_support():
    """A null atom shared along an identity-map chain drops out of the
    degree-0 cohomology; checked on a length-3 chain."""
    from fh.category import Generator, Quiver
    from fh.filtration import Filtration
    from fh.finprob import FiniteProbSpace, ProbMap

    space = FiniteProbSpace(("a", "b", "c"), ("1/2", "1/2", "0/1"))
    objects = ("t0", "t1", "t2", "t3")
    quiver = Quiver(objects, tuple(
        Generator(f"g{i}", objects[i - 1], objects[i]) for i in range(1, 4)
    ))
    filtration = Filtration(
        quiver,
        {o: space for o in objects},
        {f"g{i}": ProbMap.identity(space) for i in range(1, 4)},
    )
    sigma = ParamSimplex.from_arrow_names(quiver, ["g1", "g2", "g3"])
    sc = build_complex(build_gauge(filtration, sigma), 3)
    assert sc.cohomology(0).cohomology_dim == 2
    assert sc.cohomology(1).cohomology_dim == 0
    assert sc.cohomology(2).cohomology_dim == 0
