import pytest

from fh.exactlinalg import ONE, RatMatrix, ZERO, rat
from fh.filtration import Filtration
from fh.finprob import (
    FiniteProbSpace,
    L1Class,
    MeasureRelation,
    ProbMap,
    pushforward,
    radon_nikodym,
)
from fh.gauge import build_gauge, gauge_distortion, transport
from fh.nerve import ParamSimplex
from fh.randgen import random_chain
from fh.specfile import load

from conftest import example_path


def load_with_sigma(name, arrows=("i1", "i2", "i3")):
    filtration = load(example_path(name))[1]
    sigma = ParamSimplex.from_arrow_names(filtration.presentation, list(arrows))
    return filtration, sigma


def weights(space):
    return tuple(str(w) for w in space.weights)


def test_gauge_collapsing_cycle():
    filtration, sigma = load_with_sigma("collapsing_cycle.json")
    gauge = build_gauge(filtration, sigma)
    assert weights(gauge.gauged[0]) == ("0", "1")
    assert weights(gauge.gauged[1]) == ("1",)
    assert weights(gauge.gauged[2]) == ("1/2", "1/2")
    assert weights(gauge.gauged[3]) == ("1/2", "1/2")


def test_gauge_identity_chain():
    filtration, sigma = load_with_sigma("identity_chain.json", ("i1", "i2"))
    gauge = build_gauge(filtration, sigma)
    for sp in gauge.gauged:
        assert weights(sp) == ("1/2", "1/2")


def test_gauge_distorted_cycle_unmodified():
    filtration, sigma = load_with_sigma("distorted_cycle.json")
    gauge = build_gauge(filtration, sigma)
    for sp in gauge.gauged:
        assert weights(sp) == ("1/2", "1/2")


def test_gauge_invariants_randomized(rng):
    for _ in range(30):
        filtration, sigma = random_chain(rng, rng.randint(1, 5), max_atoms=5)
        gauge = build_gauge(filtration, sigma)
        k = gauge.k
        assert gauge.gauged[k] == filtration.space(sigma.objects[k])
        for ell in range(k):
            phi = filtration.map_of_path(sigma.arrows[ell])
            # recursion and measure-preservation of the gauged arrow
            assert pushforward(gauge.gauged[ell + 1], phi) == gauge.gauged[ell]
            # gauged density is the constant-1 class
            d = radon_nikodym(pushforward(gauge.gauged[ell + 1], phi),
                              gauge.gauged[ell])
            assert d == L1Class.constant(gauge.gauged[ell], 1)
        for ell in range(k + 1):
            rel = gauge_distortion(gauge)[ell].relation
            assert rel in (MeasureRelation.EQUAL, MeasureRelation.EQUIVALENT,
                           MeasureRelation.LEFT_AC)


def test_transport_identity_at_equal_positions():
    filtration, sigma = load_with_sigma("collapsing_cycle.json")
    gauge = build_gauge(filtration, sigma)
    for ell in range(4):
        assert transport(gauge, ell, ell) == RatMatrix.identity(
            len(gauge.gauged[ell].atoms)
        )


def test_transport_identity_chain_all_identity():
    filtration, sigma = load_with_sigma("identity_chain.json", ("i1", "i2"))
    gauge = build_gauge(filtration, sigma)
    for a in range(3):
        for b in range(a, 3):
            assert transport(gauge, a, b) == RatMatrix.identity(2)


def test_transport_collapsing_full_loop():
    filtration, sigma = load_with_sigma("collapsing_cycle.json")
    gauge = build_gauge(filtration, sigma)
    t03 = transport(gauge, 0, 3)
    assert t03 == RatMatrix.from_rows([[0, 0], ["1/2", "1/2"]])
    f = L1Class(gauge.gauged[3], (rat(3), rat(5)))
    out = t03.apply(f.values)
    assert out == (ZERO, rat(4))


def test_transport_out_of_range():
    filtration, sigma = load_with_sigma("identity_chain.json", ("i1", "i2"))
    gauge = build_gauge(filtration, sigma)
    with pytest.raises(ValueError):
        transport(gauge, 2, 1)
    with pytest.raises(ValueError):
        transport(gauge, 0, 3)


def test_transport_functoriality_randomized(rng):
    for _ in range(20):
        filtration, sigma = random_chain(rng, rng.randint(1, 6), max_atoms=4)
        gauge = build_gauge(filtration, sigma)
        k = gauge.k
        for a in range(k + 1):
            for b in range(a, k + 1):
                for c in range(b, k + 1):
                    assert (transport(gauge, a, b) @ transport(gauge, b, c)
                            == transport(gauge, a, c))


def test_transport_preserves_gauged_mass(rng):
    for _ in range(20):
        filtration, sigma = random_chain(rng, rng.randint(1, 4), max_atoms=4)
        gauge = build_gauge(filtration, sigma)
        k = gauge.k
        f = L1Class(gauge.gauged[k],
                    tuple(rat(rng.randint(-3, 3)) for _ in gauge.gauged[k].atoms))
        out = L1Class(gauge.gauged[0], transport(gauge, 0, k).apply(f.values))
        assert out.integral() == f.integral()


def test_gauge_distortion_reports():
    filtration, sigma = load_with_sigma("distorted_cycle.json")
    gauge = build_gauge(filtration, sigma)
    reports = gauge_distortion(gauge)
    assert reports[1].relation is MeasureRelation.EQUIVALENT
    assert reports[1].derivative.values == (rat("3/2"), rat("3/4"))

    filtration, sigma = load_with_sigma("identity_chain.json", ("i1", "i2"))
    for report in gauge_distortion(build_gauge(filtration, sigma)):
        assert report.relation is MeasureRelation.EQUAL
        assert report.derivative.values == (ONE, ONE)

    filtration, sigma = load_with_sigma("collapsing_cycle.json")
    reports = gauge_distortion(build_gauge(filtration, sigma))
    assert reports[0].relation is MeasureRelation.LEFT_AC
    assert reports[0].derivative.values == (ZERO, rat(2))


def test_build_gauge_rejects_invalid_filtration():
    coin = FiniteProbSpace(("0", "1"), ("1/2", "1/2"))
    delta1_space = FiniteProbSpace(("0", "1"), (ZERO, ONE))
    from fh.category import Generator, Quiver

    quiver = Quiver(("s", "t"), (Generator("g", "s", "t"),))
    bad = Filtration(
        quiver,
        {"s": delta1_space, "t": coin},
        {"g": ProbMap.from_dict(coin, delta1_space, {"0": "0", "1": "0"})},
    )
    sigma = ParamSimplex.from_arrow_names(quiver, ["g"])
    with pytest.raises(ValueError, match="absolutely continuous"):
        build_gauge(bad, sigma)
