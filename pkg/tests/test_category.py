import pytest

from fh.category import (
    ArrowDecl,
    CompositionError,
    FinCategory,
    Generator,
    Quiver,
    arrow_path,
    compose,
    dag_table_closure,
    enumerate_arrows,
    identity_path,
    path_from_names,
    validate_table,
)
from fh.randgen import random_chain


def cycle_quiver():
    return Quiver(
        ("t0", "t1", "t2"),
        (Generator("i1", "t0", "t1"),
         Generator("i2", "t1", "t2"),
         Generator("i3", "t2", "t0")),
    )


def linear_quiver():
    return Quiver(
        ("t0", "t1", "t2"),
        (Generator("i1", "t0", "t1"), Generator("i2", "t1", "t2")),
    )


def two_object_category():
    return FinCategory(
        ("t0", "t1"),
        (ArrowDecl("i1", "t0", "t1"),),
        (),
    )


def test_quiver_validation():
    with pytest.raises(ValueError, match="unknown objects"):
        Quiver(("a",), (Generator("g", "a", "b"),))
    with pytest.raises(ValueError, match="distinct"):
        Quiver(("a",), (Generator("g", "a", "a"), Generator("g", "a", "a")))


def test_enumerate_cycle_quiver():
    q = cycle_quiver()
    assert len(enumerate_arrows(q, 0)) == 3
    paths = enumerate_arrows(q, 3)
    assert len(paths) == 12
    by_len = {}
    for p in paths:
        by_len.setdefault(p.length, []).append(p)
    assert {k: len(v) for k, v in by_len.items()} == {0: 3, 1: 3, 2: 3, 3: 3}


def test_enumerate_linear_quiver():
    paths = enumerate_arrows(linear_quiver(), 2)
    assert len(paths) == 6  # 3 identities + 2 generators + 1 composite
    assert sum(1 for p in paths if p.length == 2) == 1


def test_enumerate_no_duplicates_prefix_closed(rng):
    q = cycle_quiver()
    paths = enumerate_arrows(q, 4)
    keys = {(p.src, p.names) for p in paths}
    assert len(keys) == len(paths)
    for p in paths:
        if p.names:
            prefix = (p.src, p.names[:-1])
            assert prefix in keys


def test_free_compose_is_concatenation():
    q = cycle_quiver()
    p1 = arrow_path(q, "i1")
    p2 = arrow_path(q, "i2")
    assert compose(p1, p2).names == ("i1", "i2")
    assert compose(identity_path(q, "t0"), p1) == p1
    assert compose(p1, identity_path(q, "t1")) == p1
    with pytest.raises(CompositionError):
        compose(p1, arrow_path(q, "i3"))


def test_free_compose_associative():
    q = cycle_quiver()
    a, b, c = (arrow_path(q, n) for n in ("i1", "i2", "i3"))
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_table_compose_identity_lookup():
    c = two_object_category()
    i1 = arrow_path(c, "i1")
    composed = compose(i1, identity_path(c, "t1"))
    assert composed == i1
    assert path_from_names(c, ["id_t0", "i1", "id_t1"]) == i1


def test_validate_two_object_table():
    report = validate_table(two_object_category())
    assert report.ok
    assert report.issues == ()


def test_validate_missing_composite():
    c = FinCategory(
        ("a", "b", "c"),
        (ArrowDecl("f", "a", "b"), ArrowDecl("g", "b", "c")),
        (),
    )
    report = validate_table(c)
    assert not report.ok
    assert any("missing composite" in issue and "f" in issue and "g" in issue
               for issue in report.issues)


def test_validate_associativity_violation():
    c = FinCategory(
        ("u", "v", "w", "x"),
        (
            ArrowDecl("a", "u", "v"),
            ArrowDecl("b", "v", "w"),
            ArrowDecl("c", "w", "x"),
            ArrowDecl("ba", "u", "w"),
            ArrowDecl("cb", "v", "x"),
            ArrowDecl("p", "u", "x"),
            ArrowDecl("q", "u", "x"),
        ),
        (
            ("a", "b", "ba"),
            ("b", "c", "cb"),
            ("a", "cb", "p"),
            ("ba", "c", "q"),
        ),
    )
    report = validate_table(c)
    assert any("associativity" in issue for issue in report.issues)


def test_dag_table_closure_linear():
    cat = dag_table_closure(linear_quiver())
    assert set(cat.arrow_names) == {"id_t0", "id_t1", "id_t2", "i1", "i2", "i2*i1"}
    assert cat.compose_pair("i1", "i2") == "i2*i1"
    assert validate_table(cat).ok


def test_dag_table_closure_rejects_cycles():
    with pytest.raises(ValueError, match="cycle"):
        dag_table_closure(cycle_quiver())


def test_dag_closure_of_random_chains_validates(rng):
    for _ in range(10):
        filtration, _sigma = random_chain(rng, rng.randint(1, 4), max_atoms=3)
        cat = dag_table_closure(filtration.presentation)
        assert validate_table(cat).ok
