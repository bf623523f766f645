import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bloat_lens.errors import DuplicateDeclaration, MissingArtifact
from bloat_lens.model import GA, Coordinate, Declaration, Scope
from bloat_lens.resolver import Registry, propagated_scope, resolve_tree

from helpers import brute_resolve, is_acyclic, random_registry, seeded

ROOT = Coordinate("p", "p", "1")


def d(name, version="1", scope="compile"):
    return Declaration(GA("g", name), version, Scope(scope))


def c(name, version="1"):
    return Coordinate("g", name, version)


def test_three_direct_three_transitive():
    registry = Registry(
        {
            c("d1"): [d("d4"), d("d5")],
            c("d2"): [],
            c("d3"): [d("d6")],
            c("d4"): [],
            c("d5"): [],
            c("d6"): [],
        }
    )
    tree = resolve_tree(ROOT, [d("d1"), d("d2"), d("d3")], registry)
    assert tree.direct == {c("d1"), c("d2"), c("d3")}
    assert tree.transitive == {c("d4"), c("d5"), c("d6")}
    assert tree.get(GA("g", "d6")).parent == GA("g", "d3")


def test_nearest_declaration_wins():
    registry = Registry({c("A", "1.0"): [], c("B", "1.0"): [d("A", "2.0")], c("A", "2.0"): []})
    tree = resolve_tree(ROOT, [d("A", "1.0"), d("B", "1.0")], registry)
    assert tree.nodes == {ROOT, c("A", "1.0"), c("B", "1.0")}
    assert tree.direct == {c("A", "1.0"), c("B", "1.0")}


def test_equal_depth_first_declaration_wins():
    registry = Registry(
        {c("x"): [d("t", "1")], c("y"): [d("t", "2")], c("t", "1"): [], c("t", "2"): []}
    )
    tree = resolve_tree(ROOT, [d("x"), d("y")], registry)
    assert tree.get(GA("g", "t")).coordinate == c("t", "1")
    tree = resolve_tree(ROOT, [d("y"), d("x")], registry)
    assert tree.get(GA("g", "t")).coordinate == c("t", "2")


def test_empty_manifest():
    tree = resolve_tree(ROOT, [], Registry())
    assert tree.nodes == {ROOT}
    assert not tree.direct and not tree.transitive


def test_test_scope_not_transitive():
    registry = Registry({c("a"): [d("junit", scope="test"), d("b")], c("b"): []})
    tree = resolve_tree(ROOT, [d("a")], registry)
    assert GA("g", "junit") not in tree
    assert GA("g", "b") in tree


def test_test_scope_direct_is_expanded_as_test():
    registry = Registry({c("junit"): [d("hamcrest")], c("hamcrest"): []})
    tree = resolve_tree(ROOT, [d("junit", scope="test")], registry)
    assert tree.get(GA("g", "hamcrest")).scope == Scope("test")


def test_cycle_is_cut():
    registry = Registry({c("a"): [d("b")], c("b"): [d("a", "2")], c("a", "2"): []})
    tree = resolve_tree(ROOT, [d("a")], registry)
    assert [str(x.coordinate) for x in tree] == ["g:a:1", "g:b:1"]


def test_dependency_on_root_is_ignored():
    registry = Registry({c("a"): [Declaration(GA("p", "p"), "0")]})
    tree = resolve_tree(ROOT, [d("a")], registry)
    assert len(tree) == 1


def test_missing_artifact():
    with pytest.raises(MissingArtifact) as exc:
        resolve_tree(ROOT, [d("a")], Registry({c("a"): [d("ghost")]}))
    assert exc.value.coordinate == c("ghost")


def test_duplicate_declaration():
    with pytest.raises(DuplicateDeclaration):
        resolve_tree(ROOT, [d("a", "1"), d("a", "2")], Registry({c("a"): []}))


@pytest.mark.parametrize(
    "parent, child, expected",
    [
        ("compile", "compile", "compile"),
        ("compile", "runtime", "runtime"),
        ("test", "compile", "test"),
        ("runtime", "compile", "runtime"),
        ("provided", "runtime", "provided"),
        ("test", "provided", "provided"),
    ],
)
def test_propagated_scope(parent, child, expected):
    assert propagated_scope(Scope(parent), Scope(child)) == Scope(expected)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_brute_force(seed):
    root, manifest, registry = random_registry(seeded(seed))
    tree = resolve_tree(root, manifest, registry)
    got = [(x.coordinate, x.scope.label, x.depth, x.parent) for x in tree]
    assert got == brute_resolve(root, manifest, registry)
    assert is_acyclic(tree)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_deterministic(seed):
    root, manifest, registry = random_registry(seeded(seed))
    a = resolve_tree(root, manifest, registry)
    b = resolve_tree(root, manifest, registry)
    assert a == b and repr(a) == repr(b)
