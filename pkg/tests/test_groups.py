import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratedhomotopy.chains import AbelianGroup, IntMatrix
from ratedhomotopy.errors import ValidationError
from ratedhomotopy.groups import (
    GroupHom,
    Presentation,
    apply_images,
    exponent_vector,
    free_reduce,
    graph_of_groups,
    invert,
    mapping_torus,
    parse_word,
    spanning_tree,
    tietze_simplify,
    word_to_str,
)


def test_free_reduce():
    assert free_reduce((1, 2, -2, -1)) == ()
    assert free_reduce((1, -2, 2, 3)) == (1, 3)
    assert free_reduce(()) == ()
    with pytest.raises(ValidationError):
        free_reduce((1, 0))


def test_invert():
    assert invert((1, -2, 3)) == (-3, 2, -1)
    assert free_reduce((1, -2) + invert((1, -2))) == ()


def test_exponent_vector():
    assert exponent_vector((1, 2, -1, -2), 2) == (0, 0)
    assert exponent_vector((1, 1, -2), 3) == (2, -1, 0)
    with pytest.raises(ValidationError):
        exponent_vector((4,), 3)


def test_apply_images():
    # a -> ab, b -> b
    images = [(1, 2), (2,)]
    assert apply_images(images, (1,)) == (1, 2)
    assert apply_images(images, (-1,)) == (-2, -1)
    assert apply_images(images, (1, -2)) == (1,)
    with pytest.raises(ValidationError):
        apply_images(images, (3,))


# --- word notation ----------------------------------------------------


def test_parse_word():
    names = ["c", "d"]
    assert parse_word("c*d*c^-1*d^-1", names) == (1, 2, -1, -2)
    assert parse_word("c^3", names) == (1, 1, 1)
    assert parse_word("d^-2", names) == (-2, -2)
    assert parse_word("1", names) == ()
    assert parse_word("", names) == ()
    assert parse_word("c*c^-1", names) == ()


def test_parse_word_errors():
    with pytest.raises(ValidationError):
        parse_word("e", ["c", "d"])
    with pytest.raises(ValidationError):
        parse_word("c^", ["c"])
    with pytest.raises(ValidationError):
        parse_word("c**d", ["c", "d"])
    with pytest.raises(ValidationError):
        parse_word(7, ["c"])


def test_word_to_str():
    names = ["x1", "t"]
    assert word_to_str((2, 1, -2, -1), names) == "t*x1*t^-1*x1^-1"
    assert word_to_str((), names) == "1"


reduced_words = st.lists(
    st.integers(-3, 3).filter(lambda g: g != 0), max_size=8
).map(lambda ls: free_reduce(ls))


@given(reduced_words)
def test_word_notation_round_trip(word):
    names = ["a", "b_2", "c@n1"]
    assert parse_word(word_to_str(word, names), names) == word


# --- presentations ----------------------------------------------------


def test_presentation_validation():
    with pytest.raises(ValidationError):
        Presentation(["a", "a"], [])
    with pytest.raises(ValidationError):
        Presentation(["a"], [(2,)])
    with pytest.raises(ValidationError):
        Presentation([""], [])
    p = Presentation(["a"], [(1, -1)])
    assert p.relators == ((),)  # stored freely reduced


def test_abelianized():
    assert Presentation(["a", "b"], [(1, 2, -1, -2)]).abelianized() == AbelianGroup(2)
    assert Presentation(["a"], [(1, 1)]).abelianized() == AbelianGroup(0, (2,))
    assert Presentation(["a", "b", "c"], []).abelianized() == AbelianGroup(3)
    assert Presentation([], []).abelianized() == AbelianGroup(0)


def test_exponent_matrix():
    p = Presentation(["a", "b"], [(1, 1), (1, -2)])
    assert p.exponent_matrix() == IntMatrix([[2, 1], [0, -1]])


def test_quotient_killing():
    p = Presentation(["a", "b"], [(1, 2, -1, -2)])
    q = p.quotient_killing([1])
    assert q.relators[-1] == (1,)
    assert q.abelianized() == AbelianGroup(1)
    with pytest.raises(ValidationError):
        p.quotient_killing([3])


# --- mapping tori -----------------------------------------------------


def test_mapping_torus_identity_is_torus():
    p = mapping_torus(1, [(1,)])
    assert p.generators == ("x1", "t")
    assert p.relators == ((2, 1, -2, -1),)
    assert p.abelianized() == AbelianGroup(2)


def test_mapping_torus_flip_is_klein_bottle():
    p = mapping_torus(1, [(-1,)])
    assert p.abelianized() == AbelianGroup(1, (2,))


def test_mapping_torus_swap():
    # abelianized, the swap forces x1 = x2, leaving Z<x1> + Z<t>
    p = mapping_torus(2, [(2,), (1,)])
    assert p.abelianized() == AbelianGroup(2)


def test_mapping_torus_validation():
    with pytest.raises(ValidationError):
        mapping_torus(2, [(1,)])
    with pytest.raises(ValidationError):
        mapping_torus(1, [(2,)])


# --- homomorphisms ----------------------------------------------------


def test_group_hom():
    free2 = Presentation(["a", "b"], [])
    free1 = Presentation(["z"], [])
    f = GroupHom(free2, free1, [(1,), ()])
    assert f.apply((1, 2, 1)) == (1, 1)
    assert f.abelianized_matrix() == IntMatrix([[1], [0]])
    ident = GroupHom.identity(free2)
    assert ident.apply((1, -2)) == (1, -2)
    composed = f.compose(ident)
    assert composed.images == f.images
    with pytest.raises(ValidationError):
        GroupHom(free2, free1, [(1,)])
    with pytest.raises(ValidationError):
        GroupHom(free2, free1, [(2,), (1,)])


# --- graphs of groups -------------------------------------------------


def test_spanning_tree_path():
    ends = {0: (0, 1), 1: (1, 2)}
    assert spanning_tree([0, 1, 2], ends) == {0, 1}


def test_spanning_tree_cycle_and_multiedge():
    assert spanning_tree([0, 1], {0: (0, 1), 1: (1, 0)}) == {0}
    # self-loops are never tree edges
    assert spanning_tree([0], {0: (0, 0)}) == set()


def test_spanning_tree_deterministic_choice():
    # both edges join the same pair; the smaller edge id wins
    assert spanning_tree([0, 1], {5: (0, 1), 3: (1, 0)}) == {3}


def test_spanning_tree_disconnected():
    with pytest.raises(ValidationError):
        spanning_tree([0, 1, 2], {0: (0, 1)})


def test_graph_of_groups_tree_edge():
    nodes = {
        0: Presentation(["a"], []),
        1: Presentation(["b"], []),
    }
    edges = [(0, (0, (1,), (1,)), (1, (1,), (1,)))]
    asm = graph_of_groups(nodes, edges)
    assert asm.presentation.generators == ("a@n0", "b@n1")
    assert asm.tree_edges == {0}
    assert asm.stable_index == {}
    # mu and lambda each glue a to b
    assert asm.presentation.relators == ((1, -2), (1, -2))
    # a occurs once in a*b^-1, so a is the generator that gets solved for
    assert tietze_simplify(asm.presentation).generators == ("b@n1",)
    assert asm.presentation.abelianized() == AbelianGroup(1)


def test_graph_of_groups_self_edge_gets_stable_letter():
    nodes = {0: Presentation(["a"], [])}
    edges = [(0, (0, (1,), ()), (0, (1,), ()))]
    asm = graph_of_groups(nodes, edges)
    assert asm.presentation.generators == ("a@n0", "s@e0")
    assert asm.stable_index == {0: 2}
    # s a s^-1 a^-1, and the lambda relator reduces away
    assert asm.presentation.relators == ((2, 1, -2, -1), ())
    assert asm.presentation.abelianized() == AbelianGroup(2)


def test_graph_of_groups_parallel_edges():
    nodes = {
        0: Presentation(["a"], []),
        1: Presentation(["b"], []),
    }
    edges = [
        (0, (0, (1,), ()), (1, (1,), ())),
        (1, (0, (1,), ()), (1, (1,), ())),
    ]
    asm = graph_of_groups(nodes, edges)
    assert asm.tree_edges == {0}
    assert asm.stable_index == {1: 3}
    assert asm.presentation.generators == ("a@n0", "b@n1", "s@e1")


def test_graph_of_groups_disconnected():
    with pytest.raises(ValidationError):
        graph_of_groups({0: Presentation(["a"], []), 1: Presentation(["b"], [])}, [])


def test_graph_of_groups_bad_edge():
    with pytest.raises(ValidationError):
        graph_of_groups({0: Presentation(["a"], [])}, [(0, (0, (), ()), (7, (), ()))])


# --- Tietze simplification --------------------------------------------


def assembled_tn_style():
    nodes = {
        0: Presentation(["c", "d"], [(1, 2, -1, -2)]),
        1: mapping_torus(1, [(1,)]),
    }
    edges = [(0, (0, (1,), (2,)), (1, (2,), (1,)))]
    return graph_of_groups(nodes, edges)


def test_tietze_eliminates_glued_generators():
    asm = assembled_tn_style()
    simp = tietze_simplify(asm.presentation)
    assert simp.generators == ("x1@n1", "t@n1")
    assert simp.relator_strs() == ["t@n1*x1@n1*t@n1^-1*x1@n1^-1"]


def test_tietze_kills_trivial_generator():
    p = Presentation(["a"], [(1,)])
    simp = tietze_simplify(p)
    assert simp.generators == ()
    assert simp.relators == ()


def test_tietze_drops_empty_and_duplicate_relators():
    p = Presentation(["a", "b"], [(1, -1), (1, 2), (1, 2)])
    simp = tietze_simplify(p)
    # a b = 1 eliminates one generator entirely
    assert simp.generators in (("a",), ("b",))
    assert simp.relators == ()


def test_tietze_leaves_commutator_alone():
    p = Presentation(["a", "b"], [(1, 2, -1, -2)])
    assert tietze_simplify(p) == p


def test_tietze_substitution_example():
    # a b a^-1 = 1 forces b = 1
    p = Presentation(["a", "b"], [(1, 2, -1)])
    simp = tietze_simplify(p)
    assert simp.generators == ("a",)
    assert simp.relators == ()


@st.composite
def presentations(draw):
    rank = draw(st.integers(min_value=0, max_value=4))
    names = ["g%d" % i for i in range(rank)]
    rels = []
    if rank:
        letters = st.integers(min_value=-rank, max_value=rank).filter(lambda g: g != 0)
        n = draw(st.integers(min_value=0, max_value=4))
        for _ in range(n):
            rels.append(tuple(draw(st.lists(letters, max_size=6))))
    return Presentation(names, rels)


@given(presentations())
def test_tietze_preserves_abelianization(p):
    assert tietze_simplify(p).abelianized() == p.abelianized()


@given(presentations())
def test_tietze_is_idempotent(p):
    simp = tietze_simplify(p)
    assert tietze_simplify(simp) == simp
