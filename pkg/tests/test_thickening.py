import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratedhomotopy.errors import DomainError, ValidationError
from ratedhomotopy.thickening import (
    Location,
    Piece,
    SimplicialComplex,
    VertexData,
    decompose,
    extend,
    locate,
)

F = Fraction
HALF = F(1, 2)


def unit_segment():
    return SimplicialComplex([(0,), (1,)], [(0, 1)])


def two_segments():
    # the chain 0 -- 1 -- 2 on the line
    return SimplicialComplex([(0,), (1,), (2,)], [(0, 1), (1, 2)])


def square_pair():
    # unit square split along the diagonal {1, 2}
    return SimplicialComplex(
        [(0, 0), (1, 0), (0, 1), (1, 1)],
        [(0, 1, 2), (1, 2, 3)],
    )


def tetrahedron():
    return SimplicialComplex(
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
        [(0, 1, 2, 3)],
    )


def step_data(cx):
    # simplex i carries the constant value i on all its vertices
    return VertexData(
        cx, [[(i,)] * (cx.dim + 1) for i in range(len(cx.simplices))]
    )


def rational_point(rng, cx, simplex_index):
    """A deterministic pseudo-random point of a simplex, exact."""
    raw = [rng.randrange(10) for _ in range(cx.dim + 1)]
    raw[rng.randrange(cx.dim + 1)] += 1
    total = sum(raw)
    lam = tuple(F(r, total) for r in raw)
    return cx.to_ambient(simplex_index, lam), lam


# --- subdivision combinatorics ---------------------------------------------


def test_segment_piece_count_and_order():
    pieces = decompose(unit_segment())
    assert [(p.simplex, p.face, p.is_core) for p in pieces] == [
        (0, (0,), False),
        (0, (1,), False),
        (0, (0, 1), True),
    ]


def test_piece_counts_follow_face_count():
    for cx in (unit_segment(), two_segments(), square_pair(), tetrahedron()):
        per_simplex = 2 ** (cx.dim + 1) - 1
        assert len(decompose(cx)) == per_simplex * len(cx.simplices)


def test_segment_piece_vertices():
    pieces = decompose(unit_segment())
    assert set(pieces[0].vertices_ambient(unit_segment())) == {(F(0),), (F(1, 4),)}
    assert set(pieces[1].vertices_ambient(unit_segment())) == {(F(3, 4),), (F(1),)}
    assert set(pieces[2].vertices_ambient(unit_segment())) == {(F(1, 4),), (F(3, 4),)}


def test_collar_vertex_count_is_product():
    cx = tetrahedron()
    for piece in decompose(cx):
        s = len(piece.face) - 1
        assert len(piece.vertices_barycentric) == (s + 1) * 2 ** (cx.dim - s)


def test_cube_coordinates_hit_corners_exactly():
    # every collar vertex (b_g + v)/2 must map to the cube corner
    # indicating which of the missing vertices g picked up
    cx = tetrahedron()
    for piece in decompose(cx):
        if piece.is_core:
            continue
        ids = cx.simplices[piece.simplex]
        for lam in piece.vertices_barycentric:
            loc = Location(cx, cx.to_ambient(piece.simplex, lam), piece, lam)
            g = {ids[j] for j in range(cx.dim + 1) if lam[j] > 0}
            for w_id, u in loc.cube.items():
                assert u == (1 if w_id in g else 0)


# --- volumes ----------------------------------------------------------------


def test_segment_volumes():
    pieces = decompose(unit_segment())
    assert [p.volume(unit_segment()) for p in pieces] == [F(1, 4), F(1, 4), HALF]


def test_volume_sums_match_simplex_volume():
    for cx in (unit_segment(), two_segments(), square_pair(), tetrahedron()):
        totals = {}
        for piece in decompose(cx):
            vol = piece.volume(cx)
            assert vol > 0
            totals[piece.simplex] = totals.get(piece.simplex, F(0)) + vol
        for si in range(len(cx.simplices)):
            expected = abs(cx.edge_determinant(si)) / factorial(cx.dim)
            assert totals[si] == expected


def test_core_is_half_scale():
    for cx in (unit_segment(), square_pair(), tetrahedron()):
        k = cx.dim
        for piece in decompose(cx):
            if piece.is_core:
                simplex_vol = abs(cx.edge_determinant(piece.simplex)) / factorial(k)
                assert piece.volume(cx) == simplex_vol * HALF**k


def test_embedded_complex_uses_chart_volume():
    # a segment floating in the plane has no preferred absolute scale
    cx = SimplicialComplex([(0, 0), (2, 0)], [(0, 1)])
    assert [p.volume(cx) for p in decompose(cx)] == [F(1, 4), F(1, 4), HALF]


def test_volume_rejects_high_dimensions():
    cx = SimplicialComplex(
        [
            (0, 0, 0, 0),
            (1, 0, 0, 0),
            (0, 1, 0, 0),
            (0, 0, 1, 0),
            (0, 0, 0, 1),
        ],
        [(0, 1, 2, 3, 4)],
    )
    with pytest.raises(DomainError):
        decompose(cx)[0].volume_chart()


# --- locating points --------------------------------------------------------


def test_locate_eighth_point():
    loc = locate(unit_segment(), (F(1, 8),))
    assert loc.piece.face == (0,)
    assert loc.cube == {1: HALF}
    assert loc.face_base == (F(1),)


def test_locate_prefers_core_on_boundary():
    loc = locate(unit_segment(), (F(1, 4),))
    assert loc.piece.is_core
    assert loc.tau == (F(1), F(0))
    assert loc.anchor_ambient() == (F(1, 4),)


def test_locate_tie_breaks_are_stable():
    cx = square_pair()
    pieces = decompose(cx)
    loc = locate(cx, (F(1, 4), F(3, 4)), pieces)
    assert (loc.piece.simplex, loc.piece.face) == (0, (2,))
    again = locate(cx, (F(1, 4), F(3, 4)), pieces)
    assert (again.piece.simplex, again.piece.face) == (0, (2,))


def test_every_point_is_covered():
    rng = random.Random(411)
    for cx in (two_segments(), square_pair(), tetrahedron()):
        pieces = decompose(cx)
        for _ in range(100):
            si = rng.randrange(len(cx.simplices))
            point, _ = rational_point(rng, cx, si)
            loc = locate(cx, point, pieces)
            assert loc.piece.contains(loc.barycentric)


def test_locate_outside_raises():
    with pytest.raises(DomainError):
        locate(unit_segment(), (F(3, 2),))
    with pytest.raises(ValidationError):
        locate(unit_segment(), (F(1, 2), F(1, 2)))


def test_collar_base_point_is_fixed_on_vertex_collars():
    # the base point of a vertex collar is that vertex itself
    cx = square_pair()
    loc = locate(cx, (F(1, 16), F(1, 16)))
    assert loc.piece.face == (0,)
    assert loc.face_base == (F(1),)
    assert loc.anchor_ambient() == cx.to_ambient(
        0, (F(1, 6) + HALF, F(1, 6), F(1, 6))
    )


# --- the extension operator -------------------------------------------------


def test_extend_on_cores_reads_own_data():
    cx = two_segments()
    data = step_data(cx)
    value, weights = extend(cx, data, (HALF,))
    assert value == (F(0),)
    assert weights == {0: F(1)}
    value, weights = extend(cx, data, (F(3, 2),))
    assert value == (F(1),)
    assert weights == {1: F(1)}


def test_extend_blends_equally_at_shared_vertex():
    cx = two_segments()
    value, weights = extend(cx, step_data(cx), (F(1),))
    assert value == (HALF,)
    assert weights == {0: HALF, 1: HALF}


def test_extend_blends_equally_on_shared_edge():
    cx = square_pair()
    value, weights = extend(cx, step_data(cx), (HALF, HALF))
    assert value == (HALF,)
    assert weights == {0: HALF, 1: HALF}


def test_extend_near_shared_vertex_exact_value():
    # value (1 - 4e) / (2 - 4e) at distance e left of the shared vertex
    cx = two_segments()
    data = step_data(cx)
    eps = F(1, 1000)
    value, weights = extend(cx, data, (1 - eps,))
    assert value == (F(249, 499),)
    assert weights[0] + weights[1] == 1
    value_right, _ = extend(cx, data, (1 + eps,))
    assert value_right == (F(250, 499),)
    assert abs(value_right[0] - value[0]) == F(1, 499)


def test_core_restriction_is_half_scale_evaluation():
    cx = square_pair()
    data = VertexData(
        cx,
        [
            [(1, 0), (0, 1), (2, 3)],
            [(5, 1), (-1, 2), (0, 0)],
        ],
    )
    rng = random.Random(77)
    k = cx.dim
    for _ in range(25):
        si = rng.randrange(2)
        _, q = rational_point(rng, cx, si)
        x = cx.to_ambient(
            si, tuple(F(1, 2 * (k + 1)) + qi / 2 for qi in q)
        )
        value, weights = extend(cx, data, x)
        assert weights == {si: F(1)}
        assert value == data.evaluate(cx, si, q)


def test_weights_are_convex():
    rng = random.Random(1234)
    for cx in (two_segments(), square_pair()):
        pieces = decompose(cx)
        data = step_data(cx)
        for _ in range(150):
            si = rng.randrange(len(cx.simplices))
            point, _ = rational_point(rng, cx, si)
            _, weights = extend(cx, data, point, pieces)
            assert sum(weights.values()) == 1
            assert all(w >= 0 for w in weights.values())
            assert set(weights) <= set(range(len(cx.simplices)))


def seg_pairs(rng, cx, count, delta):
    """Pairs of nearby points along random segments inside one simplex."""
    for _ in range(count):
        si = rng.randrange(len(cx.simplices))
        a, _ = rational_point(rng, cx, si)
        b, _ = rational_point(rng, cx, si)
        t = F(rng.randrange(1000), 1000)
        x1 = tuple(ai + t * (bi - ai) for ai, bi in zip(a, b))
        x2 = tuple(
            ai + (t + delta) * (bi - ai) for ai, bi in zip(a, b)
        )
        yield x1, x2


def test_extension_is_continuous_inside_simplices():
    delta = F(1, 10**9)
    for cx in (two_segments(), square_pair()):
        pieces = decompose(cx)
        data = step_data(cx)
        rng = random.Random(9002)
        for x1, x2 in seg_pairs(rng, cx, 120, delta):
            v1, _ = extend(cx, data, x1, pieces)
            v2, _ = extend(cx, data, x2, pieces)
            assert all(abs(a - b) < F(1, 10**6) for a, b in zip(v1, v2))


def test_extension_is_continuous_across_shared_face():
    cx = square_pair()
    pieces = decompose(cx)
    data = step_data(cx)
    rng = random.Random(555)
    delta = F(1, 10**9)
    v0, v3 = cx.vertices[0], cx.vertices[3]
    for _ in range(60):
        t = F(rng.randrange(1, 1000), 1000)
        mid = tuple(
            (1 - t) * a + t * b for a, b in zip(cx.vertices[1], cx.vertices[2])
        )
        x1 = tuple((1 - delta) * m + delta * c for m, c in zip(mid, v0))
        x2 = tuple((1 - delta) * m + delta * c for m, c in zip(mid, v3))
        v1, _ = extend(cx, data, x1, pieces)
        v2, _ = extend(cx, data, x2, pieces)
        assert all(abs(a - b) < F(1, 10**6) for a, b in zip(v1, v2))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        min_size=2,
        max_size=2,
    ),
    st.lists(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        min_size=2,
        max_size=2,
    ),
    st.integers(0, 10**6),
)
def test_extension_is_linear_in_the_data(vals_a, vals_b, seed):
    cx = square_pair()
    pieces = decompose(cx)
    data_a = VertexData(cx, [[(v,) for v in per] for per in vals_a])
    data_b = VertexData(cx, [[(v,) for v in per] for per in vals_b])
    data_sum = VertexData(
        cx,
        [
            [(va + vb,) for va, vb in zip(pa, pb)]
            for pa, pb in zip(vals_a, vals_b)
        ],
    )
    rng = random.Random(seed)
    for _ in range(3):
        si = rng.randrange(2)
        point, _ = rational_point(rng, cx, si)
        va, wa = extend(cx, data_a, point, pieces)
        vb, wb = extend(cx, data_b, point, pieces)
        vs, ws = extend(cx, data_sum, point, pieces)
        assert vs == tuple(a + b for a, b in zip(va, vb))
        assert wa == wb == ws


# --- validation -------------------------------------------------------------


def test_complex_validation():
    with pytest.raises(ValidationError):
        SimplicialComplex([], [])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0,), (1, 2)], [(0, 1)])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0,), (1,)], [(0, 0)])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0,), (1,)], [(0, 2)])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0,), (1,)], [(0, 1), (1, 0)])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0, 0), (1, 0), (2, 0)], [(0, 1, 2)])
    with pytest.raises(ValidationError):
        SimplicialComplex([(0,), (1,), (5,)], [(0, 1)])
    with pytest.raises(ValidationError):
        SimplicialComplex(
            [(0, 0), (1, 0), (0, 1), (9, 9)], [(0, 1, 2), (1, 2)]
        )
    with pytest.raises(ValidationError):
        SimplicialComplex([(0.5,), (1,)], [(0, 1)])


def test_values_validation():
    cx = two_segments()
    with pytest.raises(ValidationError):
        VertexData(cx, [[(0,), (0,)]])
    with pytest.raises(ValidationError):
        VertexData(cx, [[(0,)], [(1,)]])
    with pytest.raises(ValidationError):
        VertexData(cx, [[(0,), (0, 1)], [(1,), (1,)]])
    with pytest.raises(ValidationError):
        VertexData(cx, [[(), ()], [(), ()]])
    with pytest.raises(ValidationError):
        VertexData(cx, [[(0.5,), (0,)], [(1,), (1,)]])


def test_piece_face_uses_vertex_ids():
    cx = two_segments()
    piece = Piece(cx, 1, (0,))
    assert piece.face == (1,)
    assert piece.face_positions == (0,)
