import json
from pathlib import Path

import pytest

from hypercubical.cellcx import (
    CubicalComplex,
    Cube,
    Face,
    Square,
    chain_complex,
    complex_isomorphic,
    contract_edges,
    delete_edges,
    euler_characteristic,
    hm_complex,
    hm_skeleton,
    one_skeleton,
    solve_cube_signs,
    square_boundary,
    tesseract_boundary,
)
from hypercubical.errors import MalformedComplexError, MalformedError
from hypercubical.homology import HomologySignature as HS, homology

CORPUS = Path(__file__).parent / "corpus"

EXPECTED = {
    "point": [HS(1)],
    "circle": [HS(1), HS(1)],
    "torus": [HS(1), HS(2), HS(1)],
    "klein_bottle": [HS(1), HS(1, (2,)), HS()],
    "projective_plane": [HS(1), HS(0, (2,)), HS()],
    "hm": [HS(1), HS(0, (2, 2)), HS(), HS(1)],
    "two_skeleton_hm": [HS(1), HS(0, (2, 2)), HS()],
    "tesseract": [HS(1), HS(), HS(), HS(1)],
    "hm_cover": [HS(1), HS(), HS(), HS(1)],
}


def load(name):
    return CubicalComplex.from_json(json.loads((CORPUS / f"{name}.json").read_text()))


def trimmed(C):
    hs = homology(chain_complex(C))
    return hs[: C.dimension + 1]


def test_hm_cell_data():
    C = hm_complex()
    assert C.counts() == (2, 4, 3, 1)
    assert C.edge_names == ("x", "y", "z", "w")
    assert C.square_names == ("alpha", "beta", "gamma")
    assert all(e == (0, 1) for e in C.edges)
    assert euler_characteristic(C) == 0


def test_hm_square_boundaries():
    C = hm_complex()
    x, y, z, w = range(4)
    # alpha: y z~ = x w~ ; beta: y w~ = z x~ ; gamma: z w~ = x y~
    assert square_boundary(C, 0) == {y: 1, z: -1, x: -1, w: 1}
    assert square_boundary(C, 1) == {y: 1, w: -1, z: -1, x: 1}
    assert square_boundary(C, 2) == {z: 1, w: -1, x: -1, y: 1}


def test_hm_cube_faces_cancel_in_pairs():
    C = hm_complex()
    signs = solve_cube_signs(C, 0)
    assert signs[0] == 1
    d3 = chain_complex(C).boundary(3)
    assert d3.is_zero()


@pytest.mark.parametrize("k, counts", [(0, (2, 0, 0, 0)), (1, (2, 4, 0, 0)), (2, (2, 4, 3, 0)), (3, (2, 4, 3, 1))])
def test_hm_skeleta(k, counts):
    assert hm_skeleton(k).counts() == counts


def test_hm_skeleton_range():
    with pytest.raises(MalformedError):
        hm_skeleton(4)


def test_tesseract_counts_and_homology():
    T = tesseract_boundary()
    assert T.counts() == (16, 32, 24, 8)
    assert euler_characteristic(T) == 0
    assert trimmed(T) == EXPECTED["tesseract"]
    # every square has 4 distinct edges, every cube 6 distinct faces
    assert all(len(set(q.edge_multiset())) == 4 for q in T.squares)
    assert all(len({f.square for f in c.faces}) == 6 for c in T.cubes)
    # each square is a face of exactly two cubes
    uses = [0] * 24
    for c in T.cubes:
        for f in c.faces:
            uses[f.square] += 1
    assert uses == [2] * 24


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_corpus_homology(name):
    C = load(name)
    assert trimmed(C) == EXPECTED[name]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_corpus_dd_zero_and_euler_poincare(name):
    C = load(name)
    Z = chain_complex(C)
    Z.check()
    hs = homology(Z)
    assert sum((-1) ** k * h.free_rank for k, h in enumerate(hs)) == euler_characteristic(C)


@pytest.mark.parametrize("path", sorted(CORPUS.glob("invalid_*.json")), ids=lambda p: p.stem)
def test_invalid_corpus_rejected(path):
    with pytest.raises((MalformedError, ValueError)):
        C = CubicalComplex.from_json(json.loads(path.read_text()))
        chain_complex(C)


def test_json_round_trip():
    for C in (hm_complex(), tesseract_boundary(), load("klein_bottle")):
        again = CubicalComplex.from_json(json.loads(C.dumps()))
        assert again == C
        assert again.dumps() == C.dumps()


def test_walk_rejects_disconnected_steps():
    with pytest.raises(MalformedComplexError):
        CubicalComplex(("a", "b"), ((0, 1),), (Square(0, ((0, 1), (0, 1)), ()),))


def test_hints_are_honoured_when_valid():
    C = hm_complex()
    base = C.cubes[0]
    flipped = Cube(base.base, tuple(Face(f.square, f.offset, h) for f, h in zip(base.faces, (1, -1, -1, 1, -1, 1))))
    C2 = CubicalComplex(C.vertices, C.edges, C.squares, (flipped,), C.edge_names, C.square_names, C.cube_names)
    assert solve_cube_signs(C2, 0) == (1, -1, -1, 1, -1, 1)
    # an invalid hint (d d != 0) is ignored in favour of the search
    T = tesseract_boundary()
    cube = T.cubes[0]
    bad = Cube(cube.base, tuple(Face(f.square, f.offset, 1) for f in cube.faces))
    T2 = CubicalComplex(T.vertices, T.edges, T.squares, (bad,) + T.cubes[1:], T.edge_names, T.square_names, T.cube_names)
    assert solve_cube_signs(T2, 0) == solve_cube_signs(T, 0)


def test_complex_isomorphism_basics():
    T = tesseract_boundary()
    maps = complex_isomorphic(T, T)
    assert maps is not None and [len(m) for m in maps] == [16, 32, 24, 8]
    assert complex_isomorphic(hm_complex(), T) is None
    assert complex_isomorphic(load("torus"), load("klein_bottle")) is not None  # same incidence, orientation ignored
    assert complex_isomorphic(load("circle"), load("point")) is None


def test_complex_isomorphism_respects_incidence():
    T = tesseract_boundary()
    maps = complex_isomorphic(T, T)
    for k, (s, t) in enumerate(T.edges):
        assert {maps[0][s], maps[0][t]} == set(T.edges[maps[1][k]])
    for k, q in enumerate(T.squares):
        assert sorted(maps[1][e] for e in q.edge_multiset()) == T.squares[maps[2][k]].edge_multiset()


def test_graph_operations():
    g = one_skeleton(hm_complex())
    assert len(g.edges) == 4
    c = contract_edges(g, lambda e: e.label == "w")
    assert c.vertices == ("a~b",) and len(c.edges) == 3
    assert all(s == t == 0 for s, t, _ in c.edges)
    d = delete_edges(g, lambda e: e.label in ("x", "y"))
    assert [l for _, _, l in d.edges] == ["z", "w"]


def test_dot_export_mentions_squares():
    dot = hm_complex().to_dot()
    assert dot.startswith("digraph")
    assert "// square alpha: y z~ = x w~ at a" in dot
