import json

import numpy as np
import pytest

from magic.builtin_graphs import BUILTIN_FACES, builtin
from magic.errors import GraphSyntaxError, GraphValidationError, UnknownBuiltinError
from magic.graph import (
    FullereneGraph,
    face_system_rank,
    incidence_profile,
    load_fullerene,
    parse_fullerene,
    serialize_fullerene,
)


@pytest.mark.parametrize("name, n, hexagons", [("c20", 20, 0), ("c24", 24, 2), ("c26", 26, 3)])
def test_builtin_graphs_are_fullerenes(name, n, hexagons):
    graph = builtin(name)
    assert graph.n == n
    assert len(graph.pentagons) == 12
    assert len(graph.hexagons) == hexagons
    assert len(graph.edges) == 3 * n // 2
    assert all(len(ws) == 3 for ws in graph.neighbours.values())


def test_builtin_lookup_is_case_insensitive():
    assert builtin("C24") is builtin("c24")
    with pytest.raises(UnknownBuiltinError):
        builtin("c60")


def test_builtin_table_lists_three_graphs():
    assert sorted(BUILTIN_FACES) == ["C20", "C24", "C26"]


def test_c24_hexagons_are_disjoint(c24):
    first, second = c24.hexagons
    assert not set(first) & set(second)


def test_faces_of_vertex_indexes_three_faces(c24):
    for v, idxs in c24.faces_of_vertex.items():
        assert len(idxs) == 3
        assert all(v in c24.faces[i] for i in idxs)


def test_incidence_profile_counts_every_hexagon_slot(c26):
    profile = incidence_profile(c26)
    assert sum(profile.hex_multiplicity) == 6 * len(c26.hexagons)
    assert sum(profile.pent_multiplicity) == 5 * 12
    assert all(h + p == 3 for h, p in zip(profile.hex_multiplicity, profile.pent_multiplicity))


def test_serialized_graph_parses_back(c24):
    again = parse_fullerene(serialize_fullerene(c24), graph_id="copy")
    assert again == c24
    assert again.graph_id == "copy"


def test_load_fullerene_uses_file_stem(tmp_path, c20_faces):
    path = tmp_path / "dodecahedron.json"
    path.write_text(json.dumps({"n": 20, "faces": c20_faces}))
    graph = load_fullerene(path)
    assert graph.graph_id == "dodecahedron"
    assert graph.n == 20


def test_missing_file_is_a_syntax_error(tmp_path):
    with pytest.raises(GraphSyntaxError):
        load_fullerene(tmp_path / "absent.json")


@pytest.mark.parametrize("text", [
    "not json",
    '{"n": 20}',
    '{"n": "20", "faces": []}',
    '{"n": 20, "faces": [], "name": "extra"}',
])
def test_malformed_graph_files(text):
    with pytest.raises(GraphSyntaxError):
        parse_fullerene(text)


def test_missing_pentagon_is_reported(c20_faces):
    with pytest.raises(GraphValidationError, match="11 pentagons, expected 12"):
        FullereneGraph(n=20, faces=tuple(tuple(f) for f in c20_faces[:-1]))


def test_vertex_out_of_range(c20_faces):
    c20_faces[0][0] = 21
    with pytest.raises(GraphValidationError, match="out of range"):
        FullereneGraph(n=20, faces=tuple(tuple(f) for f in c20_faces))


def test_repeated_vertex_in_face(c20_faces):
    c20_faces[0][1] = c20_faces[0][0]
    with pytest.raises(GraphValidationError, match="repeated vertex"):
        FullereneGraph(n=20, faces=tuple(tuple(f) for f in c20_faces))


def test_odd_order_is_rejected(c20_faces):
    with pytest.raises(GraphValidationError, match="positive even"):
        FullereneGraph(n=21, faces=tuple(tuple(f) for f in c20_faces))


def test_broken_cyclic_order_is_caught(c20_faces):
    # same vertex sets, but the first pentagon no longer walks its boundary
    a, b, c, d, e = c20_faces[0]
    c20_faces[0] = [a, c, b, d, e]
    with pytest.raises(GraphValidationError):
        FullereneGraph(n=20, faces=tuple(tuple(f) for f in c20_faces))


def test_face_with_seven_vertices(c20_faces):
    c20_faces[0] = c20_faces[0] + [6, 7]
    with pytest.raises(GraphValidationError, match="expected 5 or 6"):
        FullereneGraph(n=20, faces=tuple(tuple(f) for f in c20_faces))


@pytest.mark.parametrize("name", ["c20", "c24", "c26"])
def test_face_system_rank_is_bounded(name):
    graph = builtin(name)
    rank = face_system_rank(graph)
    assert 0 < rank <= min(len(graph.faces), graph.n)


def test_face_system_rank_agrees_with_numpy(c26):
    incidence = np.array([[int(v in face) for v in range(1, c26.n + 1)] for face in c26.faces])
    assert face_system_rank(c26) == np.linalg.matrix_rank(incidence)
