"""Round trips and malformed-input rejection for the file formats."""

import json

import pytest

from qweight.generators import random_dense_css, standard_code
from qweight.gf2 import BitMatrix
from qweight.io import (
    code_from_json,
    code_to_json,
    dump_alist,
    dump_code,
    load_alist,
    load_code,
    load_edge_list,
    write_point_cloud,
)
from qweight.layer_code import build_layer_code


class TestCodeJson:
    def test_round_trip_steane(self, tmp_path):
        code = standard_code("steane")
        path = tmp_path / "steane.json"
        dump_code(code, path)
        back = load_code(path)
        assert back.n == code.n
        assert back.label == code.label
        assert back.hx.words.tobytes() == code.hx.words.tobytes()
        assert back.hz.words.tobytes() == code.hz.words.tobytes()

    def test_round_trip_random(self, tmp_path):
        code = random_dense_css(9, 3, 2, seed=5)
        path = tmp_path / "r.json"
        dump_code(code, path)
        back = load_code(path)
        assert back.hx.words.tobytes() == code.hx.words.tobytes()
        assert back.hz.words.tobytes() == code.hz.words.tobytes()

    def test_supports_strictly_increasing(self):
        obj = code_to_json(standard_code("toric(3)"))
        for side in ("hx", "hz"):
            for sup in obj[side]:
                assert all(a < b for a, b in zip(sup, sup[1:]))

    def test_label_defaults_to_empty(self):
        code = code_from_json({"n": 2, "hx": [[0, 1]], "hz": []})
        assert code.label == ""

    def test_dump_is_deterministic(self, tmp_path):
        code = standard_code("four_qubit")
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        dump_code(code, a)
        dump_code(code, b)
        assert a.read_bytes() == b.read_bytes()

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(ValueError, match="not valid JSON"):
            load_code(path)

    @pytest.mark.parametrize(
        "obj",
        [
            [1, 2],
            {"hx": [], "hz": []},
            {"n": -1, "hx": [], "hz": []},
            {"n": True, "hx": [], "hz": []},
            {"n": 3, "hx": {}, "hz": []},
            {"n": 3, "hx": [0], "hz": []},
            {"n": 3, "hx": [[0, 0]], "hz": []},
            {"n": 3, "hx": [[2, 1]], "hz": []},
            {"n": 3, "hx": [[3]], "hz": []},
            {"n": 3, "hx": [[-1]], "hz": []},
            {"n": 3, "hx": [[True]], "hz": []},
            {"n": 3, "hx": [], "hz": [[0.5]]},
            {"n": 3, "hx": [], "hz": [], "label": 7},
        ],
    )
    def test_rejects_malformed(self, obj):
        with pytest.raises(ValueError):
            code_from_json(obj)


class TestAlist:
    def test_exact_layout(self, tmp_path):
        m = BitMatrix.from_support(2, 3, [[0, 1], [1, 2]])
        path = tmp_path / "m.alist"
        dump_alist(m, path)
        assert path.read_text() == (
            "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"
        )

    def test_round_trip(self, tmp_path):
        for mat in (
            standard_code("steane").hx,
            random_dense_css(11, 4, 3, seed=2).hz,
            BitMatrix.zeros(2, 4),
        ):
            path = tmp_path / "m.alist"
            dump_alist(mat, path)
            back = load_alist(path)
            assert back.rows == mat.rows
            assert back.cols == mat.cols
            assert back.words.tobytes() == mat.words.tobytes()

    def test_truncated(self, tmp_path):
        path = tmp_path / "m.alist"
        path.write_text("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n")
        with pytest.raises(ValueError, match="truncated"):
            load_alist(path)

    def test_row_out_of_range(self, tmp_path):
        path = tmp_path / "m.alist"
        path.write_text("2 1\n1 2\n1 1\n2\n1\n3\n1 2\n")
        with pytest.raises(ValueError, match="references row"):
            load_alist(path)

    def test_inconsistent_row_adjacency(self, tmp_path):
        path = tmp_path / "m.alist"
        path.write_text("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n1 3\n")
        with pytest.raises(ValueError, match="disagrees"):
            load_alist(path)

    def test_trailing_data(self, tmp_path):
        path = tmp_path / "m.alist"
        path.write_text("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n9\n")
        with pytest.raises(ValueError, match="trailing"):
            load_alist(path)

    def test_non_integer(self, tmp_path):
        path = tmp_path / "m.alist"
        path.write_text("3 x\n")
        with pytest.raises(ValueError, match="non-integer"):
            load_alist(path)


class TestEdgeList:
    def test_parses_with_comments(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# a square\n0 1\n1 2\n\n2 3  # close it\n3 0\n")
        g = load_edge_list(path)
        assert sorted(g.nodes) == [0, 1, 2, 3]
        assert g.number_of_edges() == 4

    @pytest.mark.parametrize("body", ["0 1 2\n", "0\n", "a b\n", "-1 2\n"])
    def test_rejects_bad_lines(self, tmp_path, body):
        path = tmp_path / "g.txt"
        path.write_text(body)
        with pytest.raises(ValueError, match="line 1"):
            load_edge_list(path)


class TestPointCloud:
    def test_four_qubit_has_six_plane_labels(self, tmp_path):
        emb = build_layer_code(standard_code("four_qubit"))
        path = tmp_path / "coords.txt"
        write_point_cloud(emb, path)
        lines = path.read_text().splitlines()
        headers = [ln for ln in lines if ln.startswith("# plane")]
        assert len(headers) == 6
        assert headers[0] == "# plane x 0"
        data = [ln for ln in lines if not ln.startswith("#")]
        assert len(data) == len(emb.coords)
        kinds = {ln.split()[0] for ln in data}
        assert kinds <= {"X", "Q", "Z"}

    def test_points_match_embedding(self, tmp_path):
        emb = build_layer_code(standard_code("steane"))
        path = tmp_path / "coords.txt"
        write_point_cloud(emb, path)
        seen = []
        for ln in path.read_text().splitlines():
            if ln.startswith("#"):
                continue
            kind, x, y, z = ln.split()
            seen.append((kind, (int(x), int(y), int(z))))
        letter = {"qubit": "Q", "x_check": "X", "z_check": "Z"}
        want = [(letter[cell[0]], pt) for cell, pt in emb.coords.items()]
        assert sorted(seen) == sorted(want)

    def test_deterministic(self, tmp_path):
        emb = build_layer_code(standard_code("four_qubit"))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        write_point_cloud(emb, a)
        write_point_cloud(emb, b)
        assert a.read_bytes() == b.read_bytes()


def test_json_dump_ends_with_newline(tmp_path):
    path = tmp_path / "c.json"
    dump_code(standard_code("four_qubit"), path)
    raw = path.read_text()
    assert raw.endswith("\n")
    json.loads(raw)
