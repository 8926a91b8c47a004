import json
import xml.etree.ElementTree as ET

import pytest

from arrangelab.cli import main
from arrangelab.jsonio import read_json


def run(argv):
    return main(argv)


class TestGenerate:
    def test_random(self, tmp_path):
        out = tmp_path / "lines.json"
        assert run(["generate", "random", "-n", "6", "--seed", "1", "--out", str(out)]) == 0
        payload = read_json(out)
        assert payload["n"] == 6 and len(payload["lines"]) == 6
        assert payload["metadata"]["seed"] == 1
        # re-validate the file: it must build cleanly
        from arrangelab.arrangement import build
        from arrangelab.jsonio import lines_from_payload

        arr = build(lines_from_payload(payload))
        assert len(arr.cells) == 22

    def test_convex(self, tmp_path):
        out = tmp_path / "convex.json"
        assert run(["generate", "convex", "-n", "5", "--out", str(out)]) == 0
        payload = read_json(out)
        assert payload["lines"][0] == {"a": "-2", "b": "1", "c": "-1"}

    def test_gadget(self, tmp_path):
        out = tmp_path / "g.json"
        assert run(["generate", "gadget", "-q", "3", "--out", str(out)]) == 0
        payload = read_json(out)
        assert payload["n"] == 8
        assert len(payload["witness"]) <= 16

    def test_chain(self, tmp_path):
        out = tmp_path / "c.json"
        assert run(["generate", "chain", "-k", "1", "-i", "1", "--out", str(out)]) == 0
        payload = read_json(out)
        assert payload["n"] == 4 and payload["copy_map"] == [0, 0, 1, 1]

    def test_limit_exit_code(self, tmp_path):
        assert run(["generate", "gadget", "-q", "9", "--out", str(tmp_path / "x.json")]) == 2

    def test_exhausted_exit_code(self, tmp_path):
        code = run([
            "generate", "random", "-n", "12", "--seed", "0",
            "--coeff-bound", "2", "--out", str(tmp_path / "x.json"),
        ])
        assert code == 2


@pytest.fixture
def lines6(tmp_path):
    path = tmp_path / "lines6.json"
    run(["generate", "random", "-n", "6", "--seed", "1", "--out", str(path)])
    return path


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.json"
    run(["generate", "random", "-n", "3", "--seed", "2", "--out", str(path)])
    return path


class TestSolve:
    def test_iterated_coloring(self, tmp_path, lines6):
        out = tmp_path / "sol.json"
        code = run([
            "solve", "--hypergraph", "line-cell", "--problem", "chromatic",
            "--algo", "iterated-is", "--in", str(lines6), "--out", str(out),
        ])
        assert code == 0
        result = read_json(out)
        assert result["validation"]["ok"]
        assert result["metrics"]["colors_used"] <= 2 * 6**0.5 + 4
        assert result["domain"] == "lines"
        assert result["trace"]

    def test_exact_chromatic_triangle(self, tmp_path, triangle_file):
        out = tmp_path / "chi.json"
        code = run([
            "solve", "--problem", "chromatic", "--algo", "exact",
            "--in", str(triangle_file), "--out", str(out),
        ])
        assert code == 0
        assert read_json(out)["metrics"]["chromatic_number"] == 3

    def test_pair_cover_n9(self, tmp_path):
        src = tmp_path / "n9.json"
        run(["generate", "random", "-n", "9", "--seed", "3", "--out", str(src)])
        out = tmp_path / "cover.json"
        code = run([
            "solve", "--hypergraph", "cell-zone", "--problem", "cover",
            "--algo", "pairs", "--in", str(src), "--out", str(out),
        ])
        assert code == 0
        result = read_json(out)
        assert result["metrics"]["size"] <= 5
        assert result["validation"]["ok"]

    def test_sweep_emits_both_colorings(self, tmp_path, lines6):
        out = tmp_path / "sweep.json"
        code = run([
            "solve", "--hypergraph", "vertex-cell", "--problem", "coloring",
            "--algo", "sweep", "--in", str(lines6), "--out", str(out),
        ])
        assert code == 0

    def test_too_large_exit_code(self, tmp_path, lines6):
        out = tmp_path / "x.json"
        code = run([
            "solve", "--problem", "independent-set", "--algo", "exact",
            "--in", str(lines6), "--limit-exact", "3", "--out", str(out),
        ])
        assert code == 2

    def test_unsupported_combination(self, lines6):
        code = run([
            "solve", "--hypergraph", "cell-zone", "--problem", "chromatic",
            "--algo", "exact", "--in", str(lines6),
        ])
        assert code == 2

    def test_alternating_odd_reports_violation(self, tmp_path):
        src = tmp_path / "convex5.json"
        run(["generate", "convex", "-n", "5", "--out", str(src)])
        out = tmp_path / "alt.json"
        code = run([
            "solve", "--problem", "chromatic", "--algo", "alternating",
            "--in", str(src), "--out", str(out),
        ])
        # improper by geometry for odd counts: reported, exit 1, never silent
        assert code == 1
        result = read_json(out)
        assert not result["validation"]["ok"]
        assert result["validation"]["violations"][0]["edge"] == [0, 4]

    def test_alternating_even_ok(self, tmp_path):
        src = tmp_path / "convex6.json"
        run(["generate", "convex", "-n", "6", "--out", str(src)])
        code = run([
            "solve", "--problem", "chromatic", "--algo", "alternating",
            "--in", str(src), "--out", str(tmp_path / "alt6.json"),
        ])
        assert code == 0


class TestRender:
    def test_plain_svg(self, tmp_path):
        src = tmp_path / "n2.json"
        run(["generate", "random", "-n", "2", "--seed", "1", "--out", str(src)])
        out = tmp_path / "fig.svg"
        assert run(["render", "--in", str(src), "--out", str(out)]) == 0
        root = ET.fromstring(out.read_text())
        lines = [el for el in root.iter() if "line" in (el.get("class") or "").split()]
        assert len(lines) == 2

    def test_render_with_solution(self, tmp_path, lines6):
        sol = tmp_path / "sol.json"
        run([
            "solve", "--hypergraph", "cell-zone", "--problem", "cover",
            "--algo", "pairs", "--in", str(lines6), "--out", str(sol),
        ])
        out = tmp_path / "fig.svg"
        code = run(["render", "--in", str(lines6), "--certificate", str(sol), "--out", str(out)])
        assert code == 0
        root = ET.fromstring(out.read_text())
        shades = [el for el in root.iter() if "cell-shade" in (el.get("class") or "").split()]
        assert len(shades) == read_json(sol)["metrics"]["size"]

    def test_mismatched_certificate(self, tmp_path, lines6, triangle_file):
        sol = tmp_path / "sol3.json"
        run([
            "solve", "--problem", "chromatic", "--algo", "iterated-is",
            "--in", str(triangle_file), "--out", str(sol),
        ])
        code = run(["render", "--in", str(lines6), "--certificate", str(sol),
                    "--domain", "lines", "--out", str(tmp_path / "f.svg")])
        assert code == 2

    def test_deterministic(self, tmp_path, lines6):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run(["render", "--in", str(lines6), "--out", str(a)])
        run(["render", "--in", str(lines6), "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_format_flag(self, tmp_path, lines6):
        out = tmp_path / "fig.json"
        assert run(["--format", "json", "render", "--in", str(lines6), "--out", str(out)]) == 0
        assert "arrangement" in read_json(out)
        # svg format is meaningless outside render
        assert run(["--format", "svg", "export", "--in", str(lines6)]) == 2


class TestExportRoundTrip:
    def test_bit_identical(self, tmp_path, lines6):
        first = tmp_path / "arr1.json"
        second = tmp_path / "arr2.json"
        assert run(["export", "--in", str(lines6), "--out", str(first)]) == 0
        # re-import the exported lines and export again
        assert run(["export", "--in", str(first), "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_schema(self, tmp_path, lines6):
        out = tmp_path / "arr.json"
        run(["export", "--in", str(lines6), "--out", str(out)])
        payload = read_json(out)
        assert list(payload.keys()) == ["n", "lines", "vertices", "cells", "zones"]


class TestVerifyBounds:
    def test_small_run_ok(self, tmp_path, capsys):
        out = tmp_path / "vb"
        code = run([
            "verify-bounds", "--trials", "6", "--guard-trials", "6",
            "--chain-samples", "200", "--only", "counts,parity,gadgets",
            "--no-figures", "--out", str(out),
        ])
        assert code == 0
        report = read_json(out / "report.json")
        assert report["ok"]
        assert (out / "summary.csv").exists()
        assert not (out / "figures").exists()
        captured = capsys.readouterr()
        assert "PASS counts/cell-count" in captured.out

    def test_figures_written(self, tmp_path):
        out = tmp_path / "vbf"
        code = run([
            "verify-bounds", "--trials", "4", "--guard-trials", "4",
            "--only", "counts", "--out", str(out),
        ])
        assert code == 0
        figures = list((out / "figures").glob("*.png"))
        assert len(figures) == 4

    def test_unknown_family(self, tmp_path):
        assert run(["verify-bounds", "--only", "nonsense", "--out", str(tmp_path)]) == 2

    def test_single_n_flag(self, tmp_path):
        out = tmp_path / "vbn"
        code = run([
            "verify-bounds", "--only", "counts", "-n", "6", "--trials", "3",
            "--no-figures", "--out", str(out),
        ])
        assert code == 0
        report = read_json(out / "report.json")
        assert report["summary"]["counts/cell-count"]["pass"] == 3

    def test_worker_pool_matches_serial(self, tmp_path):
        serial, pooled = tmp_path / "s", tmp_path / "p"
        for path, workers in ((serial, "1"), (pooled, "2")):
            run([
                "verify-bounds", "--trials", "4", "--guard-trials", "4",
                "--only", "counts,duality", "--workers", workers,
                "--no-figures", "--out", str(path),
            ])
        a = read_json(serial / "report.json")
        b = read_json(pooled / "report.json")
        assert a["summary"] == b["summary"]

    def test_metadata_reproducibility(self, tmp_path):
        out = tmp_path / "vb2"
        run([
            "verify-bounds", "--trials", "3", "--guard-trials", "3",
            "--only", "counts", "--no-figures", "--out", str(out),
        ])
        meta = read_json(out / "report.json")["metadata"]
        assert meta["command"] == "verify-bounds"
        assert meta["seed"] == 0
