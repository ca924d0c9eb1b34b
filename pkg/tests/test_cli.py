import json

import pytest

from twinwidth.cli import (
    emit_graph,
    emit_sequence,
    parse_graph,
    parse_sequence,
    run,
)
from twinwidth.errors import (
    GraphSyntaxError,
    HeaderMismatch,
    IndexOutOfRange,
)
from twinwidth.sequence import verify
from twinwidth.trigraph import EdgeColor, new_trigraph

from conftest import FIG2_PAIRS, make_fig2, make_fig3

FIG2_TEXT = """c the worked six-vertex example
p tww 6 8
1 2
1 3
2 3
2 4
3 5
3 6
4 5
5 6
"""

FIG2_SEQ = "5 6\n1 2\n3 4\n3 5\n1 3\n"


class TestGraphFiles:
    def test_single_vertex(self):
        g = parse_graph("p tww 1 0\n")
        assert g.n == 1 and g.edge_count() == 0

    def test_fig2_parse(self):
        assert parse_graph(FIG2_TEXT) == make_fig2()

    def test_roundtrip(self):
        for g in (make_fig2(), make_fig3(), new_trigraph(3, [(0, 1)], [(1, 2)])):
            assert parse_graph(emit_graph(g)) == g

    def test_roundtrip_corpus(self):
        import random

        from twinwidth.corpus import random_connected_graph

        rng = random.Random(42)
        for _ in range(20):
            n = rng.randrange(1, 40)
            k = rng.randrange(0, 4)
            if n - 1 + k > n * (n - 1) // 2:
                k = 0
            g = random_connected_graph(n, k, rng)
            assert parse_graph(emit_graph(g)) == g

    def test_red_edge_token(self):
        g = parse_graph("p tww 3 2\n1 2\n2 3 r\n")
        assert g.color(0, 1) is EdgeColor.BLACK
        assert g.color(1, 2) is EdgeColor.RED
        assert "3 r" not in emit_graph(make_fig2())

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange) as exc:
            parse_graph("p tww 6 8\n7 1\n1 2\n1 3\n2 3\n2 4\n3 5\n4 5\n5 6\n")
        assert exc.value.line == 2

    def test_header_mismatches(self):
        with pytest.raises(HeaderMismatch):
            parse_graph("p tww 2 1\n")
        with pytest.raises(GraphSyntaxError):
            parse_graph("1 2\n")  # edge line before any header
        with pytest.raises(HeaderMismatch):
            parse_graph("")
        with pytest.raises(GraphSyntaxError):
            parse_graph("p tww 2 1\n1 x\n")


class TestSequenceFiles:
    def test_fig2_sequence(self):
        g = make_fig2()
        seq = parse_sequence(g, FIG2_SEQ)
        assert verify(g, seq) == 2
        assert seq.pairs() == FIG2_PAIRS

    def test_survivor_keeps_label(self):
        g = make_fig2()
        seq = parse_sequence(g, FIG2_SEQ)
        assert emit_sequence(g, seq) == FIG2_SEQ

    def test_bad_step(self):
        g = make_fig2()
        with pytest.raises(GraphSyntaxError):
            parse_sequence(g, "1 2\n2 3\n")  # 2 is dead after the first step


@pytest.fixture
def tmp_fig2(tmp_path):
    path = tmp_path / "fig2.gr"
    path.write_text(FIG2_TEXT)
    return path


class TestCommands:
    def test_verify_ok(self, tmp_fig2, tmp_path, capsys):
        seq = tmp_path / "fig2.seq"
        seq.write_text(FIG2_SEQ)
        assert run(["verify", str(tmp_fig2), str(seq)]) == 0
        assert capsys.readouterr().out == "width 2\n"

    def test_verify_failure_exit_2(self, tmp_fig2, tmp_path, capsys):
        seq = tmp_path / "bad.seq"
        seq.write_text("1 2\n1 2\n")
        assert run(["verify", str(tmp_fig2), str(seq)]) == 2

    def test_solve_then_verify(self, tmp_fig2, tmp_path, capsys):
        report = tmp_path / "report.json"
        assert run(["solve", str(tmp_fig2), "--report", str(report)]) == 0
        out = capsys.readouterr().out
        seq_file = tmp_path / "out.seq"
        seq_file.write_text(out)
        assert run(["verify", str(tmp_fig2), str(seq_file)]) == 0
        assert capsys.readouterr().out == "width 2\n"
        rep = json.loads(report.read_text())
        assert rep["width"] == 2 and rep["status"] == "optimal"

    def test_solve_cap_exceeded(self, tmp_fig2):
        assert run(["solve", str(tmp_fig2), "--cap", "1"]) == 2
        assert run(["solve", str(tmp_fig2), "--cap", "2"]) == 0

    def test_kernelize_tww2(self, tmp_path, capsys):
        graph = tmp_path / "fig3.gr"
        graph.write_text(emit_graph(make_fig3()))
        trace = tmp_path / "trace.json"
        assert run(
            ["kernelize", "--target", "tww2", "--budget", "25",
             "--trace", str(trace), str(graph)]
        ) == 0
        out = capsys.readouterr().out
        kernel = parse_graph(out)
        assert kernel.n <= 116 * 2
        payload = json.loads(trace.read_text())
        assert not payload["solved"]
        assert payload["meta"]["k"] == 2
        assert any(e["rule"] == "reduce_tree" for e in payload["rules"])

    def test_kernelize_solved_instance(self, tmp_path, capsys):
        graph = tmp_path / "tree.gr"
        graph.write_text("p tww 4 3\n1 2\n2 3\n3 4\n")
        trace = tmp_path / "trace.json"
        assert run(["kernelize", str(graph), "--trace", str(trace)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("c solved width=")
        payload = json.loads(trace.read_text())
        assert payload["solved"] and payload["width"] <= 2

    def test_fes(self, tmp_path, capsys):
        graph = tmp_path / "c5.gr"
        graph.write_text("p tww 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n")
        assert run(["fes", str(graph)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["feedback_edge_number"] == 1
        assert len(out["edges"]) == 1

    def test_info(self, tmp_path, capsys):
        graph = tmp_path / "fig3.gr"
        graph.write_text(emit_graph(make_fig3()))
        assert run(["info", str(graph)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["n"] == 54
        assert out["feedback_edge_number"] == 2
        assert len(out["dangling_trees"]) == 11

    def test_usage_error(self):
        assert run(["solve"]) == 1
        assert run(["bogus"]) == 1

    def test_parse_error_exit_1(self, tmp_path):
        bad = tmp_path / "bad.gr"
        bad.write_text("p tww 2 1\n9 9\n")
        assert run(["solve", str(bad)]) == 1

    def test_solve_emitted_kernel_roundtrip(self, tmp_path, capsys):
        # kernelize writes a trigraph; solving that file must work end to end
        graph = tmp_path / "fig3.gr"
        graph.write_text(emit_graph(make_fig3()))
        assert run(["kernelize", "--target", "tww2", "--budget", "25", str(graph)]) == 0
        kernel_text = capsys.readouterr().out
        kernel_file = tmp_path / "kernel.gr"
        kernel_file.write_text(kernel_text)
        assert run(["solve", str(kernel_file), "--budget", "25"]) == 0
        seq_file = tmp_path / "kernel.seq"
        seq_file.write_text(capsys.readouterr().out)
        assert run(["verify", str(kernel_file), str(seq_file)]) == 0
        assert capsys.readouterr().out == "width 2\n"

    def test_kernelize_trigraph_input_exit_1(self, tmp_path):
        graph = tmp_path / "tri.gr"
        graph.write_text("p tww 3 2\n1 2\n2 3 r\n")
        assert run(["kernelize", str(graph)]) == 1

    def test_budget_exit_3(self, tmp_path):
        import random

        from twinwidth.corpus import random_connected_graph

        g = random_connected_graph(120, 2, random.Random(0))
        graph = tmp_path / "big.gr"
        graph.write_text(emit_graph(g))
        assert run(["solve", str(graph)]) == 3

    def test_disconnected_solve_verify_roundtrip(self, tmp_path, capsys):
        graph = tmp_path / "two.gr"
        graph.write_text("p tww 6 5\n1 2\n2 3\n4 5\n5 6\n6 4\n")
        assert run(["solve", str(graph)]) == 0
        seq_file = tmp_path / "two.seq"
        seq_file.write_text(capsys.readouterr().out)
        assert run(["verify", str(graph), str(seq_file)]) == 0
        assert capsys.readouterr().out.startswith("width")

    def test_deterministic_bytes(self, tmp_fig2, tmp_path, capsys):
        outs = []
        for threads in ("1", "4", "1"):
            report = tmp_path / f"r{threads}.json"
            assert run(
                ["solve", str(tmp_fig2), "--threads", threads,
                 "--report", str(report)]
            ) == 0
            outs.append(capsys.readouterr().out + report.read_text())
        assert outs[0] == outs[1] == outs[2]
