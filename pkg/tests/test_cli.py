import numpy as np
import pytest

from skglab.cli import main
from skglab.edgeio import read_sidecar


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def parse_tsv(text):
    lines = text.strip("\n").split("\n")
    assert lines[0].startswith("#")
    assert not any(ln.startswith("#") for ln in lines[1:])
    header = lines[0][1:].split("\t")
    return header, [ln.split("\t") for ln in lines[1:]]


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    for path in (a, b):
        assert run(capsys, "generate", "--preset", "graph500", "--levels", 16, "--seed", 7, "--format", "tsv", "--out", path)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_sidecar(a)["graph"] == "simple"


def test_generate_multigraph_line_count(tmp_path, capsys):
    path = tmp_path / "m.tsv"
    assert run(capsys, "generate", "--preset", "graph500", "--levels", 16, "--multigraph", "--out", path)[0] == 0
    assert path.read_bytes().count(b"\n") == 1 << 20


def test_generate_threads_and_format(tmp_path, capsys):
    outs = []
    for threads in (1, 2, 8):
        path = tmp_path / f"t{threads}.bin"
        run(capsys, "generate", "--preset", "graph500", "--levels", 14, "--seed", 5, "--threads", threads, "--format", "bin", "--out", path)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_regenerate_from_sidecar(tmp_path, capsys):
    orig = tmp_path / "orig.bin"
    run(capsys, "generate", "--matrix", "0.5,0.2,0.2,0.1", "--levels", 12, "--edges", 50000, "--seed", 9,
        "--noise", 0.05, "--noise-mode", "per-edge", "--chunk-size", 1000, "--format", "bin", "--out", orig)
    again = tmp_path / "again.bin"
    assert run(capsys, "generate", "--from-meta", f"{orig}.meta", "--out", again)[0] == 0
    assert orig.read_bytes() == again.read_bytes()


@pytest.mark.parametrize(
    "argv, token",
    [
        (["generate", "--preset", "graph500", "--levels", "10", "--noise", "0.25"], "NoiseTooLarge"),
        (["generate", "--matrix", "0.5,0.2,0.2,0.2", "--levels", "10"], "InvalidMatrix"),
        (["generate", "--matrix", "0.5,0.2,x,0.1", "--levels", "10"], "InvalidMatrix"),
        (["generate", "--preset", "nosuch"], "InvalidParams"),
        (["predict", "--preset", "webnotredame", "--report", "isolated"], "AsymmetricMatrix"),
        (["predict", "--preset", "graph500", "--levels", "29", "--report", "degree-dist", "--method", "lemma"], "OddLevels"),
    ],
)
def test_error_tokens(tmp_path, capsys, argv, token):
    if argv[0] == "generate":
        argv = argv + ["--out", str(tmp_path / "x.tsv")]
    code, _, err = run(capsys, *argv)
    assert code != 0
    assert err.startswith(f"error: {token}:")


def test_unwritable_path(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--preset", "graph500", "--levels", 8, "--out", tmp_path / "missing" / "x.tsv")
    assert code == 1 and err.startswith("error: UnwritablePath:")


@pytest.mark.parametrize("levels, iso_pct, avg", [(26, 51, 32), (39, 71, 55)])
def test_predict_isolated(capsys, levels, iso_pct, avg):
    code, out, _ = run(capsys, "predict", "--preset", "graph500", "--levels", levels, "--report", "isolated")
    assert code == 0
    header, rows = parse_tsv(out)
    row = dict(zip(header, rows[0]))
    assert 100 * float(row["isolated_fraction"]) == pytest.approx(iso_pct, abs=1)
    assert float(row["nonisolated_avg_degree"]) == pytest.approx(avg, abs=1)


def test_predict_reports_to_files(tmp_path, capsys):
    out = tmp_path / "pred"
    code, _, _ = run(capsys, "predict", "--preset", "graph500", "--levels", 16, "--report", "summary,repeats,degree-dist",
                     "--method", "theorem", "--dmin", 32, "--dmax", 64, "--out", out)
    assert code == 0
    header, rows = parse_tsv((tmp_path / "pred.degree-dist.tsv").read_text())
    assert header == ["degree", "theorem", "out_of_regime"] and len(rows) == 33
    header, rows = parse_tsv((tmp_path / "pred.summary.tsv").read_text())
    assert dict(rows)["sigma"].startswith("0.26")
    header, rows = parse_tsv((tmp_path / "pred.repeats.tsv").read_text())
    assert 0 < float(rows[0][header.index("repeat_fraction")]) < 0.2


def test_analyze_triangle_kcore(tmp_path, capsys):
    path = tmp_path / "tri.tsv"
    path.write_text("0\t1\n1\t2\n2\t0\n")
    code, out, _ = run(capsys, "analyze", path, "--nodes", 3, "--report", "kcore")
    assert code == 0
    _, rows = parse_tsv(out)
    assert rows[-1] == ["max_core", "2"]
    assert rows[:-1] == [["0", "3"], ["1", "3"], ["2", "3"]]


def test_analyze_bad_inputs(tmp_path, capsys):
    path = tmp_path / "bad.tsv"
    path.write_text("0\t9\n")
    assert run(capsys, "analyze", path, "--nodes", 4, "--report", "isolated")[2].startswith("error: VertexOutOfRange:")
    path.write_text("zero\tone\n")
    assert run(capsys, "analyze", path, "--nodes", 4)[2].startswith("error: MalformedEdgeFile:")
    assert run(capsys, "analyze", tmp_path / "none.tsv")[2].startswith("error: MissingFile:")


def test_generate_analyze_round_trip(tmp_path, capsys):
    path = tmp_path / "g.bin"
    run(capsys, "generate", "--preset", "graph500", "--levels", 14, "--edges", 100000, "--multigraph", "--format", "bin", "--out", path)
    code, out, _ = run(capsys, "analyze", path, "--report", "degree-dist", "--orientation", "out")
    assert code == 0
    _, rows = parse_tsv(out)
    d, c = np.array(rows, dtype=np.int64).T
    assert c.sum() == 1 << 14
    assert np.dot(d, c) == 100000


def test_analyze_all_reports(tmp_path, capsys):
    path = tmp_path / "g.tsv"
    run(capsys, "generate", "--preset", "graph500", "--levels", 12, "--out", path)
    out = tmp_path / "rep"
    code, _, _ = run(capsys, "analyze", path, "--report", "degree-dist,isolated,kcore,oscillation", "--core-kind", "out", "--out", out)
    assert code == 0
    for name in ("degree-dist", "isolated", "kcore", "oscillation"):
        parse_tsv((tmp_path / f"rep.{name}.tsv").read_text())
    _, rows = parse_tsv((tmp_path / "rep.isolated.tsv").read_text())
    assert rows[0][0] == "4096"


def test_compare_smoke(tmp_path, capsys):
    out = tmp_path / "cmp"
    code, _, _ = run(capsys, "compare", "--preset", "graph500", "--levels", 12, "--instances", 1, "--out", out)
    assert code == 0
    header, rows = parse_tsv((tmp_path / "cmp.degree.tsv").read_text())
    assert header == ["degree", "empirical_mean", "exact", "lemma", "theorem"] and rows
    header, rows = parse_tsv((tmp_path / "cmp.summary.tsv").read_text())
    assert [r[0] for r in rows] == ["exact", "lemma", "theorem"]


def test_compare_uniform_matrix(capsys):
    code, out, _ = run(capsys, "compare", "--matrix", "0.25,0.25,0.25,0.25", "--levels", 12, "--edges", 8 << 12,
                       "--instances", 5, "--multigraph", "--dmin", 1, "--dmax", 20)
    assert code == 0
    table = out.split("#method")[0]
    header, rows = parse_tsv(table)
    for row in rows:
        r = dict(zip(header, map(float, row)))
        # the tau = 1 fallback is Poisson; the exact curve is binomial
        assert r["lemma"] == r["theorem"] == pytest.approx(r["exact"], rel=0.01)
        if r["exact"] >= 100:
            assert abs(r["empirical_mean"] - r["exact"]) <= 3 * np.sqrt(r["exact"])
