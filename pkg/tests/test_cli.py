import random

import pytest

from conftest import random_text
from gramem.cli import main
from gramem.fixtures import ENSALADA, ensalada_grammar
from gramem.grammar import SIGMA, Grammar, Seq, dump_grammar


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(path, data):
    path.write_bytes(data)
    return path


@pytest.fixture
def ens_bundle(tmp_path, capsys):
    text = write(tmp_path / "ens.txt", ENSALADA)
    bundle = tmp_path / "ens.gmb"
    assert run(capsys, "build", text, "-o", bundle)[0] == 0
    return bundle


def test_build_single_run(tmp_path, capsys):
    text = write(tmp_path / "a.txt", b"aaaaaaaa")
    code, out, _ = run(capsys, "build", text, "-o", tmp_path / "a.gmb")
    assert code == 0
    fields = dict(line.split("\t") for line in out.splitlines())
    assert fields["n"] == "8" and fields["grammar_size"] == "2"
    assert set(fields) == {"n", "grammar_size", "points", "levels"}


def test_build_rejects_invalid_grammar(tmp_path, capsys):
    text = write(tmp_path / "t.txt", b"ab")
    bad = write(tmp_path / "bad.g", dump_grammar(Grammar([Seq((97, SIGMA + 7))], SIGMA)))
    code, _, err = run(capsys, "build", text, "-o", tmp_path / "x.gmb", "--grammar-in", bad)
    assert code != 0 and "undefined symbol" in err


def test_build_from_imported_grammar(tmp_path, capsys):
    text = write(tmp_path / "t.txt", ENSALADA)
    g = write(tmp_path / "ens.g", dump_grammar(ensalada_grammar()))
    bundle = tmp_path / "imp.gmb"
    assert run(capsys, "build", text, "-o", bundle, "--grammar-in", g)[0] == 0
    pats = write(tmp_path / "p.txt", b"a_\n")
    code, out, _ = run(capsys, "query", bundle, pats, "--mode", "locate")
    assert out.splitlines() == ["1\t2\tprimary", "1\t11\tprimary", "1\t14\tsecondary"]


def test_locate_fixture(ens_bundle, tmp_path, capsys):
    pats = write(tmp_path / "p.txt", b"a_\n")
    code, out, _ = run(capsys, "query", ens_bundle, pats, "--mode", "locate")
    assert code == 0
    assert [int(line.split("\t")[1]) for line in out.splitlines()] == [2, 11, 14]


def test_mem_output_format(ens_bundle, tmp_path, capsys):
    pats = write(tmp_path / "p.txt", b"lasal\nsalad\n")
    _, out, _ = run(capsys, "query", ens_bundle, pats)
    rows = [line.split("\t") for line in out.splitlines()]
    assert [r[:3] for r in rows] == [["1", "1", "2"], ["1", "3", "5"], ["2", "1", "5"]]
    for pid, i, j, start in rows:
        P = [b"lasal", b"salad"][int(pid) - 1]
        ln = int(j) - int(i) + 1
        assert ENSALADA[int(start) - 1:int(start) - 1 + ln] == P[int(i) - 1:int(j)]


def test_both_algorithms_identical(tmp_path, capsys):
    rng = random.Random(1)
    text = random_text(rng, 2, 1500)
    bundle = tmp_path / "r.gmb"
    run(capsys, "build", write(tmp_path / "r.txt", text), "-o", bundle)
    lines = [text[a:a + 60] + random_text(rng, 2, 20) for a in range(0, 1400, 70)]
    pats = write(tmp_path / "p.txt", b"\n".join(lines) + b"\n")
    outs = [run(capsys, "query", bundle, pats, "--algo", algo)[1] for algo in ("quadratic", "lcg")]
    assert outs[0] == outs[1] and outs[0]


@pytest.mark.parametrize("mode", ["kmem", "krare"])
def test_missing_k_is_usage_error(ens_bundle, tmp_path, capsys, mode):
    pats = write(tmp_path / "p.txt", b"sala\n")
    with pytest.raises(SystemExit) as exc:
        main(["query", str(ens_bundle), str(pats), "--mode", mode])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "mode, extra, expected",
    [
        ("kmem", ["--k", "3"], ["1\t1\t3", "1\t3\t4"]),
        ("krare", ["--k", "2"], ["1\t1\t4"]),
        ("mum", [], []),
        ("ms", [], ["1\t1\t4\t", "1\t2\t3\t", "1\t3\t2\t", "1\t4\t1\t"]),
    ],
)
def test_query_modes(ens_bundle, tmp_path, capsys, mode, extra, expected):
    pats = write(tmp_path / "p.txt", b"sala\n")
    code, out, _ = run(capsys, "query", ens_bundle, pats, "--mode", mode, *extra)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == len(expected)
    assert all(line.startswith(e) for line, e in zip(lines, expected))


def test_binary_patterns_and_threads(ens_bundle, tmp_path, capsys):
    recs = [b"la\n_", b"salad"]
    blob = b"".join(len(r).to_bytes(4, "little") + r for r in recs)
    pats = write(tmp_path / "p.bin", blob)
    _, one, _ = run(capsys, "query", ens_bundle, pats, "--binary")
    _, many, _ = run(capsys, "query", ens_bundle, pats, "--binary", "--threads", "3")
    assert one == many
    pid, i, j, start = one.splitlines()[0].split("\t")
    assert (pid, i, j) == ("1", "1", "2") and int(start) in (1, 10, 13, 20)


def test_rlz_round_trip(ens_bundle, tmp_path, capsys):
    src = write(tmp_path / "t.txt", b"sala_sal")
    code, out, _ = run(capsys, "rlz", ens_bundle, src, "-o", tmp_path / "t.rlz")
    fields = dict(line.split("\t") for line in out.splitlines())
    assert code == 0 and fields["z"] == "2" and float(fields["ratio"]) == pytest.approx(16 * 2 / 8)
    code, _, _ = run(capsys, "rlz", ens_bundle, tmp_path / "t.rlz", "-o", tmp_path / "back.txt", "--decompress")
    assert code == 0 and (tmp_path / "back.txt").read_bytes() == b"sala_sal"


def test_rlz_reference_itself(ens_bundle, tmp_path, capsys):
    src = write(tmp_path / "t.txt", ENSALADA)
    _, out, _ = run(capsys, "rlz", ens_bundle, src, "-o", tmp_path / "t.rlz")
    assert out.splitlines()[0] == "z\t1"


def test_rlz_absent_symbol(ens_bundle, tmp_path, capsys):
    src = write(tmp_path / "t.txt", b"salz")
    code, _, err = run(capsys, "rlz", ens_bundle, src, "-o", tmp_path / "t.rlz")
    assert code == 1 and err.startswith("error:")


def test_overlaps(tmp_path, capsys):
    reads = write(tmp_path / "r.txt", b"abcd\ncdab\n")
    code, out, _ = run(capsys, "overlaps", reads, "--lmin", 1)
    assert code == 0 and out.splitlines() == ["1\t2\t2", "2\t1\t2"]
    code, out, _ = run(capsys, "overlaps", reads, "--lmin", 10**6)
    assert code == 0 and out == ""


def test_overlaps_all_is_superset(tmp_path, capsys):
    rng = random.Random(2)
    base = random_text(rng, 2, 200)
    reads = write(tmp_path / "r.txt", b"\n".join(base[a:a + 20] for a in range(0, 180, 9)) + b"\n")
    _, longest, _ = run(capsys, "overlaps", reads, "--lmin", 2)
    _, every, _ = run(capsys, "overlaps", reads, "--lmin", 2, "--all")
    assert set(longest.splitlines()) <= set(every.splitlines())


def test_missing_file_is_error(tmp_path, capsys):
    code, _, err = run(capsys, "query", tmp_path / "none.gmb", tmp_path / "p.txt")
    assert code == 1 and "error:" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--cases", 10)
    assert code == 0
    assert out.splitlines() and all(line.startswith("PASS") for line in out.splitlines())


def test_output_is_deterministic(ens_bundle, tmp_path, capsys):
    pats = write(tmp_path / "p.txt", b"lasal\nla_\nens\n")
    first = run(capsys, "query", ens_bundle, pats, "--mode", "ms")[1]
    assert run(capsys, "query", ens_bundle, pats, "--mode", "ms")[1] == first
