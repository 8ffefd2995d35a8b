import json
import subprocess
import sys
import time

import pytest

from phylosym.cli import main
from phylosym.errors import BFileError
from phylosym.oeis import REFERENCE, computed_values, load_bfile, parse_bfile


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_bfile():
    text = "# header\n\n1 1\n2 1\n  3   1\n4 2\n"
    assert parse_bfile(text) == {1: 1, 2: 1, 3: 1, 4: 2}


@pytest.mark.parametrize("text,line", [("1 1\n2 x\n", 2), ("# c\n1 1 1\n", 2), ("1 1\n1 1\n", 2)])
def test_parse_bfile_errors(text, line):
    with pytest.raises(BFileError) as info:
        parse_bfile(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_load_bfile(tmp_path):
    good = tmp_path / "b001190.txt"
    good.write_text("# Wedderburn-Etherington\n1 1\n2 1\n3 1\n4 2\n11 207\n")
    seq = load_bfile(good)
    assert seq.oeis_id == "A001190"
    assert seq.extended == {11: 207}
    assert seq.values()[4] == 2
    bad = tmp_path / "b001190_bad.txt"
    bad.write_text("1 1\n\n4 3\n")
    with pytest.raises(BFileError) as info:
        load_bfile(bad)
    assert info.value.line == 3
    with pytest.raises(BFileError):
        load_bfile(good, "A000001")


def test_embedded_prefixes_match_computation():
    for oid, ref in REFERENCE.items():
        ours = computed_values(oid, max(ref.prefix))
        assert all(ours[n] == v for n, v in ref.prefix.items()), oid


def test_counts_rows(capsys):
    code, out, _ = run(["counts", "--max-n", "10"], capsys)
    rows = out.splitlines()
    assert code == 0
    assert rows[1] == "1,1,1,1,1"
    assert rows[4].startswith("4,15,2,5/8,")
    assert rows[10].split(",")[2] == "98"


def test_pn_rows(capsys):
    code, out, _ = run(["pn", "--max-n", "10", "--asymptotic"], capsys)
    rows = [r.split(",") for r in out.splitlines()]
    assert code == 0
    assert rows[0] == ["n", "p_n", "p_n_decimal", "approximation", "rel_error"]
    assert rows[7][1] == "13/99"
    assert rows[10][1] == "102797/5909761"
    assert float(rows[5][4]) < 1e-2


def test_dist_and_histo(capsys):
    code, out, _ = run(["dist", "--model", "phylo", "--n", "4", "--moments"], capsys)
    assert code == 0
    assert "1,4/5,0.8" in out and "# mean=7/5 variance=16/25" in out
    code, out, _ = run(["dist", "--model", "otter", "--n", "6", "--format", "json"], capsys)
    assert json.loads(out)["moments"]["mean"] == "5/2"
    code, out, _ = run(["histo", "--model", "otter", "--n", "6"], capsys)
    assert out.splitlines()[0] == "k,exact,decimal,gaussian"


def test_coincide(capsys):
    code, out, _ = run(["coincide", "--model", "phylo", "--n", "4", "10"], capsys)
    rows = out.splitlines()
    assert code == 0
    assert rows[1].split(",")[2] == "17/25"
    assert len(rows) == 3


def test_sample_is_deterministic(capsys, tmp_path):
    csv = tmp_path / "h.csv"
    args = ["--seed", "4", "sample", "--model", "phylo", "--n", "20", "--trials", "500", "--csv", str(csv)]
    _, first, _ = run(args, capsys)
    _, second, _ = run(args, capsys)
    assert first == second
    report = json.loads(first)
    assert report["seed"] == 4 and report["trials"] == 500
    assert csv.read_text().startswith("k,count")
    _, other, _ = run(args + ["--seed", "5"], capsys)
    assert json.loads(other)["seed"] == 5


def test_verify_fast(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(["verify", "fast"], capsys)
    assert time.perf_counter() - t0 < 10
    assert code == 0, out
    modules = {line.split("[")[1].split("]")[0] for line in out.splitlines() if line.startswith("PASS")}
    assert modules >= {"tree-core", "series-engine", "symmetry-stats", "asymptotics", "sampler", "cli"}


def test_verify_reports_failures(monkeypatch, capsys):
    from phylosym import verify

    broken = [("always-fails", "cli", lambda order: (False, "broken on purpose"))]
    monkeypatch.setitem(verify.SUITES, "fast", broken)
    code, out, _ = run(["verify"], capsys)
    assert code == 1
    assert "FAIL [cli] always-fails: broken on purpose" in out


def test_bfile_check(tmp_path, capsys):
    f = tmp_path / "b003609.txt"
    f.write_text("1 1\n2 2\n3 2\n4 10\n5 14\n6 42\n7 90\n8 354\n")
    assert run(["bfile-check", str(f)], capsys)[0] == 0
    f.write_text("1 1\n2 2\n9 1000\n")
    code, out, _ = run(["bfile-check", str(f)], capsys)
    assert code == 1 and "index 9" in out
    f.write_text("4 11\n")
    assert run(["bfile-check", str(f)], capsys)[0] == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["dist", "--model", "yule", "--n", "5"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["pn", "--max-n", "0"])
    assert info.value.code == 2
    assert run(["--order", "5", "dist", "--model", "otter", "--n", "9"], capsys)[0] == 2
    assert run(["bfile-check", "/nonexistent/b001190.txt"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phylosym", "counts", "--max-n", "4"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1].startswith("4,15,2,5/8")
