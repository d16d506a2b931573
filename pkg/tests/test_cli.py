import json
import subprocess
import sys
from pathlib import Path

import pytest

from symdyn.cli import main, render_block
from symdyn.document import ParseError, parse_document
from symdyn.patterns import Pattern

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run_text(tmp_path, text, *extra):
    src = tmp_path / "doc.sd"
    src.write_text(text)
    out = tmp_path / "out.json"
    code = main(["run", str(src), "--no-timing", "--json", str(out), *extra])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def by_command(report):
    return {(e["command"], tuple(e["inputs"])): e for e in report}


def test_empty_document(tmp_path):
    assert run_text(tmp_path, "") == (0, [])
    assert run_text(tmp_path, "# only a comment\n\n") == (0, [])


def test_parse_errors_carry_line_numbers(tmp_path, capsys):
    text = "dim 1\nalphabet 0 1\nsft a { forbid (0)=2 }\ncmd nosuch a\ncmd blocks b 1\n"
    src = tmp_path / "bad.sd"
    src.write_text(text)
    assert main(["run", str(src)]) == 2
    err = capsys.readouterr().err
    assert f"{src}:3: unknown symbol '2'" in err
    assert f"{src}:4: unknown command 'nosuch'" in err
    assert f"{src}:5: blocks: unknown name 'b'" in err


@pytest.mark.parametrize("text, message", [
    ("dim 4", "dimension"),
    ("dim 1\ndim 2", "dimension mismatch"),
    ("sft a { forbid (0,0)=1 }", "dimension mismatch"),
    ("sft a { forbid (0)=1 }\nsft a { }", "duplicate name"),
    ("sft a {\n forbid (0)=1\n", "unterminated"),
    ("sft a { }\ncmd blocks a x", "nonnegative integer"),
    ("sft a { }\ncmd perturb a a", "is a sft, expected code"),
    ("code c { radius 1 ; map (0)=1 -> 0 }", "does not cover"),
    ("toeplitz t { omega 1 2 }", "bit sequence"),
])
def test_parse_error_messages(text, message):
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert message in str(exc.value)


def test_multiline_code_body():
    doc = parse_document("code c {\n  radius 0\n  default 1\n  map (0)=0 -> 0\n}\n")
    c = doc.codes["c"]
    assert c.radius == 0 and c((0,)) == 0 and c((1,)) == 1


def test_command_failure_exit_code(tmp_path):
    code, report = run_text(tmp_path, "sft f { }\ncmd blocks f 3\ncmd blocks f 1\n",
                            "--budget-blocks", "10")
    assert code == 1
    assert report[0]["status"] == "error" and "BlockBudgetExceeded" in report[0]["error"]
    assert report[1]["status"] == "ok" and report[1]["result"]["count"] == 8


def test_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.sd")]) == 2


def test_byte_identical_reports(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["run", str(SAMPLES / "tour.sd"), "--no-timing", "--json", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_timing_field(tmp_path):
    src = tmp_path / "g.sd"
    src.write_text("sft g { forbid (0)=1 (1)=1 }\ncmd blocks g 1\n")
    out = tmp_path / "o.json"
    main(["run", str(src), "--json", str(out)])
    assert "time_ms" in json.loads(out.read_text())[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symdyn.cli", "run", str(SAMPLES / "golden.sd"),
                           "--no-timing"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)[0]["result"]["count"] == 5


def test_render_writes_graymap(tmp_path):
    p = Pattern.make({(0, 0): 1, (1, 0): 0, (0, 1): 0, (1, 1): 1})
    path = tmp_path / "b.pgm"
    render_block(p, path, 2)
    # rows from y = 1 down to y = 0
    assert path.read_bytes() == b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])
    with pytest.raises(ValueError):
        render_block(Pattern.word([0, 1]), path, 2)


def test_render_command(tmp_path):
    code, report = run_text(tmp_path, "dim 2\nsft h { forbid (0,0)=1 (1,0)=1 ; (0,0)=1 (0,1)=1 }\n"
                            "cmd render h 0\n", "--render-dir", str(tmp_path / "img"))
    assert code == 0 and report[0]["result"]["count"] == 2
    files = sorted((tmp_path / "img").iterdir())
    assert [f.read_bytes() for f in files] == [b"P5\n1 1\n255\n\x00", b"P5\n1 1\n255\n\xff"]


def tour_report(tmp_path):
    out = tmp_path / "tour.json"
    assert main(["run", str(SAMPLES / "tour.sd"), "--no-timing", "--json", str(out)]) == 0
    return by_command(json.loads(out.read_text()))


def test_tour_examples(tmp_path):
    r = tour_report(tmp_path)
    res = lambda *key: r[key]["result"]
    assert res("blocks", ("golden", "1"))["count"] == 5
    assert res("blocks", ("full", "1"))["count"] == 8
    assert res("empty", ("allforbidden", "3")) == {"verdict": "Empty", "certificate": 0}
    assert res("empty", ("full", "2"))["verdict"] == "Nonempty"
    assert res("periodic", ("alternating", "3"))["period"] == [2]
    dist = res("dist", ("golden", "full", "3"))
    assert (dist["kind"], dist["exponent"]) == ("Exact", 1)
    assert res("product", ("golden", "full", "1"))["projected_counts"] == [5, 8]
    assert res("projcheck", ("golden", "full", "1"))["ok"] is True
    assert res("apply", ("xor", "full", "2"))["count"] == 32
    assert res("refine", ("id", "1"))["output_symbols"] == 8
    assert res("stability", ("golden", "id"))["radius"] == 2
    assert res("imagecheck", ("golden", "id", "golden", "1"))["ok"] is True
    bad = res("imagecheck", ("full", "id", "golden", "1"))
    assert bad["ok"] is False
    assert res("imagecheck", ("full", "zero0", "golden", "1"))["ok"] is True
    s = res("structure", ("t1", "4"))
    assert s["bases"] == [0, 1, -1, 3] and s["periods"] == [2, 4, 8, 16]
    assert res("encode", ("t1", "4"))["pattern"]["symbols"] == [1, 0, 1, 1, 1, 0, 1, 1, 1]
    assert res("decode", ("t1", "4", "3"))["omega"] == [1, 0, 1]
    assert set(res("encode", ("t0", "4"))["pattern"]["symbols"]) == {0}
    p = res("perturb", ("full", "id", "keep=1", "patmax=4", "imgmax=3"))
    assert p["found"] and p["excluded"]["symbols"] == [1, 1, 1, 1] and p["divergence_resolution"] == 2
    assert res("perturb", ("zero", "id", "keep=1", "patmax=4", "imgmax=3"))["found"] is False
    assert res("fuzz", ("20",))["mismatches"] == 0


def test_hardsquare_document(tmp_path):
    out = tmp_path / "hs.json"
    assert main(["run", str(SAMPLES / "hardsquare.sd"), "--no-timing", "--json", str(out)]) == 0
    r = by_command(json.loads(out.read_text()))
    assert r[("empty", ("nohoriz", "3"))]["result"] == {"verdict": "Empty", "certificate": 1}
    free = r[("empty", ("free", "3"))]["result"]
    assert free["witness"]["symbols"] == [0] and free["period"] == [1, 1]
