import io
import json
import subprocess
import sys

import pytest

from pdlfp.cli import run


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="f.pl"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def test_solve_positive(write):
    assert call(["solve", write("p & (q | r)"), "--solver", "positive"]) == (0, "SAT p q r\n", "")


def test_solve_brute_unsat(write):
    code, out, _ = call(["solve", write("p & ~p"), "--solver", "brute"])
    assert (code, out) == (1, "UNSAT\n")


def test_oracle_diff():
    assert call(["oracle-diff", "--count", 100, "--seed", 42, "--fragment", "one-neg"])[:2] == (0, "mismatches: 0\n")


@pytest.mark.parametrize("fragment", ["positive", "two-neg", "and-only", "or-only", "case4", "horn", "dual-horn", "2sat", "xor"])
def test_oracle_diff_fragments(fragment):
    assert call(["oracle-diff", "--count", 40, "--seed", 3, "--fragment", fragment])[:2] == (0, "mismatches: 0\n")


@pytest.mark.parametrize(
    "text, solver",
    [
        ("p & (q | r)", "positive"),
        ("~(p & q)", "and-only"),
        ("p | ~q", "or-only"),
        ("(p | q) & ~r & s | t", "one-neg"),
        ("(p | q) & ~r & ~(s & t) | u", "two-neg"),
        ("~p & ~q & ~(r & s) | r & t", "all-false"),
        ("(p -> q) & p & ~r", "horn"),
        ("(p | q) & ~p & (~q | ~r) & (~r | ~s | ~t) & (t | u)", "brute"),
    ],
)
def test_auto_picks_solver(write, text, solver):
    code, out, _ = call(["solve", write(text), "--json"])
    payload = json.loads(out)
    assert set(payload) == {"status", "witness", "solver", "fragment"}
    assert payload["solver"] == solver
    assert code == (0 if payload["status"] == "SAT" else 1)


def test_json_unsat(write):
    payload = json.loads(call(["solve", write("p & ~p"), "--json"])[1])
    assert payload["status"] == "UNSAT" and payload["witness"] is None


def test_solver_fragment_mismatch(write):
    code, _, err = call(["solve", write("p | q"), "--solver", "and-only"])
    assert code == 2 and "&" in err
    code, _, err = call(["solve", write("(p | q | r) & (p | s)"), "--solver", "horn"])
    assert code == 2 and "clause" in err


def test_usage_and_input_errors(write, tmp_path):
    assert call([])[0] == 2
    assert call(["solve"])[0] == 2
    assert call(["solve", tmp_path / "missing.pl"])[0] == 2
    code, _, err = call(["parse", write("p &")])
    assert code == 2 and "bytes" in err
    assert call(["solve", write("[a]p")])[0] == 2


def test_limits(write, monkeypatch):
    big = " | ".join(f"(x{i} & y{i})" for i in range(8))
    path = write(f"({big}) & ~z")
    assert call(["classify", path, "--schaefer", "--clause-cap", 10])[0] == 3
    monkeypatch.setenv("PDLFP_CLAUSE_CAP", "10")
    assert call(["classify", path, "--schaefer"])[0] == 3
    monkeypatch.setenv("PDLFP_CLAUSE_CAP", "ten")
    assert call(["classify", path, "--schaefer"])[0] == 2
    monkeypatch.delenv("PDLFP_CLAUSE_CAP")
    wide = write(" & ".join(f"(a{i} | ~b{i})" for i in range(12)))
    assert call(["solve", wide, "--solver", "brute", "--atom-limit", 8])[0] == 3


def test_parse_and_classify(write):
    assert call(["parse", write("# hi\n((p)) & ~ q | [a ;b]r")]) == (0, "p & ~q | [a; b]r\n", "")
    code, out, _ = call(["classify", write("~(p & q)"), "--schaefer"])
    assert code == 0
    assert out == "fragments: AndOnly(1) General(1)\nschaefer: AllFalseSat Horn TwoCnf\n"


def test_xor_solve(write):
    assert call(["xor-solve", write("p + q = 1\nq = 1\n", "s.xor")])[:2] == (0, "SAT q\n")
    assert call(["xor-solve", write("p = 1\np = 0\n", "t.xor")])[:2] == (1, "UNSAT\n")


FRAME = '{"states":["s0","s1"],"props":{"p":["s1"]},"progs":{"a":[["s0","s1"]]}}'


def test_check(write):
    frame = write(FRAME, "k.json")
    assert call(["check", "--frame", frame, "--state", "s0", write("[a]p")])[:2] == (0, "true\n")
    assert call(["check", "--frame", frame, "--state", "s0", write("p")])[:2] == (1, "false\n")
    assert call(["check", "--frame", frame, write("[a*]p")])[:2] == (0, "s1\n")
    assert call(["check", "--frame", frame, "--state", "s5", write("p")])[0] == 2
    bad = write('{"states":["s0"],"props":{"p":["s9"]},"progs":{}}', "bad.json")
    assert call(["check", "--frame", bad, "--state", "s0", write("p")])[0] == 2


def test_nnf(write):
    assert call(["nnf", write("~(p & (q -> r))")])[:2] == (0, "~p | q & ~r\n")
    assert call(["nnf", write("~(p & q)"), "--pdl"])[:2] == (0, "[(p & q)?](__sigma & ~__sigma)\n")
    assert call(["nnf", write("[a]~p")])[0] == 2


def test_bench_csv():
    code, out, _ = call(["bench", "--k-max", 3, "--atoms", 20, "--repeats", 1])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "k,atoms,candidates,micros"
    rows = [tuple(map(float, l.split(","))) for l in lines[1:]]
    assert [(int(k), int(n)) for k, n, _, _ in rows] == [(k, n) for k in (1, 2, 3) for n in (10, 20)]
    assert all(c == 2 ** k for k, _, c, _ in rows)
    assert call(["bench", "--fragment", "or-only"])[0] == 2


def test_deterministic_output(write):
    path = write("(p | q) & ~(r & s) & (r | t)")
    outs = {call(["solve", path, "--json"])[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point(write):
    proc = subprocess.run(
        [sys.executable, "-m", "pdlfp.cli", "solve", str(write("p | q")), "--solver", "brute"],
        capture_output=True, text=True,
    )
    assert (proc.returncode, proc.stdout) == (0, "SAT q\n")
