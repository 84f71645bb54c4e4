import json

import pytest

from tatemodels import cache
from tatemodels.cli import corpus_names, load_job, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_corpus_is_bundled():
    assert set(corpus_names()) >= {"ci_f3", "qci_f2", "qci_f3", "nonqci_f2_triangle"}


def test_closure_table(capsys):
    code, out, _ = run(capsys, "closure", "qci_f2")
    assert code == 0
    assert "y1_1  exterior  [1,1]" in out and "y2_1  divided   [2,2]" in out


def test_check_all_on_ci(capsys):
    code, out, _ = run(capsys, "check", "all", "ci_f3")
    assert code == 0
    assert out.count("pass") == 6


def test_structured_output_is_deterministic(capsys):
    a = run(capsys, "deviations", "qci_f2", "--format", "structured")[1]
    b = run(capsys, "deviations", "qci_f2", "--format", "structured")[1]
    assert a == b
    recs = [json.loads(line) for line in a.splitlines()]
    assert recs[0]["format"] == "tatemodels-report"
    assert all("window" in r for r in recs if r.get("kind") == "deviation")
    eps = {r["i"]: r["eps"] for r in recs if r.get("kind") == "deviation"}
    assert [i for i, e in eps.items() if e] == [2, 3, 5, 6, 9, 10]


def test_inhomogeneous_relation_exits_2(tmp_path, capsys):
    doc = {"p": 2, "generators": [["x", 1], ["y", 1]], "relations": [[[1, [2, 0]]], [[1, [2, 0]], [1, [0, 1]]]], "kernel": []}
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "closure", str(path))
    assert code == 2 and "relation 1" in err


@pytest.mark.parametrize(
    "doc",
    [
        {"p": 2, "generators": [["x", 1]], "relations": [], "kernel": [], "bogus": 1},
        {"p": 2, "generators": [["x", 1]], "relations": [[[1, [1, 1]]]], "kernel": []},
        {"p": 4, "generators": [["x", 1]], "relations": [], "kernel": []},
        {"p": 2, "generators": [], "relations": [], "kernel": []},
    ],
)
def test_schema_errors_exit_2(tmp_path, capsys, doc):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "closure", str(path))[0] == 2


def test_unknown_job_and_bad_flags(capsys):
    assert run(capsys, "closure", "no_such_example")[0] == 2
    assert run(capsys, "closure", "qci_f2", "--window", "nine")[0] == 2
    assert run(capsys, "closure", "ci_f3", "--seed-order", "0,0")[0] == 2


def test_window_too_small_exits_3(capsys):
    code, _, err = run(capsys, "closure", "qci_f2", "--window", "9,3")
    assert code == 3 and "raise D" in err


def test_seed_order_does_not_change_output(capsys):
    a = run(capsys, "closure", "ci_f3", "--format", "structured")[1]
    b = run(capsys, "closure", "ci_f3", "--format", "structured", "--seed-order", "1,0")[1]
    assert a == b


def test_all_commands_run(capsys):
    for cmd in ("model", "compare", "pi", "classify", "betti", "poincare"):
        assert run(capsys, cmd, "qci_f3")[0] == 0, cmd


def test_run_uses_document_commands(capsys):
    code, out, _ = run(capsys, "run", "qci_f2")
    assert code == 0 and "== check all ==" in out


def test_cache_round_trip(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    fresh = run(capsys, "compare", "qci_f2", "--format", "structured", "--save-cache", str(path))[1]
    loaded = run(capsys, "compare", "qci_f2", "--format", "structured", "--load-cache", str(path))[1]
    assert fresh == loaded
    got = cache.load_cache(path)
    again = tmp_path / "d.jsonl"
    cache.save_cache(again, got.build, got.gamma, got.closure)
    assert again.read_text() == path.read_text()


def test_cache_rejections(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    run(capsys, "closure", "qci_f2", "--save-cache", str(path))
    assert run(capsys, "closure", "ci_f3", "--load-cache", str(path))[0] == 2
    lines = path.read_text().splitlines()
    (tmp_path / "t.jsonl").write_text("\n".join(lines[:-1]))
    with pytest.raises(cache.CacheError, match="truncated"):
        cache.load_cache(tmp_path / "t.jsonl")
    (tmp_path / "g.jsonl").write_text(lines[0] + "\n{not json\n")
    with pytest.raises(cache.CacheError):
        cache.load_cache(tmp_path / "g.jsonl")
    head = json.loads(lines[0])
    head["version"] = 99
    (tmp_path / "v.jsonl").write_text(json.dumps(head) + "\n" + "\n".join(lines[1:]))
    with pytest.raises(cache.CacheError, match="version"):
        cache.load_cache(tmp_path / "v.jsonl")


def test_examples_listing(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0 and "qci_f2" in out


def test_load_job_validates_exponent_length(tmp_path):
    path = tmp_path / "j.json"
    path.write_text(json.dumps({"p": 2, "generators": [["x", 1]], "relations": [], "kernel": [[[1, [1, 0]]]]}))
    from tatemodels.cli import InputError

    with pytest.raises(InputError, match="kernel/0"):
        load_job(str(path))
