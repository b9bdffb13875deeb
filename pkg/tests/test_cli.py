import json
from pathlib import Path

import pytest

from posalign.cli import main
from posalign.metrics import ErrorCounts
from posalign.pipeline import ConfigError, RunConfig, format_json, format_pretty, format_tsv, run

DATA = Path(__file__).parent / "data"
WORKED = ["--ref", str(DATA / "worked_ref.trn"), "--hyp", str(DATA / "worked_hyp.trn")]
SAMPLE = [
    "--ref",
    str(DATA / "sample_ref.trn"),
    "--hyp",
    str(DATA / "sample_hyp.trn"),
    "--ref-tags",
    str(DATA / "sample_ref_tags.tsv"),
    "--hyp-tags",
    str(DATA / "sample_hyp_tags.conllu"),
]


def run_cli(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_worked_example_json(capsys):
    code, out = run_cli(WORKED + ["--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"meta", "corpus", "utterances", "pos_report", "weights"}
    assert doc["corpus"]["wer"] == 50.0
    assert doc["meta"]["unicode_version"]
    (utt,) = doc["utterances"]
    assert [p["op"] for p in utt["alignment"]] == ["=", "D", "=", "I", "="]


def test_worked_example_pretty(capsys):
    code, out = run_cli(WORKED, capsys)
    lines = out.splitlines()
    assert code == 0
    assert "REF:  he is going ** home" in lines
    assert "HYP:  he ** going to home" in lines
    assert "WER: 50.0%" in out


def test_pos_without_tags_is_config_error(capsys):
    assert main(WORKED + ["--pos"]) == 2


@pytest.mark.parametrize(
    "extra",
    [["--costs", "1,1"], ["--costs", "0,1,1"], ["--delta", "-1"], ["--weights-out", "x.json"], ["--hyp-tags", "nope.tsv"]],
)
def test_config_errors(extra):
    assert main(WORKED + extra) == 2


def test_missing_file():
    assert main(["--ref", "does-not-exist.trn", "--hyp", "also-missing.trn"]) == 2


def test_sample_corpus_pos(capsys):
    code, out = run_cli(SAMPLE + ["--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    records = {u["id"]: u["pos_errors"] for u in doc["utterances"]}
    assert records["t1"] == [
        {"ref": None, "hyp": "don't", "op": "I", "tag": "verb"},
        {"ref": "dumpy", "hyp": "be", "op": "S", "tag": "propn"},
    ]
    assert {"ref": "،", "hyp": None, "op": "D", "tag": "punc"} in records["ar1"]
    assert doc["meta"]["notes"], "right-to-left note expected"


def test_report_round_trip(capsys):
    _, out = run_cli(SAMPLE + ["--format", "json"], capsys)
    doc = json.loads(out)
    for key in ("counts", "counts_pre_merge", "char_counts", "char_counts_pre_merge"):
        summed = ErrorCounts.total(ErrorCounts(**u[key]) for u in doc["utterances"])
        assert summed.to_dict() == doc["corpus"][key]
    d, s, i = (sum(r[k] for r in doc["pos_report"]["rows"]) for k in "DSI")
    c = doc["corpus"]["counts"]
    assert (d, s, i) == (c["dels"], c["subs"], c["ins"])


def test_tsv(capsys):
    code, out = run_cli(SAMPLE + ["--format", "tsv"], capsys)
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0] == ["tag", "count", "D", "S", "I", "total_pct"]
    by_tag = {r[0]: r for r in rows[1:]}
    assert by_tag["punc"] == ["punc", "1", "1", "0", "0", "100.00"]
    code, out = run_cli(
        WORKED
        + ["--ref-tags", str(DATA / "worked_ref_tags.tsv"), "--hyp-tags", str(DATA / "worked_hyp_tags.tsv")]
        + ["--format", "tsv"],
        capsys,
    )
    assert out.splitlines()[-1] == "adp\t0\t0\t0\t1\tNA"


def test_formats_project_one_report():
    config = RunConfig(
        str(DATA / "sample_ref.trn"),
        str(DATA / "sample_hyp.trn"),
        str(DATA / "sample_ref_tags.tsv"),
        str(DATA / "sample_hyp_tags.conllu"),
    )
    report = run(config)
    doc = json.loads(format_json(report))
    tsv = format_tsv(report).splitlines()[1:]
    assert [line.split("\t")[0] for line in tsv] == [r["tag"] for r in doc["pos_report"]["rows"]]
    pretty = format_pretty(report)
    for u in doc["utterances"]:
        assert u["rendered"]["ref"] in pretty


def test_weights_out(tmp_path, capsys):
    target = tmp_path / "weights.json"
    code, out = run_cli(SAMPLE + ["--weights", "arabic", "--weights-out", str(target), "--format", "json"], capsys)
    assert code == 0
    weights = json.loads(target.read_text(encoding="utf-8"))
    assert weights == json.loads(out)["weights"]
    assert weights["t1"] == [1.0, 1.0, 8.0, 1.5]
    assert weights["ar1"] == [1.0, 8.0, 2.0, 1.0, 8.0, 2.0]


def test_weights_without_tags(tmp_path, capsys):
    code, out = run_cli(WORKED + ["--weights", "tamil", "--format", "json"], capsys)
    assert json.loads(out)["weights"] == {"utt1": [1.0, 1.0, 1.0, 1.0]}


def test_tag_mismatch_is_reported(tmp_path, capsys):
    tags = tmp_path / "tags.tsv"
    tags.write_text("utt1\t1\the\tpron\nutt1\t2\twas\taux\nutt1\t3\tgoing\tverb\nutt1\t4\thome\tnoun\n", encoding="utf-8")
    code, out = run_cli(WORKED + ["--ref-tags", str(tags), "--format", "json"], capsys)
    assert code == 1
    (err,) = json.loads(out)["meta"]["errors"]
    assert err["utterance"] == "utt1" and "token 2" in err["message"]


def test_missing_insertion_tags_reported(capsys):
    code, out = run_cli(WORKED + ["--ref-tags", str(DATA / "worked_ref_tags.tsv"), "--format", "json"], capsys)
    assert code == 1
    assert json.loads(out)["meta"]["errors"][0]["stage"] == "pos"


def test_unknown_hypothesis_id(tmp_path):
    hyp = tmp_path / "h.trn"
    hyp.write_text("x (other)\n", encoding="utf-8")
    assert main(["--ref", str(DATA / "worked_ref.trn"), "--hyp", str(hyp)]) == 1


def test_missing_hypothesis(tmp_path, capsys):
    ref = tmp_path / "r.trn"
    ref.write_text("a b (u1)\nc (u2)\n", encoding="utf-8")
    hyp = tmp_path / "h.trn"
    hyp.write_text("a b (u1)\n", encoding="utf-8")
    code, out = run_cli(["--ref", str(ref), "--hyp", str(hyp), "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["meta"]["missing_hypotheses"] == ["u2"]
    assert doc["corpus"]["counts"]["dels"] == 1


def test_strip_punct_and_lowercase(tmp_path, capsys):
    ref = tmp_path / "r.trn"
    ref.write_text("Hello, world. (u)\n", encoding="utf-8")
    hyp = tmp_path / "h.trn"
    hyp.write_text("hello world (u)\n", encoding="utf-8")
    base = ["--ref", str(ref), "--hyp", str(hyp), "--format", "json"]
    _, out = run_cli(base, capsys)
    assert json.loads(out)["corpus"]["wer"] == 100.0
    _, out = run_cli(base + ["--strip-punct", "--lowercase"], capsys)
    assert json.loads(out)["corpus"]["wer"] == 0.0


def test_strip_punct_with_tags(capsys):
    code, out = run_cli(SAMPLE + ["--strip-punct", "--format", "json"], capsys)
    assert code == 0
    ar1 = next(u for u in json.loads(out)["utterances"] if u["id"] == "ar1")
    assert [p["op"] for p in ar1["alignment"]] == ["S", "=", "=", "=", "="]


def test_no_merge_and_costs(tmp_path, capsys):
    ref = tmp_path / "r.trn"
    ref.write_text("x (u)\n", encoding="utf-8")
    hyp = tmp_path / "h.trn"
    hyp.write_text("y (u)\n", encoding="utf-8")
    base = ["--ref", str(ref), "--hyp", str(hyp), "--costs", "4,1,1", "--format", "json"]
    _, out = run_cli(base + ["--no-merge"], capsys)
    doc = json.loads(out)
    assert [p["op"] for p in doc["utterances"][0]["alignment"]] == ["I", "D"]
    _, out = run_cli(base, capsys)
    doc = json.loads(out)
    assert [p["op"] for p in doc["utterances"][0]["alignment"]] == ["S"]
    assert doc["corpus"]["wer"] == 100.0 and doc["corpus"]["wer_pre_merge"] == 200.0


def test_repair_sclite(tmp_path, capsys):
    ref = tmp_path / "r.trn"
    ref.write_text("humpy ***** dumpy fell downstairs (u)\n", encoding="utf-8")
    hyp = tmp_path / "h.trn"
    hyp.write_text("humpy don't be fell downstairs (u)\n", encoding="utf-8")
    _, out = run_cli(["--ref", str(ref), "--hyp", str(hyp), "--repair-sclite", "--format", "json"], capsys)
    assert [p["op"] for p in json.loads(out)["utterances"][0]["alignment"]] == ["=", "I", "S", "=", "="]


def test_plain_inputs(tmp_path, capsys):
    ref = tmp_path / "r.txt"
    ref.write_text("a b\nc\n", encoding="utf-8")
    hyp = tmp_path / "h.txt"
    hyp.write_text("a b\nd\n", encoding="utf-8")
    _, out = run_cli(["--ref", str(ref), "--hyp", str(hyp), "--plain", "--format", "json"], capsys)
    doc = json.loads(out)
    assert [u["id"] for u in doc["utterances"]] == ["line-1", "line-2"]
    assert doc["corpus"]["ser"] == 50.0


def test_out_file(tmp_path):
    target = tmp_path / "report.txt"
    assert main(WORKED + ["--out", str(target)]) == 0
    assert "he is going ** home" in target.read_text(encoding="utf-8")


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(str(DATA / "worked_ref.trn"), str(DATA / "worked_hyp.trn"), output_format="xml").validate()


def test_empty_corpus_rates_are_null(tmp_path, capsys):
    ref = tmp_path / "r.trn"
    ref.write_text("(u)\n", encoding="utf-8")
    _, out = run_cli(["--ref", str(ref), "--hyp", str(ref), "--format", "json"], capsys)
    assert json.loads(out)["corpus"]["wer"] is None
    _, out = run_cli(["--ref", str(ref), "--hyp", str(ref)], capsys)
    assert "WER: n/a" in out
