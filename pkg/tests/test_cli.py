import pytest
from click.testing import CliRunner

from graphbank.cli import main
from graphbank.corpus import Corpus, load, serialize, save
from graphbank.graph import Status, new_sentence
from graphbank.layout import render_graph
from graphbank.samples import control_sentence
from graphbank.tagger import load_model


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def corpus_file(tmp_path, corpus):
    path = tmp_path / "demo.asc"
    save(corpus, str(path))
    return str(path)


@pytest.fixture
def big_corpus_file(tmp_path, tagsets):
    sentences = []
    for i in range(12):
        s = control_sentence(tagsets)
        s.sentence_id = f"s{i}"
        sentences.append(s)
    path = tmp_path / "big.asc"
    save(Corpus("big", tagsets, sentences), str(path))
    return str(path)


# --- import / export ------------------------------------------------------

def test_import_reports_counts(runner, corpus_file):
    result = runner.invoke(main, ["import", corpus_file])
    assert result.exit_code == 0
    assert "imported 4 sentences (4 complete)" in result.output


def test_import_canonicalizes_in_place(runner, tmp_path, corpus_file):
    # leading file comments are not part of the data model and get dropped
    original = open(corpus_file, encoding="utf-8").read()
    messy = tmp_path / "messy.asc"
    messy.write_text("%% scratch note\n" + original, encoding="utf-8")
    result = runner.invoke(main, ["import", str(messy)])
    assert result.exit_code == 0
    assert messy.read_text(encoding="utf-8") == original


def test_import_out_leaves_source_alone(runner, tmp_path, corpus_file):
    out = tmp_path / "copy.asc"
    before = open(corpus_file, "rb").read()
    result = runner.invoke(main, ["import", corpus_file, "--out", str(out)])
    assert result.exit_code == 0
    assert open(corpus_file, "rb").read() == before
    assert out.read_bytes() == before


def test_import_parse_error(runner, tmp_path):
    bad = tmp_path / "bad.asc"
    bad.write_text("#FORMAT 99\n", encoding="utf-8")
    result = runner.invoke(main, ["import", str(bad)])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "line 1" in result.output


def test_export_stdout_is_canonical(runner, corpus_file, corpus):
    result = runner.invoke(main, ["export", corpus_file])
    assert result.exit_code == 0
    assert result.output == serialize(corpus)


def test_export_to_file(runner, tmp_path, corpus_file, corpus):
    out = tmp_path / "out.asc"
    result = runner.invoke(main, ["export", corpus_file, "--out", str(out)])
    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8") == serialize(corpus)


# --- validate -------------------------------------------------------------

def test_validate_clean(runner, corpus_file):
    result = runner.invoke(main, ["validate", corpus_file])
    assert result.exit_code == 0
    assert result.output == "0 errors, 0 warnings\n"


def test_validate_warnings_exit_zero(runner, tmp_path, tagsets):
    bare = new_sentence("bare", [("a", "NN"), ("b", "NN")], tagsets)
    path = tmp_path / "w.asc"
    save(Corpus("w", tagsets, [bare]), str(path))
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[-1] == "0 errors, 2 warnings"
    assert lines[0].startswith("bare\twarning\tunattached-token\t")


def test_validate_rejects_hard_errors_at_load(runner, tmp_path, corpus_file):
    # files holding error-severity sentences never parse, so the check
    # surfaces as a load failure naming the offending rule
    text = open(corpus_file, encoding="utf-8").read()
    block = (
        "#BOS broken in-progress\n"
        "a\tNN\t--\t0\n"
        "#500\tNP\t--\t0\n"
        "#EOS broken\n"
    )
    path = tmp_path / "e.asc"
    path.write_text(text + block, encoding="utf-8")
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "node 500 has no children" in result.output


# --- train ----------------------------------------------------------------

def test_train_writes_model(runner, tmp_path, corpus_file):
    model_path = tmp_path / "m.json"
    result = runner.invoke(
        main, ["train", corpus_file, "--model-out", str(model_path), "--theta", "0.8"]
    )
    assert result.exit_code == 0
    assert "trained on 4 sentences" in result.output
    assert "threshold 0.8" in result.output
    model = load_model(str(model_path))
    assert model.threshold == 0.8
    assert "NP" in model.categories


def test_train_flag_conflict(runner, tmp_path, corpus_file):
    result = runner.invoke(
        main,
        ["train", corpus_file, "--model-out", str(tmp_path / "m.json"),
         "--theta", "0.8", "--calibrate-target", "0.9"],
    )
    assert result.exit_code == 1
    assert "exclusive" in result.output


def test_train_needs_complete_sentences(runner, tmp_path, tagsets):
    bare = new_sentence("bare", [("a", "NN")], tagsets)
    path = tmp_path / "w.asc"
    save(Corpus("w", tagsets, [bare]), str(path))
    result = runner.invoke(
        main, ["train", str(path), "--model-out", str(tmp_path / "m.json")]
    )
    assert result.exit_code == 1
    assert "no complete sentences" in result.output


def test_train_calibrates(runner, tmp_path, big_corpus_file):
    model_path = tmp_path / "m.json"
    result = runner.invoke(
        main,
        ["train", big_corpus_file, "--model-out", str(model_path),
         "--calibrate-target", "0.9", "--seed", "3"],
    )
    assert result.exit_code == 0, result.output
    assert "calibrated threshold:" in result.output
    model = load_model(str(model_path))
    assert 0.0 <= model.threshold <= 1.0


# --- eval -----------------------------------------------------------------

def test_eval_output_shape(runner, tmp_path, big_corpus_file):
    report_path = tmp_path / "report.tsv"
    result = runner.invoke(
        main,
        ["eval", big_corpus_file, "--repetitions", "3", "--seed", "1",
         "--report-out", str(report_path)],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    # header, three repetition rows, mean row, summary line
    assert len(lines) == 6
    assert lines[0].startswith("rep\ttrain\ttest\t")
    assert lines[4].startswith("mean\t")
    assert report_path.read_text(encoding="utf-8") == "\n".join(lines[:5]) + "\n"


def test_eval_small_corpus_fails(runner, corpus_file):
    result = runner.invoke(main, ["eval", corpus_file])
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_eval_deterministic(runner, big_corpus_file):
    args = ["eval", big_corpus_file, "--repetitions", "2", "--seed", "5"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


# --- suggest --------------------------------------------------------------

@pytest.fixture
def model_file(runner, tmp_path, corpus_file):
    path = tmp_path / "model.json"
    result = runner.invoke(main, ["train", corpus_file, "--model-out", str(path)])
    assert result.exit_code == 0
    return str(path)


def test_suggest_level1(runner, corpus_file, model_file):
    result = runner.invoke(
        main,
        ["suggest", corpus_file, "control", "--model", model_file,
         "--level", "1", "--children", "4,5", "--category", "VP"],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "VP\t4,5"
    assert len(lines) == 3
    for line in lines[1:]:
        assert "\treliable\t" in line or "\tconfirm\t" in line


def test_suggest_no_proposals(runner, corpus_file, model_file):
    # complete sentence: the chunker finds no unattached span to propose
    result = runner.invoke(
        main, ["suggest", corpus_file, "control", "--model", model_file, "--level", "3"]
    )
    assert result.exit_code == 0
    assert result.output == "no proposals\n"


def test_suggest_unknown_sentence(runner, corpus_file, model_file):
    result = runner.invoke(
        main, ["suggest", corpus_file, "missing", "--model", model_file]
    )
    assert result.exit_code == 1
    assert "missing" in result.output


def test_suggest_level_range_enforced(runner, corpus_file, model_file):
    result = runner.invoke(
        main, ["suggest", corpus_file, "control", "--model", model_file, "--level", "7"]
    )
    assert result.exit_code == 2


# --- render ---------------------------------------------------------------

def test_render_stdout(runner, corpus_file, control):
    result = runner.invoke(main, ["render", corpus_file, "control"])
    assert result.exit_code == 0
    assert result.output == render_graph(control)


def test_render_to_file(runner, tmp_path, corpus_file, control):
    out = tmp_path / "control.svg"
    result = runner.invoke(main, ["render", corpus_file, "control", "--out", str(out)])
    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8") == render_graph(control)


def test_render_unknown_sentence(runner, corpus_file):
    result = runner.invoke(main, ["render", corpus_file, "missing"])
    assert result.exit_code == 1


# --- convert --------------------------------------------------------------

def test_convert_writes_trees_and_traces(runner, tmp_path, corpus_file):
    out = tmp_path / "flat.asc"
    result = runner.invoke(main, ["convert", corpus_file, "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "converted 4 sentences (0 skipped), 4 traces" in result.output

    converted = load(str(out))
    assert converted.ids() == ["extraction", "extraposition", "control", "coordination"]
    for sentence in converted.sentences:
        assert sentence.status is Status.COMPLETE

    traces = (tmp_path / "flat.asc.traces").read_text(encoding="utf-8").splitlines()
    assert traces[0] == "sentence\tchild\torigin"
    assert len(traces) == 5
    assert sum(1 for t in traces[1:] if t.startswith("extraction\t")) == 3
    assert sum(1 for t in traces[1:] if t.startswith("extraposition\t")) == 1


def test_convert_custom_trace_path(runner, tmp_path, corpus_file):
    out = tmp_path / "flat.asc"
    tr = tmp_path / "t.tsv"
    result = runner.invoke(
        main, ["convert", corpus_file, "--out", str(out), "--traces", str(tr)]
    )
    assert result.exit_code == 0
    assert tr.exists()
    assert not (tmp_path / "flat.asc.traces").exists()


def test_convert_skips_incomplete(runner, tmp_path, tagsets, corpus):
    bare = new_sentence("bare", [("a", "NN")], tagsets)
    mixed = Corpus("demo", corpus.tagsets, corpus.sentences + [bare])
    src = tmp_path / "mixed.asc"
    save(mixed, str(src))
    out = tmp_path / "flat.asc"
    result = runner.invoke(main, ["convert", str(src), "--out", str(out)])
    assert result.exit_code == 0
    assert "converted 4 sentences (1 skipped)" in result.output
    assert "bare" not in load(str(out)).ids()
