import subprocess
import sys

import pytest

from scriptmine.cli import main

from .conftest import TOY_MANIFEST

TOY = str(TOY_MANIFEST)


def run(*args):
    return main(list(args))


class TestCommands:
    def test_ingest(self, tmp_path, capsys):
        assert run("ingest", "--manifest", TOY, "--out", str(tmp_path)) == 0
        assert (tmp_path / "corpus.tsv").is_file()
        out = capsys.readouterr().out
        assert "12 documents" in out and "3 books" in out

    def test_preprocess(self, tmp_path):
        assert run("preprocess", "--manifest", TOY, "--out", str(tmp_path)) == 0
        assert (tmp_path / "tokens.tsv").is_file()
        assert (tmp_path / "frequency.csv").read_text().startswith("token,count,ratio")
        assert (tmp_path / "pos.csv").read_text().startswith("tag,count")

    def test_dtm(self, tmp_path, capsys):
        assert run("dtm", "--manifest", TOY, "--out", str(tmp_path)) == 0
        for name in ("counts.mtx", "counts.rows.csv", "counts.vocab.txt", "weights.mtx"):
            assert (tmp_path / name).is_file()
        assert "12 x " in capsys.readouterr().out

    def test_dist_single_measure(self, tmp_path):
        code = run("dist", "--manifest", TOY, "--out", str(tmp_path), "--measure", "euclidean")
        assert code == 0
        assert (tmp_path / "dist_euclidean_counts.csv").is_file()
        assert (tmp_path / "dist_euclidean_counts.svg").is_file()
        assert "euclidean:" in (tmp_path / "dist_euclidean_counts.metric.txt").read_text()
        assert not (tmp_path / "dist_cosine_counts.csv").exists()

    def test_linkage(self, tmp_path):
        code = run(
            "linkage", "--manifest", TOY, "--out", str(tmp_path),
            "--measure", "manhattan", "--linkage", "mean",
        )
        assert code == 0
        text = (tmp_path / "book_manhattan_mean_counts.csv").read_text()
        assert text.splitlines()[0] == ",Meadow,Forge,Harbor"

    def test_corr(self, tmp_path):
        assert run("corr", "--manifest", TOY, "--out", str(tmp_path)) == 0
        header = (tmp_path / "correlation.csv").read_text().splitlines()[0]
        assert header == ",euclidean,manhattan,jaccard,cosine"

    def test_train_and_model_roundtrip(self, tmp_path):
        assert run(
            "train", "--manifest", TOY, "--out", str(tmp_path), "--model", "mnb", "--alpha", "0.5"
        ) == 0
        from scriptmine.classify import load_model

        model = load_model(tmp_path / "model_mnb.txt")
        assert model.smoothing == 0.5
        assert (tmp_path / "train_scores_mnb.csv").is_file()

    def test_eval_outputs(self, tmp_path):
        code = run(
            "eval", "--manifest", TOY, "--out", str(tmp_path),
            "--model", "mnb", "--folds", "3", "--seed", "42",
        )
        assert code == 0
        for name in ("folds.csv", "eval_scores_mnb.csv", "confusion_mnb.csv", "metrics_mnb.txt"):
            assert (tmp_path / name).is_file()

    def test_tfidf_features(self, tmp_path):
        code = run(
            "eval", "--manifest", TOY, "--out", str(tmp_path),
            "--model", "knn", "--k", "1", "--folds", "3", "--features", "tfidf",
        )
        assert code == 0
        assert "features: tfidf" in (tmp_path / "metrics_knn.txt").read_text()

    def test_report(self, tmp_path):
        code = run("report", "--manifest", TOY, "--out", str(tmp_path), "--folds", "3")
        assert code == 0
        report = tmp_path / "report"
        expected = ["summary.txt", "comparison.csv", "correlation.csv", "dtm_shapes.txt",
                    "frequency.csv", "pos.csv"]
        for name in expected:
            assert (report / name).is_file(), name
        for measure in ("euclidean", "manhattan", "jaccard", "cosine"):
            assert (report / f"heatmap_chapters_{measure}.svg").is_file()
            for linkage in ("min", "max", "mean", "median"):
                assert (report / f"book_{measure}_{linkage}.csv").is_file()
        for kind in ("mnb", "knn", "svm", "rf"):
            assert (report / f"confusion_{kind}.csv").is_file()
        lines = (report / "comparison.csv").read_text().splitlines()
        assert lines[0] == "model,best_params,cv_accuracy"
        assert len(lines) == 5


class TestDeterminism:
    def test_eval_byte_identical_across_runs(self, tmp_path):
        args = ["--manifest", TOY, "--model", "mnb", "--folds", "3", "--seed", "42"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert run("eval", "--out", str(out_a), *args) == 0
        assert run("eval", "--out", str(out_b), *args) == 0
        for name in ("folds.csv", "eval_scores_mnb.csv", "confusion_mnb.csv", "metrics_mnb.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    def test_cached_rerun_skips_and_preserves(self, tmp_path, capsys):
        args = ["--manifest", TOY, "--out", str(tmp_path)]
        assert run("preprocess", *args) == 0
        before = (tmp_path / "frequency.csv").read_bytes()
        capsys.readouterr()
        assert run("preprocess", *args) == 0
        assert "cached" in capsys.readouterr().out
        assert (tmp_path / "frequency.csv").read_bytes() == before


class TestConfigFile:
    def test_config_and_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            f"corpus.manifest = {TOY}\n"
            f"output.dir = {tmp_path / 'from_config'}\n"
            "evaluate.folds = 3\n"
            "evaluate.model = mnb\n"
            "model.alpha = 0.5\n"
        )
        assert run("eval", "--config", str(cfg)) == 0
        assert (tmp_path / "from_config" / "metrics_mnb.txt").is_file()
        # flag overrides the config file value
        assert run("eval", "--config", str(cfg), "--out", str(tmp_path / "flag")) == 0
        assert (tmp_path / "flag" / "metrics_mnb.txt").is_file()

    def test_set_flag_overrides_any_key(self, tmp_path):
        code = run(
            "eval", "--manifest", TOY, "--out", str(tmp_path), "--model", "knn",
            "--folds", "3", "--set", "model.k=1", "--set", "features.mode=tfidf",
        )
        assert code == 0
        assert "features: tfidf" in (tmp_path / "metrics_knn.txt").read_text()

    def test_set_knn_measure_string(self, tmp_path):
        code = run(
            "eval", "--manifest", TOY, "--out", str(tmp_path), "--model", "knn",
            "--folds", "3", "--set", "model.k=1", "--set", "model.measure=cosine",
        )
        assert code == 0

    def test_set_flag_bad_syntax(self, tmp_path):
        assert run("ingest", "--manifest", TOY, "--out", str(tmp_path), "--set", "oops") == 2

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("corpus.shelf = x\n")
        assert run("ingest", "--config", str(cfg)) == 2


class TestExitCodes:
    def test_missing_manifest_is_config_error(self, tmp_path):
        assert run("ingest", "--manifest", str(tmp_path / "nope.txt"), "--out", str(tmp_path)) == 2

    def test_no_manifest_at_all(self, tmp_path):
        assert run("ingest", "--out", str(tmp_path)) == 2

    def test_data_error(self, tmp_path):
        manifest = tmp_path / "m.txt"
        manifest.write_text("[book]\nname = B\npath = gone.txt\nchapter_rule = per_file\n")
        assert run("ingest", "--manifest", str(manifest), "--out", str(tmp_path)) == 3

    def test_bad_flag_value(self, tmp_path):
        assert run(
            "eval", "--manifest", TOY, "--out", str(tmp_path), "--folds", "1"
        ) == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["ingest", "--frobnicate"])
        assert exc.value.code == 2

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "scriptmine.cli", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "scriptmine" in proc.stdout
