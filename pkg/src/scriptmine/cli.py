"""Command-line pipeline: ingest -> preprocess -> dtm -> dist/linkage/corr ->
train/eval -> report.

Commands are restartable: each artifact in the output directory carries a
``.key`` sidecar holding a content hash of its inputs and config; a command
whose artifact is fresh is skipped (use --force to recompute). All outputs
are pure functions of (config, input files), so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .atomic import write_text as _atomic_write
from .classify import (
    dataset_from_matrix,
    save_model,
    train_knn,
    train_mnb,
    train_rf,
    train_svm,
)
from .config import RunConfig, build_grids, config_from_file, parse_config_file
from .distance import (
    book_linkage,
    measure_correlation,
    metric_check,
    pairwise,
    write_book_distance_csv,
    write_correlation_csv,
    write_distance_csv,
)
from .dtm import build_dtm, load_dtm, load_weights, save_dtm, save_weights, slice_book, tfidf
from .errors import ConfigError, DataError, ScriptmineError
from .evaluate import (
    benchmark_all,
    cross_validate,
    make_folds,
    per_class_accuracy,
    write_comparison_csv,
    write_confusion_csv,
    write_folds_csv,
    write_scores_csv,
)
from .ingest import load_cache, load_corpus, parse_manifest, save_cache
from .preprocess import (
    PreprocessConfig,
    frequency_report,
    load_stopwords,
    pipeline,
    pos_counts,
    pos_tag,
    write_frequency_csv,
    write_pos_csv,
)
from .svg import render_heatmap


# --- artifact cache helpers ----------------------------------------------

def _digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        data = part if isinstance(part, bytes) else str(part).encode("utf-8")
        h.update(len(data).to_bytes(8, "little"))
        h.update(data)
    return h.hexdigest()


def _fresh(cfg: RunConfig, artifact: Path, key: str) -> bool:
    sidecar = artifact.with_name(artifact.name + ".key")
    return (
        not cfg.force
        and artifact.exists()
        and sidecar.exists()
        and sidecar.read_text("utf-8").strip() == key
    )


def _mark(artifact: Path, key: str) -> None:
    artifact.with_name(artifact.name + ".key").write_text(key + "\n", "utf-8")


def _corpus_key(cfg: RunConfig) -> str:
    entries = parse_manifest(cfg.manifest)
    root = Path(cfg.manifest).parent
    parts: list = [Path(cfg.manifest).read_bytes()]
    for entry in entries:
        path = root / entry.path
        files = (
            sorted(p for p in path.iterdir() if p.is_file() and not p.name.startswith("."))
            if path.is_dir()
            else [path]
        )
        for f in files:
            if f.is_file():
                parts.append(str(f))
                parts.append(f.read_bytes())
    return _digest(*parts)


def _pp_config(cfg: RunConfig) -> PreprocessConfig:
    return PreprocessConfig(
        stopwords=load_stopwords(cfg.stopwords),
        remove_noise=cfg.remove_noise,
        stem=cfg.stem,
    )


def _pp_key(cfg: RunConfig) -> str:
    pp = _pp_config(cfg)
    return _digest(
        _corpus_key(cfg), ",".join(sorted(pp.stopwords)), pp.remove_noise, pp.stem
    )


def _get_corpus(cfg: RunConfig):
    if cfg.manifest is None:
        raise ConfigError("no corpus manifest given (flag --manifest or corpus.manifest)")
    cache = cfg.out / "corpus.tsv"
    key = _corpus_key(cfg)
    if _fresh(cfg, cache, key):
        return load_cache(cache)
    corpus = load_corpus(Path(cfg.manifest).parent, cfg.manifest)
    cfg.out.mkdir(parents=True, exist_ok=True)
    save_cache(corpus, cache)
    _mark(cache, key)
    return corpus


def _get_dtm(cfg: RunConfig):
    counts_prefix = cfg.out / "counts"
    weights_prefix = cfg.out / "weights"
    key = _pp_key(cfg)
    if _fresh(cfg, counts_prefix.with_suffix(".mtx"), key) and _fresh(
        cfg, weights_prefix.with_suffix(".mtx"), key
    ):
        return load_dtm(counts_prefix), load_weights(weights_prefix)
    corpus = _get_corpus(cfg)
    dtm = build_dtm(corpus, _pp_config(cfg))
    weights = tfidf(dtm)
    save_dtm(dtm, counts_prefix)
    save_weights(weights, weights_prefix)
    _mark(counts_prefix.with_suffix(".mtx"), key)
    _mark(weights_prefix.with_suffix(".mtx"), key)
    return dtm, weights


def _feature_matrix(cfg: RunConfig):
    dtm, weights = _get_dtm(cfg)
    return dtm, (weights if cfg.features == "tfidf" else dtm)


def _doc_labels(matrix) -> list[str]:
    return [f"{book.name}:{chapter}" for book, chapter in matrix.rows]


# --- commands -------------------------------------------------------------

def cmd_ingest(cfg: RunConfig) -> int:
    corpus = _get_corpus(cfg)
    sizes = corpus.book_sizes()
    print(f"corpus: {corpus.n} documents, {len(corpus.books)} books -> {cfg.out / 'corpus.tsv'}")
    for book in corpus.books:
        print(f"  [{book.id}] {book.name}: {sizes[book.id]} chapters")
    return 0


def cmd_preprocess(cfg: RunConfig) -> int:
    corpus = _get_corpus(cfg)
    pp = _pp_config(cfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    key = _digest(_pp_key(cfg), cfg.top)
    tokens_path = cfg.out / "tokens.tsv"
    if not _fresh(cfg, tokens_path, key):
        token_lists = [pipeline(doc, pp) for doc in corpus.documents]
        _atomic_write(
            tokens_path,
            "".join(
                f"{doc.book.id}\t{doc.chapter_index}\t{' '.join(toks)}\n"
                for doc, toks in zip(corpus.documents, token_lists)
            ),
        )
        all_tokens = [t for toks in token_lists for t in toks]
        raw_count = sum(len(pipeline(doc, PreprocessConfig(pp.stopwords, False, False))) for doc in corpus.documents)
        report = frequency_report(all_tokens, cfg.top)
        write_frequency_csv(report, cfg.out / "frequency.csv")
        write_pos_csv(pos_counts(pos_tag(all_tokens)), cfg.out / "pos.csv")
        _mark(tokens_path, key)
        print(f"tokens: {raw_count} raw, {len(all_tokens)} after cleaning")
        top = ", ".join(t for t, _, _ in report.entries[:5])
        print(f"top tokens: {top}")
    else:
        print("preprocess: cached")
    return 0


def cmd_dtm(cfg: RunConfig) -> int:
    dtm, weights = _get_dtm(cfg)
    n, p = dtm.shape
    print(f"dtm: {n} x {p} (stored entries: {dtm.counts.nnz}) -> {cfg.out / 'counts.mtx'}")
    print(f"tfidf weights: {weights.weights.nnz} stored entries -> {cfg.out / 'weights.mtx'}")
    return 0


def cmd_dist(cfg: RunConfig) -> int:
    dtm, feats = _feature_matrix(cfg)
    X = feats.dense()
    labels = _doc_labels(dtm)
    for measure in cfg.measures:
        d = pairwise(feats, measure)
        stem_name = f"dist_{measure}_{cfg.features}"
        write_distance_csv(d, cfg.out / f"{stem_name}.csv")
        render_heatmap(
            d.values, labels, labels, cfg.out / f"{stem_name}.svg",
            title=f"{measure} distance between chapters ({cfg.features})",
        )
        report = metric_check(d, samples=10000, seed=cfg.seed, features=X)
        lines = [report.summary()]
        for i, j, k, excess in report.triangle[:20]:
            lines.append(f"triangle violation: d({i},{k}) > d({i},{j}) + d({j},{k}) by {excess:.3e}")
        _atomic_write(cfg.out / f"{stem_name}.metric.txt", "\n".join(lines) + "\n")
        print(f"dist {measure}: {d.n} x {d.n}, metric check: {report.summary()}")
    return 0


def cmd_linkage(cfg: RunConfig) -> int:
    dtm, feats = _feature_matrix(cfg)
    for measure in cfg.measures:
        d = pairwise(feats, measure)
        for linkage in cfg.linkages:
            bd = book_linkage(d, linkage)
            stem_name = f"book_{measure}_{linkage}_{cfg.features}"
            write_book_distance_csv(bd, cfg.out / f"{stem_name}.csv")
            names = [b.name for b in bd.books]
            render_heatmap(
                bd.values, names, names, cfg.out / f"{stem_name}.svg",
                title=f"{measure} distance between books ({linkage} linkage)",
            )
        print(f"linkage {measure}: wrote {len(cfg.linkages)} book matrices")
    return 0


def cmd_corr(cfg: RunConfig) -> int:
    if len(cfg.measures) < 2:
        raise ConfigError("corr needs at least two measures")
    _, feats = _feature_matrix(cfg)
    mc = measure_correlation(feats, cfg.measures)
    write_correlation_csv(mc, cfg.out / "correlation.csv")
    render_heatmap(
        mc.values, list(mc.measures), list(mc.measures), cfg.out / "correlation.svg",
        title=f"correlation between distance measures ({cfg.features})",
    )
    print("correlation matrix:")
    for name, row in zip(mc.measures, mc.values):
        print(f"  {name:10s} " + " ".join(f"{x:+.4f}" for x in row))
    return 0


def _train_model(cfg: RunConfig, data):
    params = cfg.model_params
    if cfg.model == "mnb":
        return train_mnb(data, alpha=float(params.get("alpha", 1.0)))
    if cfg.model == "knn":
        return train_knn(
            data, k=int(params.get("k", 5)), measure=str(params.get("measure", "euclidean"))
        )
    if cfg.model == "svm":
        return train_svm(
            data,
            lam=float(params.get("lam", 1e-3)),
            epochs=int(params.get("epochs", 50)),
            seed=cfg.seed,
        )
    trees = int(params.get("trees", 100))
    depth = params.get("depth")
    mtry = params.get("mtry")
    return train_rf(
        data,
        n_trees=trees,
        max_depth=None if depth is None else int(depth),
        features_per_split=None if mtry is None else int(mtry),
        seed=cfg.seed,
    )


def cmd_train(cfg: RunConfig) -> int:
    dtm, feats = _feature_matrix(cfg)
    data = dataset_from_matrix(feats)
    model = _train_model(cfg, data)
    model_path = cfg.out / f"model_{cfg.model}.txt"
    save_model(model, model_path)
    scores = model.decision_scores(data.features)
    preds = np.argmax(scores, axis=1)
    write_scores_csv(
        _doc_labels(dtm), data.labels, preds, scores, cfg.out / f"train_scores_{cfg.model}.csv"
    )
    train_acc = float(np.mean(preds == data.labels))
    print(f"trained {cfg.model} on {data.n} docs; training accuracy {train_acc:.4f}")
    print(f"model -> {model_path}")
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    dtm, feats = _feature_matrix(cfg)
    data = dataset_from_matrix(feats)
    folds = make_folds(data.n, cfg.folds, cfg.seed)
    result = cross_validate(lambda d: _train_model(cfg, d), data, folds)
    write_folds_csv(folds, cfg.out / "folds.csv")
    write_scores_csv(
        _doc_labels(dtm),
        data.labels,
        result.predictions,
        result.scores,
        cfg.out / f"eval_scores_{cfg.model}.csv",
    )
    names = [b.name for b in dtm.books]
    write_confusion_csv(result.confusion, names, cfg.out / f"confusion_{cfg.model}.csv")
    lines = [
        f"model: {cfg.model}",
        f"folds: {cfg.folds} seed: {cfg.seed} features: {cfg.features}",
        f"cv_accuracy_pooled: {result.cv_accuracy!r}",
        f"cv_accuracy_mean_over_folds: {result.mean_fold_accuracy!r}",
        "fold_accuracies: " + " ".join(repr(a) for a in result.fold_accuracies),
        "per_class_one_vs_rest_accuracy: "
        + " ".join(f"{n}={a!r}" for n, a in zip(names, per_class_accuracy(result.confusion))),
    ]
    _atomic_write(cfg.out / f"metrics_{cfg.model}.txt", "\n".join(lines) + "\n")
    print(f"eval {cfg.model}: cv accuracy {result.cv_accuracy:.4f} "
          f"(mean over folds {result.mean_fold_accuracy:.4f})")
    return 0


def cmd_report(cfg: RunConfig) -> int:
    report_dir = cfg.out / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    corpus = _get_corpus(cfg)
    pp = _pp_config(cfg)
    dtm, feats = _feature_matrix(cfg)
    labels = _doc_labels(dtm)

    # token frequencies and POS table (whole corpus and per book)
    token_lists = {doc: pipeline(doc, pp) for doc in corpus.documents}
    all_tokens = [t for toks in token_lists.values() for t in toks]
    write_frequency_csv(frequency_report(all_tokens, cfg.top), report_dir / "frequency.csv")
    write_pos_csv(pos_counts(pos_tag(all_tokens)), report_dir / "pos.csv")
    for book in corpus.books:
        toks = [t for doc, ts in token_lists.items() if doc.book.id == book.id for t in ts]
        slug = book.name.lower().replace(" ", "_")
        write_frequency_csv(frequency_report(toks, cfg.top), report_dir / f"frequency_{slug}.csv")

    # matrix shapes, chapter heatmaps, book linkage matrices, correlation
    shapes = [f"full dtm: {dtm.shape[0]} x {dtm.shape[1]}"]
    for book in dtm.books:
        sub = slice_book(dtm, book)
        shapes.append(f"{book.name}: {sub.shape[0]} x {sub.shape[1]}")
    _atomic_write(report_dir / "dtm_shapes.txt", "\n".join(shapes) + "\n")

    for measure in cfg.measures:
        d = pairwise(feats, measure)
        render_heatmap(
            d.values, labels, labels, report_dir / f"heatmap_chapters_{measure}.svg",
            title=f"{measure} distance between chapters",
        )
        for linkage in cfg.linkages:
            bd = book_linkage(d, linkage)
            names = [b.name for b in bd.books]
            write_book_distance_csv(bd, report_dir / f"book_{measure}_{linkage}.csv")
            render_heatmap(
                bd.values, names, names, report_dir / f"book_{measure}_{linkage}.svg",
                title=f"{measure} distance between books ({linkage} linkage)",
            )
    if len(cfg.measures) >= 2:
        mc = measure_correlation(feats, cfg.measures)
        write_correlation_csv(mc, report_dir / "correlation.csv")
        render_heatmap(
            mc.values, list(mc.measures), list(mc.measures), report_dir / "correlation.svg",
            title="correlation between distance measures",
        )

    # classifier comparison with one shared fold assignment
    data = dataset_from_matrix(feats)
    folds = make_folds(data.n, cfg.folds, cfg.seed)
    min_train = min(int(folds.train_indices(f).size) for f in range(folds.m))
    grids = build_grids(cfg, data.p, min_train, cfg.seed)
    bench = benchmark_all(data, folds, grids)
    write_comparison_csv(bench, report_dir / "comparison.csv")
    names = [b.name for b in dtm.books]
    for kind, search in bench.searches.items():
        cm = search.best_result.confusion
        write_confusion_csv(cm, names, report_dir / f"confusion_{kind}.csv")
        render_heatmap(
            cm.counts.astype(float), names, names, report_dir / f"confusion_{kind}.svg",
            title=f"{kind} confusion matrix (cv accuracy {search.best_accuracy:.4f})",
        )

    summary = [
        f"scriptmine {__version__} report (kernel backend: {_kernels.backend()})",
        f"corpus: {corpus.n} documents, {len(corpus.books)} books",
        f"features: {cfg.features}; folds m={cfg.folds}; seed {cfg.seed}",
        f"tokens after cleaning: {len(all_tokens)}",
        "classifier cv accuracy: "
        + "  ".join(f"{kind}={acc:.4f}" for kind, _, acc in bench.rows),
    ]
    _atomic_write(report_dir / "summary.txt", "\n".join(summary) + "\n")
    print("\n".join(summary))
    print(f"report -> {report_dir}")
    return 0


_HANDLERS = {
    "ingest": cmd_ingest,
    "preprocess": cmd_preprocess,
    "dtm": cmd_dtm,
    "dist": cmd_dist,
    "linkage": cmd_linkage,
    "corr": cmd_corr,
    "train": cmd_train,
    "eval": cmd_eval,
    "report": cmd_report,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat section.key = value config file")
    common.add_argument("--manifest", type=Path, help="corpus manifest file")
    common.add_argument("--out", type=Path, help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="64-bit seed driving all randomness")
    common.add_argument("--folds", type=int, help="number of cross-validation folds m")
    common.add_argument("--features", choices=["counts", "tfidf"], help="feature weighting")
    common.add_argument("--measure", help="restrict to one distance measure")
    common.add_argument("--linkage", help="restrict to one linkage rule")
    common.add_argument("--stopwords", type=Path, help="stopword file (default: bundled)")
    common.add_argument("--no-stem", action="store_true", help="disable stemming")
    common.add_argument("--no-noise-removal", action="store_true", help="keep stopwords/digits")
    common.add_argument("--top", type=int, help="frequency report length")
    common.add_argument("--force", action="store_true", help="ignore cached artifacts")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="override any config file key (repeatable)",
    )

    model_flags = argparse.ArgumentParser(add_help=False)
    model_flags.add_argument("--model", choices=["mnb", "knn", "svm", "rf"])
    model_flags.add_argument("--alpha", type=float, help="mnb smoothing")
    model_flags.add_argument("--k", type=int, help="knn neighbor count")
    model_flags.add_argument("--lam", type=float, help="svm regularization")
    model_flags.add_argument("--epochs", type=int, help="svm training epochs")
    model_flags.add_argument("--trees", type=int, help="rf tree count")
    model_flags.add_argument("--depth", type=int, help="rf depth limit")
    model_flags.add_argument("--mtry", type=int, help="rf features per split")

    parser = argparse.ArgumentParser(
        prog="scriptmine",
        description="Corpus analytics: document-term matrices, distances, classification.",
    )
    parser.add_argument("--version", action="version", version=f"scriptmine {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("ingest", "load the corpus and write the document cache"),
        ("preprocess", "tokenize/clean and write frequency and POS reports"),
        ("dtm", "build the document-term matrix and TF-IDF weights"),
        ("dist", "chapter distance matrices, heatmaps, metric checks"),
        ("linkage", "book distance matrices under min/max/mean/median linkage"),
        ("corr", "correlation matrix between distance measures"),
        ("train", "fit one classifier on the full corpus"),
        ("eval", "cross-validate one classifier"),
        ("report", "full results directory: reports, heatmaps, benchmark"),
    ]:
        parents = [common, model_flags] if name in ("train", "eval") else [common]
        sub.add_parser(name, help=help_text, parents=parents)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config is not None:
        cfg = config_from_file(parse_config_file(args.config), cfg)
    for item in getattr(args, "overrides", []):
        if "=" not in item:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        cfg = config_from_file({key.strip(): value.strip()}, cfg)
    updates: dict = {}
    for attr, key in [
        ("manifest", "manifest"),
        ("out", "out"),
        ("seed", "seed"),
        ("folds", "folds"),
        ("features", "features"),
        ("stopwords", "stopwords"),
        ("top", "top"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "measure", None):
        if args.measure not in cfg.measures and args.measure not in (
            "euclidean", "manhattan", "jaccard", "cosine"
        ):
            raise ConfigError(f"unknown measure {args.measure!r}")
        updates["measures"] = (args.measure,)
    if getattr(args, "linkage", None):
        updates["linkages"] = (args.linkage,)
    if getattr(args, "no_stem", False):
        updates["stem"] = False
    if getattr(args, "no_noise_removal", False):
        updates["remove_noise"] = False
    if getattr(args, "force", False):
        updates["force"] = True
    if getattr(args, "model", None):
        updates["model"] = args.model
    params = dict(cfg.model_params)
    for name in ("alpha", "k", "lam", "epochs", "trees", "depth", "mtry"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if getattr(args, "measure", None):
        params.setdefault("measure", args.measure)
    updates["model_params"] = params
    from dataclasses import replace

    return replace(cfg, **updates).validate()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"scriptmine: config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"scriptmine: data error: {exc}", file=sys.stderr)
        return 3
    except (ScriptmineError, AssertionError) as exc:
        print(f"scriptmine: internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
