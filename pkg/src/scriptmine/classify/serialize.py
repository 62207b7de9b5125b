"""Versioned text serialization for trained models.

Line-oriented and binary-safe: floats are written as C99 hex literals so
every parameter round-trips bit-exactly. Header line:

    scriptmine-model v1 <kind>
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..atomic import write_text
from ..errors import DataError
from .forest import RfModel, TreeNode
from .knn import KnnModel
from .mnb import MnbModel
from .svm import SvmModel

_MAGIC = "scriptmine-model"
_VERSION = "v1"


def _fmt(value: float) -> str:
    return float(value).hex()


def _scalar(name: str, value) -> str:
    if value is None:
        return f"s {name} none -"
    if isinstance(value, (int, np.integer)):
        return f"s {name} int {int(value)}"
    if isinstance(value, float):
        return f"s {name} float {_fmt(value)}"
    return f"s {name} str {value}"


def _array_lines(name: str, arr: np.ndarray) -> list[str]:
    arr = np.asarray(arr)
    kind = "i" if arr.dtype.kind in "iu" else "f"
    fmt = (lambda x: str(int(x))) if kind == "i" else _fmt
    if arr.ndim == 1:
        return [f"a {name} {kind} 1 {arr.shape[0]}", " ".join(fmt(x) for x in arr)]
    lines = [f"a {name} {kind} 2 {arr.shape[0]} {arr.shape[1]}"]
    lines.extend(" ".join(fmt(x) for x in row) for row in arr)
    return lines


def _tree_lines(node: TreeNode, out: list[str]) -> None:
    if node.feature < 0:
        out.append("l " + " ".join(str(int(c)) for c in node.counts))
    else:
        out.append(f"n {node.feature} {_fmt(node.threshold)}")
        _tree_lines(node.left, out)
        _tree_lines(node.right, out)


def save_model(model, path: str | Path) -> None:
    lines: list[str]
    if isinstance(model, MnbModel):
        lines = [f"{_MAGIC} {_VERSION} mnb", _scalar("smoothing", model.smoothing)]
        lines += _array_lines("log_priors", model.log_priors)
        lines += _array_lines("log_likelihoods", model.log_likelihoods)
    elif isinstance(model, KnnModel):
        lines = [
            f"{_MAGIC} {_VERSION} knn",
            _scalar("k", model.k),
            _scalar("measure", model.measure),
            _scalar("n_classes", model.n_classes),
        ]
        lines += _array_lines("features", model.features)
        lines += _array_lines("labels", model.labels)
    elif isinstance(model, SvmModel):
        lines = [
            f"{_MAGIC} {_VERSION} svm",
            _scalar("lam", model.lam),
            _scalar("epochs", model.epochs),
            _scalar("seed", model.seed),
        ]
        lines += _array_lines("weights", model.weights)
        lines += _array_lines("biases", model.biases)
        lines += _array_lines("objective_traces", model.objective_traces)
    elif isinstance(model, RfModel):
        lines = [
            f"{_MAGIC} {_VERSION} rf",
            _scalar("n_trees", model.n_trees),
            _scalar("max_depth", model.max_depth),
            _scalar("features_per_split", model.features_per_split),
            _scalar("seed", model.seed),
            _scalar("n_classes", model.n_classes),
            _scalar("n_features", model.n_features),
        ]
        for tree in model.trees:
            lines.append("tree")
            _tree_lines(tree, lines)
    else:
        raise DataError(f"cannot serialize {type(model).__name__}")
    lines.append("end")
    write_text(path, "\n".join(lines) + "\n")


class _Reader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def next(self) -> str:
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def scalar(self, expect: str):
        tag, name, typ, raw = self.next().split(" ", 3)
        if tag != "s" or name != expect:
            raise DataError(f"expected scalar {expect!r}, found {name!r}")
        if typ == "none":
            return None
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float.fromhex(raw)
        return raw

    def array(self, expect: str) -> np.ndarray:
        head = self.next().split()
        if head[0] != "a" or head[1] != expect:
            raise DataError(f"expected array {expect!r}, found {head[1]!r}")
        kind, ndim = head[2], int(head[3])
        shape = tuple(int(x) for x in head[4 : 4 + ndim])
        parse = int if kind == "i" else float.fromhex
        dtype = np.int64 if kind == "i" else np.float64
        rows = 1 if ndim == 1 else shape[0]
        data = [[parse(x) for x in self.next().split()] for _ in range(rows)]
        arr = np.array(data, dtype=dtype).reshape(shape)
        return arr

    def tree(self) -> TreeNode:
        line = self.next()
        if line.startswith("l "):
            counts = np.array([int(x) for x in line[2:].split()], dtype=np.int64)
            return TreeNode(-1, 0.0, None, None, counts)
        _, feature, thr = line.split()
        left = self.tree()
        right = self.tree()
        return TreeNode(int(feature), float.fromhex(thr), left, right, None)


def load_model(path: str | Path):
    lines = Path(path).read_text("utf-8").splitlines()
    if not lines or not lines[0].startswith(f"{_MAGIC} "):
        raise DataError(f"{path}: not a scriptmine model file")
    _, version, kind = lines[0].split()
    if version != _VERSION:
        raise DataError(f"unsupported model format version {version}")
    r = _Reader(lines[1:])
    if kind == "mnb":
        return MnbModel(
            smoothing=r.scalar("smoothing"),
            log_priors=r.array("log_priors"),
            log_likelihoods=r.array("log_likelihoods"),
        )
    if kind == "knn":
        k = r.scalar("k")
        measure = r.scalar("measure")
        n_classes = r.scalar("n_classes")
        return KnnModel(r.array("features"), r.array("labels"), k, measure, n_classes)
    if kind == "svm":
        lam = r.scalar("lam")
        epochs = r.scalar("epochs")
        seed = r.scalar("seed")
        return SvmModel(
            r.array("weights"), r.array("biases"), lam, epochs, seed, r.array("objective_traces")
        )
    if kind == "rf":
        n_trees = r.scalar("n_trees")
        max_depth = r.scalar("max_depth")
        mtry = r.scalar("features_per_split")
        seed = r.scalar("seed")
        n_classes = r.scalar("n_classes")
        n_features = r.scalar("n_features")
        trees = []
        for _ in range(n_trees):
            if r.next() != "tree":
                raise DataError("malformed forest block")
            trees.append(r.tree())
        return RfModel(tuple(trees), n_trees, max_depth, mtry, seed, n_classes, n_features)
    raise DataError(f"unknown model kind {kind!r}")
