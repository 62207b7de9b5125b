"""Run configuration: defaults <- config file <- command-line flags.

The config file is flat ``section.key = value`` text, '#' comments allowed.
Every key can be overridden by the matching CLI flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .distance import LINKAGES, MEASURES
from .errors import ConfigError

_DEF_GRIDS: dict[str, str] = {
    "grid.mnb.alpha": "0.1,0.5,1,2",
    "grid.knn.k": "1,3,5,7,11,21",
    "grid.svm.lam": "1e-4,1e-3,1e-2,1e-1",
    "grid.svm.epochs": "20,50",
    "grid.rf.trees": "50,200",
    "grid.rf.depth": "none,20",
}


@dataclass(frozen=True)
class RunConfig:
    manifest: Path | None = None
    out: Path = Path("out")
    seed: int = 42
    folds: int = 10  # m
    features: str = "counts"  # counts | tfidf
    measures: tuple[str, ...] = MEASURES
    linkages: tuple[str, ...] = LINKAGES
    stopwords: Path | None = None  # None = bundled list
    stem: bool = True
    remove_noise: bool = True
    model: str = "mnb"
    model_params: dict = field(default_factory=dict)  # alpha/k/lam/epochs/trees/depth/mtry
    grid_overrides: dict = field(default_factory=dict)  # "mnb.alpha" -> [0.1, ...]
    top: int = 30  # frequency report length
    force: bool = False

    def validate(self) -> "RunConfig":
        if self.features not in ("counts", "tfidf"):
            raise ConfigError(f"features must be counts|tfidf, got {self.features!r}")
        for m in self.measures:
            if m not in MEASURES:
                raise ConfigError(f"unknown measure {m!r}")
        for l in self.linkages:
            if l not in LINKAGES:
                raise ConfigError(f"unknown linkage {l!r}")
        if self.model not in ("mnb", "knn", "svm", "rf"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.top < 1:
            raise ConfigError(f"top must be >= 1, got {self.top}")
        if self.manifest is not None and not Path(self.manifest).is_file():
            raise ConfigError(f"manifest not found: {self.manifest}")
        if self.stopwords is not None and not Path(self.stopwords).is_file():
            raise ConfigError(f"stopword file not found: {self.stopwords}")
        return self


def parse_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'section.key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _parse_bool(raw: str, key: str) -> bool:
    if raw.lower() in ("true", "yes", "1", "on"):
        return True
    if raw.lower() in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_list(raw: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in raw.split(",") if x.strip())


def _parse_number(raw: str):
    try:
        return int(raw)
    except ValueError:
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"expected a number, got {raw!r}") from exc


def config_from_file(values: dict[str, str], base: RunConfig | None = None) -> RunConfig:
    cfg = base or RunConfig()
    updates: dict = {}
    grid_overrides = dict(cfg.grid_overrides)
    model_params = dict(cfg.model_params)
    for key, raw in values.items():
        if key == "corpus.manifest":
            updates["manifest"] = Path(raw)
        elif key == "output.dir":
            updates["out"] = Path(raw)
        elif key == "evaluate.seed":
            updates["seed"] = int(raw)
        elif key == "evaluate.folds":
            updates["folds"] = int(raw)
        elif key == "evaluate.model":
            updates["model"] = raw
        elif key == "features.mode":
            updates["features"] = raw
        elif key == "distance.measures":
            updates["measures"] = _parse_list(raw)
        elif key == "distance.linkages":
            updates["linkages"] = _parse_list(raw)
        elif key == "preprocess.stopwords":
            updates["stopwords"] = Path(raw) if raw else None
        elif key == "preprocess.stem":
            updates["stem"] = _parse_bool(raw, key)
        elif key == "preprocess.remove_noise":
            updates["remove_noise"] = _parse_bool(raw, key)
        elif key == "report.top":
            updates["top"] = int(raw)
        elif key.startswith("grid."):
            grid_overrides[key[len("grid.") :]] = raw
        elif key.startswith("model."):
            name = key[len("model.") :]
            if name == "measure":  # the one string-valued hyperparameter
                model_params[name] = raw
            else:
                model_params[name] = None if raw.lower() == "none" else _parse_number(raw)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return replace(cfg, model_params=model_params, grid_overrides=grid_overrides, **updates)


def build_grids(cfg: RunConfig, p: int, min_train: int, seed: int) -> dict[str, list[dict]]:
    """Materialize the hyperparameter grids, honoring config overrides."""
    import math

    raw = dict(_DEF_GRIDS)
    for key, value in cfg.grid_overrides.items():
        raw[f"grid.{key}"] = value

    def nums(key: str) -> list:
        out = []
        for item in _parse_list(raw[key]):
            out.append(None if item.lower() in ("none", "inf") else _parse_number(item))
        if not out:
            raise ConfigError(f"{key}: empty grid")
        return out

    ks = [k for k in nums("grid.knn.k") if 1 <= k <= min_train]
    if not ks:
        raise ConfigError(f"grid.knn.k: no value fits training folds of size {min_train}")
    mtry = cfg.model_params.get("mtry") or (math.isqrt(p - 1) + 1)
    return {
        "mnb": [{"alpha": float(a)} for a in nums("grid.mnb.alpha")],
        "knn": [{"k": int(k)} for k in ks],
        "svm": [
            {"lam": float(lam), "epochs": int(e), "seed": seed}
            for lam in nums("grid.svm.lam")
            for e in nums("grid.svm.epochs")
        ],
        "rf": [
            {"n_trees": int(t), "max_depth": d, "seed": seed, "features_per_split": int(mtry)}
            for t in nums("grid.rf.trees")
            for d in nums("grid.rf.depth")
        ],
    }
