"""Tweet irony detection: feature pipeline and MLP voting ensemble."""

from pathlib import Path

from . import _irony
from ._irony import IronyError, Model, brown_clusters, evaluate, split_folds, tokenize

__all__ = [
    "DATA_DIR",
    "IronyError",
    "Model",
    "brown_clusters",
    "evaluate",
    "normalize",
    "pos_tag",
    "split_folds",
    "tokenize",
    "train",
]

_packaged = Path(__file__).parent / "data"
DATA_DIR = _packaged if _packaged.is_dir() else Path(_irony.default_data_dir())


def normalize(text, data_dir=None):
    return _irony.normalize(text, str(data_dir or DATA_DIR))


def pos_tag(tokens, data_dir=None):
    return _irony.pos_tag(list(tokens), str(data_dir or DATA_DIR))


def train(texts, labels, task="A", seed=42, options=None, data_dir=None):
    """Fit the pipeline and the fold ensemble.

    `options` maps config keys ("mlp.hidden", "features.lsi_dim", ...) to
    values, as in a config file.
    """
    opts = {k: str(v) for k, v in (options or {}).items()}
    return _irony.train(list(texts), [int(y) for y in labels], task, seed, opts, str(data_dir or DATA_DIR))


def load(path):
    return Model.load(str(path))
