"""Two-stage relevance filter: event relevance, then casualty statistics.

The trainable baseline is a logistic model over hashed character 3-5-gram
counts. It is deliberately simple: deterministic given a seed, trainable in
seconds on the bundled corpus, and language-agnostic at the character level.
A remote model server can stand in for either stage through the same
interface.
"""

from __future__ import annotations

import csv
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import httpx
import numpy as np
from scipy import sparse

from .errors import ConfigurationError, InputError, RetryableSourceError, TrainingError
from .ingest import RawPost

FEATURE_DIM = 2**18
NGRAM_RANGE = (3, 5)
STAGES = ("event", "statistics")

_POSITIVE_LABELS = {"relevant", "has-stats"}
_NEGATIVE_LABELS = {"irrelevant", "no-stats"}


def _hashed_counts(text: str) -> dict[int, float]:
    padded = f" {text.casefold()} "
    counts: dict[int, float] = {}
    for n in range(NGRAM_RANGE[0], NGRAM_RANGE[1] + 1):
        for i in range(len(padded) - n + 1):
            bucket = zlib.crc32(padded[i : i + n].encode("utf-8")) & (FEATURE_DIM - 1)
            counts[bucket] = counts.get(bucket, 0.0) + 1.0
    return counts


def featurize(texts: Sequence[str]) -> sparse.csr_matrix:
    """Hash character n-grams into a fixed-width sparse count matrix."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for text in texts:
        counts = _hashed_counts(text)
        norm = float(np.sqrt(sum(v * v for v in counts.values()))) or 1.0
        for bucket in sorted(counts):
            indices.append(bucket)
            data.append(counts[bucket] / norm)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(texts), FEATURE_DIM),
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


@dataclass
class ClassifierModel:
    """A trained stage model, or a handle to a remote one."""

    stage: str
    backend: str = "baseline"  # baseline | remote
    weights: np.ndarray | None = None
    bias: float = 0.0
    temperature: float = 1.0
    remote_endpoint: str | None = None
    held_out_accuracy: float | None = None
    _fallback: "ClassifierModel | None" = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.stage not in STAGES:
            raise ConfigurationError(f"unknown stage {self.stage!r}")
        if self.temperature <= 0:
            raise ConfigurationError("temperature must be positive")
        if self.backend == "baseline" and self.weights is None:
            raise ConfigurationError("baseline model requires weights")
        if self.backend == "remote" and not self.remote_endpoint:
            raise ConfigurationError("remote model requires an endpoint URL")


@dataclass(frozen=True)
class ClassificationResult:
    label: bool
    probability: float


def load_corpus(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a ``text,label`` CSV into texts and binary targets."""
    texts: list[str] = []
    labels: list[int] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            label = row["label"].strip()
            if label in _POSITIVE_LABELS:
                labels.append(1)
            elif label in _NEGATIVE_LABELS:
                labels.append(0)
            else:
                raise TrainingError(f"unknown label {label!r} in {path}")
            texts.append(row["text"])
    return texts, np.array(labels, dtype=np.float64)


def _fit_temperature(logits: np.ndarray, targets: np.ndarray) -> float:
    """Pick the softening temperature minimizing held-out NLL (golden section)."""

    def nll(temp: float) -> float:
        p = np.clip(_sigmoid(logits / temp), 1e-12, 1 - 1e-12)
        return float(-np.mean(targets * np.log(p) + (1 - targets) * np.log(1 - p)))

    lo, hi = 0.25, 4.0
    phi = (np.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    for _ in range(60):
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        if nll(c) <= nll(d):
            b = d
        else:
            a = c
    return float((a + b) / 2)


def train_baseline(
    texts: Sequence[str],
    labels: np.ndarray,
    stage: str,
    seed: int,
    epochs: int = 300,
    learning_rate: float = 2.0,
    l2: float = 1e-4,
    held_out_fraction: float = 0.2,
) -> ClassifierModel:
    """Train the hashed n-gram logistic baseline; bit-identical given a seed.

    Full-batch gradient descent: no minibatch ordering, so the only sampled
    quantity is the train/held-out split.
    """
    labels = np.asarray(labels, dtype=np.float64)
    if len(texts) != len(labels):
        raise TrainingError("texts and labels length mismatch")
    if len(set(labels.tolist())) < 2:
        raise TrainingError("corpus must contain both classes")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(texts))
    n_held = int(round(len(texts) * held_out_fraction))
    held_idx, train_idx = order[:n_held], order[n_held:]
    if len(set(labels[train_idx].tolist())) < 2:  # degenerate split: train on all
        train_idx = order
        held_idx = np.array([], dtype=np.int64)

    X = featurize([texts[i] for i in train_idx])
    y = labels[train_idx]
    w = np.zeros(FEATURE_DIM)
    b = 0.0
    n = X.shape[0]
    for _ in range(epochs):
        z = X @ w + b
        p = _sigmoid(z)
        grad_w = X.T @ (p - y) / n + l2 * w
        grad_b = float(np.mean(p - y))
        w -= learning_rate * grad_w
        b -= learning_rate * grad_b

    temperature = 1.0
    accuracy = None
    if len(held_idx):
        Xh = featurize([texts[i] for i in held_idx])
        yh = labels[held_idx]
        logits = Xh @ w + b
        accuracy = float(np.mean((logits >= 0) == (yh == 1)))
        if len(set(yh.tolist())) == 2:
            temperature = _fit_temperature(logits, yh)
    return ClassifierModel(
        stage=stage,
        backend="baseline",
        weights=w,
        bias=b,
        temperature=temperature,
        held_out_accuracy=accuracy,
    )


def train_from_csv(path: str | Path, stage: str, seed: int) -> ClassifierModel:
    texts, labels = load_corpus(path)
    return train_baseline(texts, labels, stage=stage, seed=seed)


def _classify_texts_baseline(model: ClassifierModel, texts: Sequence[str]) -> np.ndarray:
    X = featurize(texts)
    logits = (X @ model.weights + model.bias) / model.temperature
    return _sigmoid(logits)


def _classify_texts_remote(model: ClassifierModel, texts: Sequence[str]) -> np.ndarray:
    try:
        response = httpx.post(
            model.remote_endpoint, json={"texts": list(texts)}, timeout=30.0
        )
        response.raise_for_status()
    except httpx.HTTPError as exc:
        if model._fallback is not None:
            return classify_texts(model._fallback, texts)
        raise RetryableSourceError(f"classifier backend failed: {exc}") from exc
    probs = response.json()["probabilities"]
    if len(probs) != len(texts):
        raise RetryableSourceError("classifier backend returned wrong arity")
    return np.asarray(probs, dtype=np.float64)


def classify_texts(model: ClassifierModel, texts: Sequence[str]) -> np.ndarray:
    if any(not t for t in texts):
        raise InputError("cannot classify empty text")
    if model.backend == "remote":
        return _classify_texts_remote(model, texts)
    return _classify_texts_baseline(model, texts)


def classify(model: ClassifierModel, post: RawPost) -> ClassificationResult:
    """Calibrated positive-class probability for one post; label at 0.5."""
    prob = float(classify_texts(model, [post.text])[0])
    return ClassificationResult(label=prob >= 0.5, probability=prob)


def filter_hierarchical(
    models: tuple[ClassifierModel, ClassifierModel],
    posts: Iterable[RawPost],
) -> list[tuple[RawPost, float, float]]:
    """Keep posts both event-relevant and statistics-bearing.

    Event stage runs first (cheapest culling); survivors carry both
    probabilities for downstream relevance scoring.
    """
    event_model, stats_model = models
    posts = list(posts)
    if not posts:
        return []
    event_probs = classify_texts(event_model, [p.text for p in posts])
    survivors = [(p, float(ep)) for p, ep in zip(posts, event_probs) if ep >= 0.5]
    if not survivors:
        return []
    stats_probs = classify_texts(stats_model, [p.text for p, _ in survivors])
    return [
        (post, event_prob, float(stats_prob))
        for (post, event_prob), stats_prob in zip(survivors, stats_probs)
        if stats_prob >= 0.5
    ]
