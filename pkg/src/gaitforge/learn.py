"""Classification and validation stack.

Small, self-contained learners (KNN, k-means, an MLP trained by per-sample
backpropagation) plus the validation machinery used to score them:
stratified k-fold cross-validation, confusion-matrix accuracies, the
biometric TAR/FAR/FRR rates, and one-way ANOVA. Everything stochastic is
seeded and deterministic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special


@dataclass
class Dataset:
    """Feature rows with integer labels indexing ``class_names``."""

    features: np.ndarray   # (n, d)
    labels: np.ndarray     # (n,)
    class_names: tuple[str, ...]

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise ValueError("features must be (n, d) with one label per row")
        if self.labels.size and (
            self.labels.min() < 0 or self.labels.max() >= len(self.class_names)
        ):
            raise ValueError("labels must index class_names")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def subset(self, idx) -> "Dataset":
        return Dataset(self.features[idx], self.labels[idx], self.class_names)

    def to_csv(self, path) -> None:
        d = self.features.shape[1]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"f{i}" for i in range(d)] + ["label"])
            for row, lab in zip(self.features, self.labels):
                writer.writerow([f"{v:.6f}" for v in row] + [self.class_names[lab]])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or header[-1] != "label":
                raise ValueError(f"{path}: line 1: expected a final 'label' column")
            feats, names = [], []
            class_names: list[str] = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise ValueError(
                        f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
                    )
                try:
                    feats.append([float(v) for v in row[:-1]])
                except ValueError:
                    raise ValueError(f"{path}: line {lineno}: non-numeric feature") from None
                names.append(row[-1])
            for name in names:
                if name not in class_names:
                    class_names.append(name)
            labels = [class_names.index(n) for n in names]
        return cls(np.asarray(feats), np.asarray(labels), tuple(class_names))


# ---------------------------------------------------------------------------
# KNN
# ---------------------------------------------------------------------------

def knn_classify(train: Dataset, k: int, query) -> int:
    """Majority vote among the k nearest training rows (Euclidean).

    Vote ties break toward the candidate class with the smallest summed
    distance among those neighbors, then the lowest class id.
    """
    if len(train) == 0:
        raise ValueError("empty training set")
    if not 1 <= k <= len(train):
        raise ValueError(f"k must lie in [1, {len(train)}]")
    q = np.asarray(query, dtype=float)
    dists = np.sqrt(np.sum((train.features - q) ** 2, axis=1))
    order = np.argsort(dists, kind="stable")[:k]
    votes: dict[int, int] = {}
    sums: dict[int, float] = {}
    for i in order:
        lab = int(train.labels[i])
        votes[lab] = votes.get(lab, 0) + 1
        sums[lab] = sums.get(lab, 0.0) + float(dists[i])
    return min(votes, key=lambda lab: (-votes[lab], sums[lab], lab))


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------

def kmeans(data, k: int, max_iter: int = 100, seed: int = 0,
           return_history: bool = False):
    """Lloyd iterations from a seeded k-means++ start.

    Returns (centroids, assignments), plus the per-iteration SSE when
    ``return_history`` is set. Iteration stops at an assignment fixpoint or
    after ``max_iter`` rounds; the within-cluster SSE never increases along
    the way.
    """
    x = np.asarray(data, dtype=float)
    distinct = np.unique(x, axis=0)
    if k > len(distinct):
        raise ValueError(f"k={k} exceeds the {len(distinct)} distinct points")
    rng = np.random.default_rng(seed)

    # k-means++ seeding
    centroids = [x[rng.integers(len(x))]]
    while len(centroids) < k:
        d2 = np.min(
            [np.sum((x - c) ** 2, axis=1) for c in centroids], axis=0
        )
        total = d2.sum()
        if total == 0.0:
            # remaining mass sits on already-chosen points; take any new one
            for row in distinct:
                if not any(np.array_equal(row, c) for c in centroids):
                    centroids.append(row)
                    break
            continue
        centroids.append(x[rng.choice(len(x), p=d2 / total)])
    centroids = np.array(centroids)

    assignments = np.full(len(x), -1)
    sse_history = []
    for _ in range(max_iter):
        d = np.linalg.norm(x[:, None, :] - centroids[None, :, :], axis=2)
        new_assign = np.argmin(d, axis=1)
        if np.array_equal(new_assign, assignments):
            break
        assignments = new_assign
        for j in range(k):
            members = x[assignments == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
        sse_history.append(kmeans_sse(x, centroids, assignments))
    if return_history:
        return centroids, assignments, sse_history
    return centroids, assignments


def kmeans_sse(data, centroids, assignments) -> float:
    x = np.asarray(data, dtype=float)
    return float(sum(
        np.sum((x[assignments == j] - c) ** 2) for j, c in enumerate(centroids)
    ))


# ---------------------------------------------------------------------------
# MLP with per-sample backpropagation
# ---------------------------------------------------------------------------

def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


_ACTIVATIONS = {
    "sigmoid": (_sigmoid, lambda a: a * (1.0 - a)),
    "tanh": (np.tanh, lambda a: 1.0 - a * a),
}


@dataclass
class MlpModel:
    layers: tuple[int, ...]
    weights: list[np.ndarray]   # weights[l] has shape (layers[l], layers[l+1])
    biases: list[np.ndarray]
    activation: str = "sigmoid"

    def __post_init__(self):
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.layers[l], self.layers[l + 1]) or b.shape != (self.layers[l + 1],):
                raise ValueError("weight/bias shapes inconsistent with layer sizes")


def mlp_init(layers: Sequence[int], seed: int = 42, activation: str = "sigmoid") -> MlpModel:
    rng = np.random.default_rng(seed)
    layers = tuple(int(n) for n in layers)
    weights = [rng.uniform(-1.0, 1.0, size=(a, b)) for a, b in zip(layers, layers[1:])]
    biases = [rng.uniform(-1.0, 1.0, size=b) for b in layers[1:]]
    return MlpModel(layers=layers, weights=weights, biases=biases, activation=activation)


def _forward(model: MlpModel, x: np.ndarray) -> list[np.ndarray]:
    act, _ = _ACTIVATIONS[model.activation]
    activations = [np.asarray(x, dtype=float)]
    for w, b in zip(model.weights, model.biases):
        activations.append(act(activations[-1] @ w + b))
    return activations


def mlp_predict(model: MlpModel, x) -> np.ndarray:
    """Output-layer activations for one input vector; argmax is the class."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.layers[0],):
        raise ValueError(f"expected input of size {model.layers[0]}, got {x.shape}")
    return _forward(model, x)[-1]


def mlp_gradients(model: MlpModel, x, target) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Gradients of the squared-error cost 0.5*||out - target||^2 for one
    sample, layer by layer."""
    _, dact = _ACTIVATIONS[model.activation]
    acts = _forward(model, np.asarray(x, dtype=float))
    target = np.asarray(target, dtype=float)
    delta = (acts[-1] - target) * dact(acts[-1])
    grads_w: list[np.ndarray] = [None] * len(model.weights)
    grads_b: list[np.ndarray] = [None] * len(model.biases)
    for l in range(len(model.weights) - 1, -1, -1):
        grads_w[l] = np.outer(acts[l], delta)
        grads_b[l] = delta.copy()
        if l > 0:
            delta = (model.weights[l] @ delta) * dact(acts[l])
    return grads_w, grads_b


def mlp_train_raw(inputs, targets, layers: Sequence[int], eta: float,
                  epochs: int, seed: int = 42,
                  activation: str = "sigmoid") -> MlpModel:
    """Per-sample gradient descent on raw (input, target) pairs.

    Weights and thresholds move against the gradient after every sample, in
    data order, for ``epochs`` passes. Deterministic for a fixed seed.
    """
    if eta <= 0.0:
        raise ValueError("learning rate must be positive")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    x = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if x.ndim != 2 or y.ndim != 2 or len(x) != len(y):
        raise ValueError("inputs and targets must be matching 2-d arrays")
    layers = tuple(int(n) for n in layers)
    if x.shape[1] != layers[0] or y.shape[1] != layers[-1]:
        raise ValueError("layer sizes do not match the data dimensions")
    model = mlp_init(layers, seed=seed, activation=activation)
    for _ in range(epochs):
        for xi, yi in zip(x, y):
            gw, gb = mlp_gradients(model, xi, yi)
            for l in range(len(model.weights)):
                model.weights[l] -= eta * gw[l]
                model.biases[l] -= eta * gb[l]
    return model


def mlp_train(data: Dataset, layers: Sequence[int], eta: float, epochs: int,
              seed: int = 42, activation: str = "sigmoid") -> MlpModel:
    """Train on a labeled dataset with one-hot targets."""
    layers = tuple(int(n) for n in layers)
    if layers[-1] != data.n_classes:
        raise ValueError("output layer size must equal the number of classes")
    targets = np.eye(data.n_classes)[data.labels]
    return mlp_train_raw(data.features, targets, layers, eta, epochs,
                         seed=seed, activation=activation)


def mlp_classify(model: MlpModel, x) -> int:
    return int(np.argmax(mlp_predict(model, x)))


# ---------------------------------------------------------------------------
# Cross validation
# ---------------------------------------------------------------------------

class StratificationError(ValueError):
    """A class has fewer members than the fold count."""


@dataclass
class CvResult:
    fold_accuracies: list[float]   # percent
    mean: float
    variance: float                # n-1 denominator
    sigma: float


def cv_aggregate(fold_accuracies: Sequence[float]) -> tuple[float, float, float]:
    """Mean, variance (n-1 denominator) and standard deviation of per-fold
    accuracy estimates."""
    e = np.asarray(fold_accuracies, dtype=float)
    mean = float(e.sum() / len(e))
    if len(e) > 1:
        var = float(np.sum((e - mean) ** 2) / (len(e) - 1))
    else:
        var = 0.0
    return mean, var, math.sqrt(var)


def kfold_indices(labels, folds: int, seed: int = 42) -> list[np.ndarray]:
    """Stratified fold assignment: per class, a seeded shuffle dealt
    round-robin into folds, so every sample is tested exactly once."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    fold_members: list[list[int]] = [[] for _ in range(folds)]
    for cls in np.unique(labels):
        idx = np.nonzero(labels == cls)[0]
        if len(idx) < folds:
            raise StratificationError(
                f"class {cls} has {len(idx)} members; needs >= {folds}"
            )
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            fold_members[pos % folds].append(int(i))
    return [np.array(sorted(m)) for m in fold_members]


def kfold_cv(data: Dataset, trainer: Callable[[Dataset], Callable], folds: int = 5,
             seed: int = 42) -> CvResult:
    """k-fold cross-validation of a trainer.

    ``trainer(train_set)`` must return a predictor mapping a feature matrix
    to integer labels. Accuracies are percentages per fold; the aggregate
    uses the n-1 variance.
    """
    if folds < 2:
        raise ValueError("folds must be >= 2")
    test_folds = kfold_indices(data.labels, folds, seed=seed)
    accuracies = []
    all_idx = np.arange(len(data))
    for test_idx in test_folds:
        train_mask = np.ones(len(data), dtype=bool)
        train_mask[test_idx] = False
        predict = trainer(data.subset(all_idx[train_mask]))
        preds = np.asarray(predict(data.features[test_idx]))
        acc = 100.0 * float(np.mean(preds == data.labels[test_idx]))
        accuracies.append(acc)
    mean, var, sigma = cv_aggregate(accuracies)
    return CvResult(fold_accuracies=accuracies, mean=mean, variance=var, sigma=sigma)


def knn_trainer(k: int) -> Callable[[Dataset], Callable]:
    def trainer(train: Dataset):
        def predict(features):
            return np.array([knn_classify(train, k, row) for row in np.atleast_2d(features)])
        return predict
    return trainer


def mlp_trainer(layers: Sequence[int] | None, eta: float, epochs: int,
                seed: int = 42, activation: str = "sigmoid") -> Callable[[Dataset], Callable]:
    def trainer(train: Dataset):
        arch = layers or (train.features.shape[1], 8, train.n_classes)
        model = mlp_train(train, arch, eta, epochs, seed=seed, activation=activation)
        def predict(features):
            return np.array([mlp_classify(model, row) for row in np.atleast_2d(features)])
        return predict
    return trainer


# ---------------------------------------------------------------------------
# Confusion matrix, accuracies, biometric rates
# ---------------------------------------------------------------------------

@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (K, K); rows true class, columns predicted

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=int)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def one_vs_rest(self, cls: int) -> tuple[int, int, int, int]:
        tp = int(self.counts[cls, cls])
        fp = int(self.counts[:, cls].sum()) - tp
        fn = int(self.counts[cls, :].sum()) - tp
        tn = self.total - tp - fp - fn
        return tp, fp, fn, tn


def accuracy_from_counts(tp: int, fp: int, fn: int, tn: int) -> float:
    """Per-class accuracy (TP + TN) / (TP + FP + FN + TN), as a fraction."""
    return (tp + tn) / (tp + fp + fn + tn)


def truncate_percent(value_pct: float, decimals: int) -> float:
    """Drop digits past ``decimals`` without rounding.

    The source accuracy tables truncate their percentages (e.g. 84.78 is
    printed as 84.7), so reproducing them needs truncation, not rounding.
    """
    factor = 10.0 ** decimals
    return math.floor(value_pct * factor + 1e-9) / factor


def confusion_and_accuracy(preds, truths, n_classes: int):
    """Confusion matrix, per-class one-vs-rest accuracy, and the overall
    misclassification error (misclassified / total)."""
    preds = np.asarray(preds, dtype=int)
    truths = np.asarray(truths, dtype=int)
    if preds.shape != truths.shape:
        raise ValueError("predictions and truths must have equal length")
    if np.any(preds < 0) or np.any(preds >= n_classes) or np.any(truths < 0) or np.any(truths >= n_classes):
        raise ValueError("label out of range")
    counts = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(truths, preds):
        counts[t, p] += 1
    cm = ConfusionMatrix(counts)
    per_class = np.array([
        accuracy_from_counts(*cm.one_vs_rest(c)) for c in range(n_classes)
    ])
    error = 1.0 - np.trace(counts) / counts.sum()
    return cm, per_class, float(error)


class UndefinedClassError(ValueError):
    """A class has no test samples, so its acceptance rate is undefined."""


@dataclass
class BiometricMetrics:
    per_class_tar: np.ndarray
    per_class_far: np.ndarray
    per_class_frr: np.ndarray
    tar: float   # macro averages, as fractions
    far: float
    frr: float


def biometric_metrics(cm: ConfusionMatrix) -> BiometricMetrics:
    """Verification-style rates from a confusion matrix.

    Per class, TAR is the diagonal over the true-class row total and FAR
    the off-diagonal hits in the predicted-class column over that column's
    total (zero when nothing was predicted as the class). FRR = 1 - TAR
    exactly.
    """
    counts = cm.counts
    row_sums = counts.sum(axis=1)
    col_sums = counts.sum(axis=0)
    if np.any(row_sums == 0):
        raise UndefinedClassError("a class has no test samples")
    diag = np.diag(counts)
    tar = diag / row_sums
    far = np.where(col_sums > 0, (col_sums - diag) / np.maximum(col_sums, 1), 0.0)
    frr = 1.0 - tar
    return BiometricMetrics(
        per_class_tar=tar, per_class_far=far, per_class_frr=frr,
        tar=float(tar.mean()), far=float(far.mean()), frr=float(frr.mean()),
    )


# ---------------------------------------------------------------------------
# One-way ANOVA
# ---------------------------------------------------------------------------

@dataclass
class AnovaResult:
    ss_between: float
    ss_within: float
    df_between: int
    df_within: int
    ms_between: float
    ms_within: float
    f: float
    p: float

    def as_dict(self) -> dict:
        return {
            "ss_between": self.ss_between, "ss_within": self.ss_within,
            "df_between": self.df_between, "df_within": self.df_within,
            "ms_between": self.ms_between, "ms_within": self.ms_within,
            "F": self.f, "p": self.p,
        }


def _anova_from_moments(ns, means, variances) -> AnovaResult:
    ns = np.asarray(ns, dtype=float)
    means = np.asarray(means, dtype=float)
    variances = np.asarray(variances, dtype=float)
    grand = float(np.sum(ns * means) / np.sum(ns))
    ss_between = float(np.sum(ns * (means - grand) ** 2))
    ss_within = float(np.sum((ns - 1.0) * variances))
    df_between = len(ns) - 1
    df_within = int(np.sum(ns)) - len(ns)
    ms_between = ss_between / df_between
    ms_within = ss_within / df_within if df_within > 0 else 0.0
    if ms_within == 0.0:
        if ss_between == 0.0:
            f, p = 0.0, 1.0
        else:
            f, p = math.inf, 0.0
    else:
        f = ms_between / ms_within
        p = float(special.fdtrc(df_between, df_within, f))
    return AnovaResult(ss_between, ss_within, df_between, df_within,
                       ms_between, ms_within, f, p)


def anova_single_factor(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """Standard one-way variance decomposition over raw groups.

    F compares the between-group to the within-group mean square; its
    p-value comes from the F-distribution survival function. Identical
    groups degenerate to F = 0, p = 1.
    """
    if len(groups) < 2:
        raise ValueError("need at least 2 groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(len(g) < 2 for g in arrays):
        raise ValueError("every group needs at least 2 samples")
    ns = [len(g) for g in arrays]
    means = [float(g.mean()) for g in arrays]
    variances = [float(g.var(ddof=1)) for g in arrays]
    return _anova_from_moments(ns, means, variances)


def anova_from_summary(counts: Sequence[int], means: Sequence[float],
                       variances: Sequence[float]) -> AnovaResult:
    """One-way ANOVA from per-group (count, mean, sample variance) rows, for
    when only the group summaries are available."""
    if len(counts) < 2 or not (len(counts) == len(means) == len(variances)):
        raise ValueError("need matching summaries for at least 2 groups")
    return _anova_from_moments(counts, means, variances)
