"""Linear-chain CRF over concept labels, trained by regularized maximum likelihood.

Training runs mini-batch gradient descent (Adagrad step sizes) on the L2-
regularized negative conditional log-likelihood; inference is Viterbi.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from random import Random

import numpy as np

from ..errors import FormatError, ValidationError
from .features import feature_strings, featurize
from .pos import pos_tag, tokenize_and_pos

LABELS = ("ACTION", "DATA", "OBJECT", "PRESENTATION", "OUTSIDE")
CONCEPT_LABELS = LABELS[:4]

_MODEL_VERSION = 1


@dataclass(frozen=True)
class TaggedCommand:
    tokens: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.labels):
            raise ValidationError("token and label counts differ")
        for lab in self.labels:
            if lab not in LABELS:
                raise ValidationError(f"unknown concept label {lab!r}")


@dataclass
class CrfModel:
    feature_index: dict[str, int]
    weights: np.ndarray  # (num_features, num_labels)
    transitions: np.ndarray  # (num_labels, num_labels)
    l2_lambda: float
    labels: tuple[str, ...] = LABELS

    @property
    def feature_weights(self) -> dict[tuple[str, str], float]:
        return {
            (feat, lab): float(self.weights[fi, li])
            for feat, fi in self.feature_index.items()
            for li, lab in enumerate(self.labels)
        }

    @property
    def transition_weights(self) -> dict[tuple[str, str], float]:
        return {
            (a, b): float(self.transitions[i, j])
            for i, a in enumerate(self.labels)
            for j, b in enumerate(self.labels)
        }


def _token_features(tokens: tuple[str, ...] | list[str]) -> list[list[str]]:
    pairs = [(tok, pos_tag(tok)) for tok in tokens]
    return [feature_strings(tf) for tf in featurize(pairs)]


def _encode(feats: list[list[str]], index: dict[str, int]) -> list[list[int]]:
    return [[index[f] for f in fs if f in index] for fs in feats]


def _unaries(encoded: list[list[int]], W: np.ndarray) -> np.ndarray:
    U = np.zeros((len(encoded), W.shape[1]))
    for t, ids in enumerate(encoded):
        if ids:
            U[t] = W[ids].sum(axis=0)
    return U


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    m = a.max(axis=axis, keepdims=True)
    return (m + np.log(np.exp(a - m).sum(axis=axis, keepdims=True))).squeeze(axis)


def _forward(U: np.ndarray, T: np.ndarray) -> tuple[np.ndarray, float]:
    alpha = np.empty_like(U)
    alpha[0] = U[0]
    for t in range(1, len(U)):
        alpha[t] = U[t] + _logsumexp(alpha[t - 1][:, None] + T, axis=0)
    return alpha, float(_logsumexp(alpha[-1], axis=0))


def _backward(U: np.ndarray, T: np.ndarray) -> np.ndarray:
    beta = np.zeros_like(U)
    for t in range(len(U) - 2, -1, -1):
        beta[t] = _logsumexp(T + (U[t + 1] + beta[t + 1])[None, :], axis=1)
    return beta


def sequence_score(U: np.ndarray, T: np.ndarray, ys: list[int]) -> float:
    s = sum(U[t, y] for t, y in enumerate(ys))
    s += sum(T[ys[t - 1], ys[t]] for t in range(1, len(ys)))
    return float(s)


def _sentence_nll_grad(
    encoded: list[list[int]],
    gold: list[int],
    W: np.ndarray,
    T: np.ndarray,
    gW: np.ndarray,
    gT: np.ndarray,
) -> float:
    U = _unaries(encoded, W)
    alpha, logZ = _forward(U, T)
    beta = _backward(U, T)
    node = np.exp(alpha + beta - logZ)  # (T, L) marginals
    n = len(encoded)
    for t in range(n):
        delta = node[t].copy()
        delta[gold[t]] -= 1.0
        for fid in encoded[t]:
            gW[fid] += delta
    for t in range(1, n):
        edge = np.exp(alpha[t - 1][:, None] + T + (U[t] + beta[t])[None, :] - logZ)
        gT += edge
        gT[gold[t - 1], gold[t]] -= 1.0
    return logZ - sequence_score(U, T, gold)


def corpus_nll_and_grad(
    corpus_encoded: list[tuple[list[list[int]], list[int]]],
    W: np.ndarray,
    T: np.ndarray,
    l2_lambda: float,
    reg_fraction: float = 1.0,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Regularized NLL and its gradient over a batch.

    reg_fraction scales the L2 term so mini-batches see a proportional share
    of the full-corpus regularizer.
    """
    gW = np.zeros_like(W)
    gT = np.zeros_like(T)
    nll = 0.0
    for encoded, gold in corpus_encoded:
        nll += _sentence_nll_grad(encoded, gold, W, T, gW, gT)
    lam = l2_lambda * reg_fraction
    nll += lam * (float((W**2).sum()) + float((T**2).sum()))
    gW += 2.0 * lam * W
    gT += 2.0 * lam * T
    return nll, gW, gT


def corpus_nll(model: CrfModel, corpus: list[TaggedCommand]) -> float:
    encoded = _encode_corpus(corpus, model.feature_index, model.labels)
    nll, _, _ = corpus_nll_and_grad(encoded, model.weights, model.transitions, model.l2_lambda)
    return nll


def _encode_corpus(
    corpus: list[TaggedCommand], index: dict[str, int], labels: tuple[str, ...]
) -> list[tuple[list[list[int]], list[int]]]:
    lab_idx = {lab: i for i, lab in enumerate(labels)}
    out = []
    for cmd in corpus:
        feats = _token_features(cmd.tokens)
        out.append((_encode(feats, index), [lab_idx[l] for l in cmd.labels]))
    return out


def train_tagger(
    corpus: list[TaggedCommand],
    epochs: int = 100,
    l2_lambda: float = 0.01,
    seed: int = 0,
    batch_size: int = 8,
    learning_rate: float = 0.5,
) -> CrfModel:
    """Fit a CRF on annotated commands; deterministic for a fixed seed."""
    if not corpus:
        raise ValidationError("training corpus is empty")
    if all(lab == "OUTSIDE" for cmd in corpus for lab in cmd.labels):
        warnings.warn("degenerate corpus: no concept-labeled tokens", stacklevel=2)

    index: dict[str, int] = {}
    for cmd in corpus:
        for fs in _token_features(cmd.tokens):
            for f in fs:
                if f not in index:
                    index[f] = len(index)

    num_labels = len(LABELS)
    W = np.zeros((len(index), num_labels))
    T = np.zeros((num_labels, num_labels))
    encoded = _encode_corpus(corpus, index, LABELS)

    rng = Random(seed)
    order = list(range(len(encoded)))
    accW = np.full_like(W, 1e-8)
    accT = np.full_like(T, 1e-8)
    for _ in range(epochs):
        rng.shuffle(order)
        for start in range(0, len(order), batch_size):
            batch = [encoded[i] for i in order[start : start + batch_size]]
            frac = len(batch) / len(encoded)
            _, gW, gT = corpus_nll_and_grad(batch, W, T, l2_lambda, reg_fraction=frac)
            accW += gW**2
            accT += gT**2
            W -= learning_rate * gW / np.sqrt(accW)
            T -= learning_rate * gT / np.sqrt(accT)
    return CrfModel(feature_index=index, weights=W, transitions=T, l2_lambda=l2_lambda)


def viterbi(U: np.ndarray, T: np.ndarray) -> list[int]:
    n, L = U.shape
    score = U[0].copy()
    back = np.zeros((n, L), dtype=int)
    for t in range(1, n):
        cand = score[:, None] + T + U[t][None, :]
        back[t] = cand.argmax(axis=0)
        score = cand.max(axis=0)
    path = [int(score.argmax())]
    for t in range(n - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return path


def tag_tokens(model: CrfModel, tokens: tuple[str, ...] | list[str]) -> TaggedCommand:
    encoded = _encode(_token_features(tokens), model.feature_index)
    U = _unaries(encoded, model.weights)
    path = viterbi(U, model.transitions)
    return TaggedCommand(tuple(tokens), tuple(model.labels[i] for i in path))


def tag_command(model: CrfModel, command: str) -> TaggedCommand:
    """Viterbi-decode the concept labels of a raw command string."""
    tokens = [tok for tok, _ in tokenize_and_pos(command)]
    return tag_tokens(model, tokens)


def evaluate_tagger(
    model: CrfModel, test: list[TaggedCommand]
) -> tuple[float, float, float]:
    """Token-level macro F1/precision/recall over the four concept labels.

    OUTSIDE is excluded; labels absent from both gold and prediction are
    skipped in the macro average.
    """
    if not test:
        raise ValidationError("test set is empty")
    tp = {l: 0 for l in CONCEPT_LABELS}
    fp = {l: 0 for l in CONCEPT_LABELS}
    fn = {l: 0 for l in CONCEPT_LABELS}
    for cmd in test:
        pred = tag_tokens(model, cmd.tokens).labels
        for g, p in zip(cmd.labels, pred):
            if g == p and g in tp:
                tp[g] += 1
            else:
                if p in fp:
                    fp[p] += 1
                if g in fn:
                    fn[g] += 1
    precisions, recalls, f1s = [], [], []
    for lab in CONCEPT_LABELS:
        if tp[lab] + fp[lab] + fn[lab] == 0:
            continue
        p = tp[lab] / (tp[lab] + fp[lab]) if tp[lab] + fp[lab] else 0.0
        r = tp[lab] / (tp[lab] + fn[lab]) if tp[lab] + fn[lab] else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        precisions.append(p)
        recalls.append(r)
        f1s.append(f)
    if not f1s:
        return 0.0, 0.0, 0.0
    n = len(f1s)
    return sum(f1s) / n, sum(precisions) / n, sum(recalls) / n


def save_model(model: CrfModel, path: str) -> None:
    doc = {
        "version": _MODEL_VERSION,
        "labels": list(model.labels),
        "l2_lambda": model.l2_lambda,
        "features": list(model.feature_index.keys()),
        "weights": model.weights.tolist(),
        "transitions": model.transitions.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path: str) -> CrfModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != _MODEL_VERSION:
        raise FormatError(f"unsupported model version {doc.get('version')!r}")
    return CrfModel(
        feature_index={f: i for i, f in enumerate(doc["features"])},
        weights=np.array(doc["weights"]),
        transitions=np.array(doc["transitions"]),
        l2_lambda=doc["l2_lambda"],
        labels=tuple(doc["labels"]),
    )
