import itertools
import math
from random import Random

import numpy as np
import pytest

from deckforge.parser import (
    LABELS,
    TaggedCommand,
    evaluate_tagger,
    generate_corpus,
    load_corpus_file,
    load_model,
    save_corpus_file,
    save_model,
    tag_command,
    train_tagger,
    train_test_corpora,
)
from deckforge.parser.crf import (
    _backward,
    _encode_corpus,
    _forward,
    _unaries,
    corpus_nll_and_grad,
    sequence_score,
    viterbi,
)


def tiny_corpus():
    return [
        TaggedCommand(("create", "a", "piechart"), ("ACTION", "OUTSIDE", "OBJECT")),
        TaggedCommand(("delete", "the", "table"), ("ACTION", "OUTSIDE", "OBJECT")),
        TaggedCommand(("please", "update", "it"), ("OUTSIDE", "ACTION", "OUTSIDE")),
    ]


def brute_force_logz(U, T):
    n, L = U.shape
    return math.log(
        sum(
            math.exp(sequence_score(U, T, list(ys)))
            for ys in itertools.product(range(L), repeat=n)
        )
    )


def brute_force_best(U, T):
    n, L = U.shape
    return max(
        (list(ys) for ys in itertools.product(range(L), repeat=n)),
        key=lambda ys: (sequence_score(U, T, ys), [-y for y in ys]),
    )


def random_potentials(rng, n, L):
    U = np.array([[rng.gauss(0, 1) for _ in range(L)] for _ in range(n)])
    T = np.array([[rng.gauss(0, 1) for _ in range(L)] for _ in range(L)])
    return U, T


def test_forward_logz_matches_brute_force_enumeration():
    rng = Random(0)
    for n in (1, 2, 4, 6):
        U, T = random_potentials(rng, n, 3)
        _, logz = _forward(U, T)
        assert logz == pytest.approx(brute_force_logz(U, T), rel=1e-10)


def test_backward_agrees_with_forward_on_logz():
    rng = Random(1)
    U, T = random_potentials(rng, 5, 4)
    alpha, logz = _forward(U, T)
    beta = _backward(U, T)
    # logZ recoverable at every time slice from alpha + beta
    for t in range(5):
        slice_logz = math.log(sum(math.exp(a + b) for a, b in zip(alpha[t], beta[t])))
        assert slice_logz == pytest.approx(logz, rel=1e-10)


def test_viterbi_matches_brute_force_on_short_commands():
    rng = Random(2)
    for n in range(1, 9):
        U, T = random_potentials(rng, n, len(LABELS))
        best = viterbi(U, T)
        expected = brute_force_best(U, T)
        assert sequence_score(U, T, best) == pytest.approx(
            sequence_score(U, T, expected), rel=1e-12
        )


def test_gradient_matches_finite_differences():
    corpus = tiny_corpus()
    model = train_tagger(corpus, epochs=3, seed=0)
    encoded = _encode_corpus(corpus, model.feature_index, model.labels)
    W = model.weights.copy()
    T = model.transitions.copy()
    nll, gW, gT = corpus_nll_and_grad(encoded, W, T, model.l2_lambda)

    rng = Random(3)
    eps = 1e-6

    def check(array, grad, coords):
        for idx in coords:
            orig = array[idx]
            array[idx] = orig + eps
            up, _, _ = corpus_nll_and_grad(encoded, W, T, model.l2_lambda)
            array[idx] = orig - eps
            down, _, _ = corpus_nll_and_grad(encoded, W, T, model.l2_lambda)
            array[idx] = orig
            fd = (up - down) / (2 * eps)
            denom = max(abs(fd), abs(grad[idx]), 1e-8)
            assert abs(fd - grad[idx]) / denom < 1e-4, f"grad mismatch at {idx}"

    w_coords = [
        (rng.randrange(W.shape[0]), rng.randrange(W.shape[1])) for _ in range(25)
    ]
    t_coords = [
        (rng.randrange(T.shape[0]), rng.randrange(T.shape[1])) for _ in range(10)
    ]
    check(W, gW, w_coords)
    check(T, gT, t_coords)


def test_training_is_deterministic():
    corpus = generate_corpus(20, seed=5)
    a = train_tagger(corpus, epochs=10, seed=0)
    b = train_tagger(corpus, epochs=10, seed=0)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.transitions, b.transitions)


def test_training_reduces_nll():
    from deckforge.parser.crf import corpus_nll

    corpus = generate_corpus(20, seed=5)
    short = train_tagger(corpus, epochs=1, seed=0)
    long = train_tagger(corpus, epochs=20, seed=0)
    assert corpus_nll(long, corpus) < corpus_nll(short, corpus)


def test_heldout_quality_on_synthetic_split(trained_model, corpora):
    _, test = corpora
    f1, precision, recall = evaluate_tagger(trained_model, test)
    assert f1 >= 0.85
    assert precision >= 0.85
    assert recall >= 0.85


def test_tagging_example_command(trained_model):
    tagged = tag_command(trained_model, "Create a piechart using the sales table")
    by_token = dict(zip(tagged.tokens, tagged.labels))
    assert by_token["Create"] == "ACTION"
    assert by_token["piechart"] == "OBJECT"
    assert by_token["a"] == "OUTSIDE"


def test_out_of_scope_command_is_all_outside(trained_model):
    tagged = tag_command(trained_model, "please do it now")
    assert set(tagged.labels) == {"OUTSIDE"}


def test_model_roundtrip(tmp_path, trained_model):
    path = tmp_path / "model.json"
    save_model(trained_model, str(path))
    loaded = load_model(str(path))
    assert np.array_equal(loaded.weights, trained_model.weights)
    assert np.array_equal(loaded.transitions, trained_model.transitions)
    assert loaded.feature_index == trained_model.feature_index
    cmd = "update the barchart using the revenue data"
    assert tag_command(loaded, cmd) == tag_command(trained_model, cmd)


def test_corpus_file_roundtrip(tmp_path):
    corpus = generate_corpus(10, seed=1)
    path = tmp_path / "corpus.txt"
    save_corpus_file(corpus, str(path))
    assert load_corpus_file(str(path)) == corpus


def test_train_test_split_is_disjoint(corpora):
    train, test = corpora
    assert len(train) == 50
    assert len(test) == 25
    assert not {c.tokens for c in train} & {c.tokens for c in test}


def test_unaries_sum_active_feature_weights():
    corpus = tiny_corpus()
    model = train_tagger(corpus, epochs=1, seed=0)
    encoded = _encode_corpus(corpus, model.feature_index, model.labels)
    feats, _ = encoded[0]
    U = _unaries(feats, model.weights)
    manual = sum(model.weights[fid] for fid in feats[0])
    assert np.allclose(U[0], manual)
