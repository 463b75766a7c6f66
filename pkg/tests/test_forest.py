"""Forest training and prediction: determinism, oracles, persistence."""

import numpy as np
import pytest

import synth
from ccs.errors import EmptyDatasetError, SchemaMismatchError, UnknownLabelError
from ccs.ml import (
    PredictionResult,
    RandomForestModel,
    TrainConfig,
    extract_features,
    train_forest,
)
from ccs.ml.metrics import evaluate
from ccs.model import BBox, CellStyle, Label, LabelSet, PageGeometry, ParsedPage, TextCell

AB = LabelSet((Label("alpha", "#111111"), Label("beta", "#222222")))


def two_band_page(page_number, rng, n_cells=10):
    """Cells in the left band are 'alpha', right band 'beta'."""
    cells = []
    labels = []
    for i in range(n_cells):
        left = i % 2 == 0
        x0 = rng.uniform(20, 120) if left else rng.uniform(400, 500)
        y0 = rng.uniform(50, 700)
        cells.append(
            TextCell(i, BBox(x0, y0, x0 + 60, y0 + 12), "w", CellStyle())
        )
        labels.append("alpha" if left else "beta")
    return ParsedPage(PageGeometry(612, 792, page_number), tuple(cells)), labels


def separable_corpus(n_pages=20, n_cells=10, seed=5):
    rng = np.random.default_rng(seed)
    return [two_band_page(p % 5 + 1, rng, n_cells) for p in range(n_pages)]


def stump_oracle_is_consistent(pages, label_set):
    """Brute-force depth-1 stump: is some single feature threshold perfect?"""
    X = np.concatenate([extract_features(p) for p, _ in pages])
    y = np.concatenate(
        [[label_set.index(l) for l in labels] for _, labels in pages]
    )
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xv, yv = X[order, f], y[order]
        for i in range(len(xv) - 1):
            if xv[i] < xv[i + 1]:
                left, right = yv[: i + 1], yv[i + 1 :]
                if len(set(left)) == 1 and len(set(right)) == 1 and left[0] != right[0]:
                    return True
    return False


def test_separable_corpus_reaches_perfect_training_accuracy():
    pages = separable_corpus()
    assert sum(len(l) for _, l in pages) == 200
    assert stump_oracle_is_consistent(pages, AB)  # independent separability proof
    model = train_forest(pages, AB, TrainConfig(n_trees=15, seed=3, n_refinement_stages=1))
    hits = total = 0
    for page, labels in pages:
        result = model.predict(page)
        hits += sum(a == b for a, b in zip(result.labels, labels))
        total += len(labels)
    assert hits == total


def test_single_label_dataset_predicts_it_with_full_confidence():
    one = LabelSet((Label("only", "#000000"),))
    pages = [(p, ["only"] * len(p.cells)) for p, _ in separable_corpus(4)]
    model = train_forest(pages, one, TrainConfig(n_trees=7, seed=1, n_refinement_stages=1))
    result = model.predict(pages[0][0])
    assert set(result.labels) == {"only"}
    assert all(c == 1.0 for c in result.confidences)


def test_same_seed_gives_identical_model_bytes():
    pages = separable_corpus(6)
    cfg = TrainConfig(n_trees=10, seed=42, n_refinement_stages=1)
    m1 = train_forest(pages, AB, cfg)
    m2 = train_forest(pages, AB, cfg)
    assert m1.to_bytes() == m2.to_bytes()
    m3 = train_forest(pages, AB, TrainConfig(n_trees=10, seed=43, n_refinement_stages=1))
    assert m1.to_bytes() != m3.to_bytes()


def test_empty_dataset_raises():
    with pytest.raises(EmptyDatasetError) as exc:
        train_forest([], AB, TrainConfig(n_trees=2))
    assert exc.value.code == "empty-dataset"
    empty_page = ParsedPage(PageGeometry(612, 792, 1), ())
    with pytest.raises(EmptyDatasetError):
        train_forest([(empty_page, [])], AB, TrainConfig(n_trees=2))


def test_unknown_label_raises():
    pages = separable_corpus(2)
    bad = [(p, ["gamma"] * len(l)) for p, l in pages]
    with pytest.raises(UnknownLabelError) as exc:
        train_forest(bad, AB, TrainConfig(n_trees=2))
    assert exc.value.code == "unknown-label"


def test_model_json_round_trip_preserves_predictions(tmp_path):
    pages = separable_corpus(8)
    model = train_forest(pages, AB, TrainConfig(n_trees=12, seed=9, n_refinement_stages=2))
    path = tmp_path / "model.json"
    model.save(path)
    loaded = RandomForestModel.load(path)
    assert loaded.to_bytes() == model.to_bytes()
    page = pages[0][0]
    assert loaded.predict(page) == model.predict(page)
    assert loaded.metadata["n_training_pages"] == 8


def test_refinement_stage_arity():
    pages = separable_corpus(6)
    model = train_forest(pages, AB, TrainConfig(n_trees=5, seed=2, n_refinement_stages=2))
    assert len(model.stages) == 3
    assert model.stages[0].n_features == 16
    assert model.stages[1].n_features == 16 + 4 * len(AB)
    assert model.stages[2].n_features == 16 + 4 * len(AB)


def test_schema_mismatch_on_tampered_model():
    pages = separable_corpus(4)
    model = train_forest(pages, AB, TrainConfig(n_trees=3, seed=2, n_refinement_stages=0))
    model.feature_schema_version = 99
    with pytest.raises(SchemaMismatchError) as exc:
        model.predict(pages[0][0])
    assert exc.value.code == "schema-mismatch"

    model2 = train_forest(pages, AB, TrainConfig(n_trees=3, seed=2, n_refinement_stages=0))
    model2.stages[0].n_features = 17
    with pytest.raises(SchemaMismatchError):
        model2.predict(pages[0][0])


def test_empty_page_predicts_empty():
    pages = separable_corpus(4)
    model = train_forest(pages, AB, TrainConfig(n_trees=3, seed=2, n_refinement_stages=1))
    empty = ParsedPage(PageGeometry(612, 792, 1), ())
    assert model.predict(empty) == PredictionResult((), ())


def test_prediction_is_deterministic_and_permutation_equivariant():
    pages = separable_corpus(6, seed=8)
    model = train_forest(pages, AB, TrainConfig(n_trees=9, seed=4, n_refinement_stages=1))
    page = pages[0][0]
    r1 = model.predict(page)
    r2 = model.predict(page)
    assert r1 == r2

    # reverse the cells (ids stay dense) and compare per-geometry predictions
    reversed_cells = tuple(
        TextCell(i, c.bbox, c.text, c.style, c.label)
        for i, c in enumerate(reversed(page.cells))
    )
    r3 = model.predict(ParsedPage(page.geometry, reversed_cells))
    assert list(r3.labels) == list(reversed(r1.labels))
    assert list(r3.confidences) == list(reversed(r1.confidences))


def test_confidence_is_vote_fraction():
    pages = separable_corpus(8, seed=10)
    model = train_forest(pages, AB, TrainConfig(n_trees=10, seed=6, n_refinement_stages=1))
    result = model.predict(pages[0][0])
    n_trees = 10
    for c in result.confidences:
        assert 0.0 <= c <= 1.0
        assert abs(c * n_trees - round(c * n_trees)) < 1e-9  # k/n_trees exactly
        assert c >= 0.5  # winning label of a 2-class vote


def test_class_weights_shift_ties_toward_minority():
    # one ambiguous region: identical geometry for both classes; weights
    # push leaf majorities toward the upweighted class
    rng = np.random.default_rng(2)
    cells = []
    labels = []
    for i in range(40):
        x0 = 100.0  # identical boxes: pure class mixture 25/75
        cells.append(TextCell(i, BBox(x0, 10 + i * 0.0, x0 + 10, 22 + i * 0.0), "w", CellStyle()))
        labels.append("alpha" if i < 10 else "beta")
    page = ParsedPage(PageGeometry(612, 792, 1), tuple(cells))
    plain = train_forest([(page, labels)], AB, TrainConfig(n_trees=9, seed=3, n_refinement_stages=0))
    tilted = train_forest(
        [(page, labels)],
        AB,
        TrainConfig(n_trees=9, seed=3, n_refinement_stages=0, class_weight=(10.0, 1.0)),
    )
    assert set(plain.predict(page).labels) == {"beta"}
    assert set(tilted.predict(page).labels) == {"alpha"}


def test_synthetic_template_corpus_medium_accuracy():
    # small slice of the full synthetic corpus: sanity, not the acceptance gate
    corpus = synth.make_corpus("alpha", 40, seed=7)
    train, test = synth.split_corpus(corpus)
    model = train_forest(train, synth.LABELS6, TrainConfig(n_trees=30, seed=11, n_refinement_stages=1))
    truth, pred = [], []
    for page, labels in test:
        truth.extend(labels)
        pred.extend(model.predict(page).labels)
    report = evaluate(truth, pred, synth.LABELS6)
    assert report["macro_recall"] > 0.9
    assert report["macro_precision"] > 0.9
