"""Feature extraction and neighbor graph: hand-checked geometry."""

import numpy as np

from ccs.ml import (
    BASE_FEATURE_NAMES,
    augment_with_neighbor_labels,
    extract_features,
    neighbor_graph,
)
from ccs.model import BBox, CellStyle, PageGeometry, ParsedPage, TextCell


def page_of(boxes, size=(100.0, 100.0), texts=None, styles=None, page_number=1):
    cells = tuple(
        TextCell(
            i,
            BBox(*b),
            (texts or {}).get(i, "word"),
            (styles or {}).get(i, CellStyle()),
        )
        for i, b in enumerate(boxes)
    )
    return ParsedPage(PageGeometry(size[0], size[1], page_number), cells)


def test_base_feature_arity_and_order():
    page = page_of([(10, 10, 20, 20)])
    X = extract_features(page)
    assert X.shape == (1, len(BASE_FEATURE_NAMES))
    assert len(BASE_FEATURE_NAMES) == 16


def test_lone_cell_distances_are_page_edge_distances():
    # 100x100 page, cell (10,10)-(20,20): left 10, below 10, right 80, above 80
    X = extract_features(page_of([(10, 10, 20, 20)]))
    assert X[0, 7:11].tolist() == [10.0, 10.0, 80.0, 80.0]


def test_normalized_coordinates():
    X = extract_features(page_of([(10, 10, 20, 30)], size=(200.0, 100.0)))
    assert X[0, 3:7].tolist() == [0.05, 0.1, 0.1, 0.3]
    assert X[0, 1] == 10.0 and X[0, 2] == 20.0  # width/height stay in points


def test_numeric_fraction():
    page = page_of(
        [(0, 0, 10, 10), (20, 0, 30, 10), (40, 0, 50, 10)],
        texts={0: "1234", 1: "ab12", 2: ""},
    )
    X = extract_features(page)
    assert X[0, 14] == 1.0
    assert X[1, 14] == 0.5
    assert X[2, 14] == 0.0
    assert X[:, 15].tolist() == [4.0, 4.0, 0.0]


def test_style_flags_and_page_number():
    page = page_of(
        [(0, 0, 10, 10)],
        styles={0: CellStyle(italic=True, bold=True, font_size=14.0)},
        page_number=3,
    )
    X = extract_features(page)
    assert X[0, 0] == 3.0
    assert X[0, 11] == 1.0 and X[0, 12] == 1.0 and X[0, 13] == 14.0


def test_single_cell_has_no_neighbors():
    nbrs = neighbor_graph(page_of([(10, 10, 20, 20)]))
    assert nbrs.tolist() == [[-1, -1, -1, -1]]


def test_vertical_stack_neighbors():
    page = page_of([(10, 70, 90, 80), (10, 50, 90, 60), (10, 30, 90, 40)])
    nbrs = neighbor_graph(page)
    # middle cell: below is cell 2, above is cell 0, no left/right
    assert nbrs[1].tolist() == [-1, 2, -1, 0]
    assert nbrs[0].tolist() == [-1, 1, -1, -1]
    assert nbrs[2].tolist() == [-1, -1, -1, 1]


def test_grid_cells_have_exactly_two_neighbors():
    page = page_of(
        [(10, 60, 40, 90), (60, 60, 90, 90), (10, 10, 40, 40), (60, 10, 90, 40)]
    )
    nbrs = neighbor_graph(page)
    assert (nbrs >= 0).sum(axis=1).tolist() == [2, 2, 2, 2]
    assert nbrs[0].tolist() == [-1, 2, 1, -1]  # TL: below=BL, right=TR
    assert nbrs[3].tolist() == [2, -1, -1, 1]  # BR: left=BL, above=TR


def test_neighbor_requires_projected_overlap():
    # second cell is to the right but vertically offset with no y-overlap
    page = page_of([(10, 50, 20, 60), (40, 62, 50, 72)])
    nbrs = neighbor_graph(page)
    assert nbrs[0, 2] == -1


def test_neighbor_gap_uses_facing_edges():
    page = page_of([(10, 10, 20, 20), (35, 10, 45, 20)])
    X = extract_features(page)
    assert X[0, 9] == 15.0  # right gap: 35 - 20
    assert X[1, 7] == 15.0  # left gap of the other cell
    assert X[0, 7] == 10.0  # no left neighbor: page edge


def test_features_depend_only_on_geometry_and_text_stats():
    texts_a = {0: "Results", 1: "page 12"}
    texts_b = {0: "Methods", 1: "cell 34"}  # same lengths, same digit counts
    pa = page_of([(10, 50, 60, 60), (10, 30, 60, 40)], texts=texts_a)
    pb = page_of([(10, 50, 60, 60), (10, 30, 60, 40)], texts=texts_b)
    assert np.array_equal(extract_features(pa), extract_features(pb))


def test_augment_with_neighbor_labels():
    X = np.zeros((3, 2))
    neighbors = np.array(
        [[-1, -1, 1, -1], [0, -1, 2, -1], [1, -1, -1, -1]], dtype=np.int32
    )
    labels = np.array([2, 0, 1], dtype=np.int32)
    out = augment_with_neighbor_labels(X, neighbors, labels, n_labels=3)
    assert out.shape == (3, 2 + 12)
    # cell 0: right neighbor (block 2) is cell 1 with label 0
    assert out[0, 2 + 2 * 3 + 0] == 1.0
    assert out[0, 2:2 + 6].tolist() == [0.0] * 6  # left/below blocks empty
    # cell 1: left neighbor label 2, right neighbor label 1
    assert out[1, 2 + 0 * 3 + 2] == 1.0
    assert out[1, 2 + 2 * 3 + 1] == 1.0
    assert out.sum() == 4.0  # exactly four one-hot bits set
