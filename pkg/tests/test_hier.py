# tests/test_hier.py

from itertools import combinations

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from marketnet.corrnet import DistMatrix
from marketnet.errors import DataError, DegenerateVariance, TooFewSamples
from marketnet.hier import (
    BandCounts, Merge, MergeTree, cophenetic_correlation, cophenetic_matrix, first_merge_heights,
    pair_height_bands, parse_newick, subset_tree, to_newick, upgma,
)


def dist(matrix, tickers=None):
    matrix = np.asarray(matrix, dtype=float)
    return DistMatrix(tickers or tuple(f"L{i}" for i in range(len(matrix))), matrix)


def naive_upgma(D: np.ndarray):
    """Definitional re-scan: average of all leaf pairs between every two active clusters."""
    clusters = [[i] for i in range(len(D))]
    merges = []
    while len(clusters) > 1:
        clusters.sort(key=min)
        best = None
        for a, b in combinations(range(len(clusters)), 2):
            avg = np.mean([D[i, j] for i in clusters[a] for j in clusters[b]])
            if best is None or avg < best[0]:
                best = (avg, a, b)
        avg, a, b = best
        merges.append((frozenset(clusters[a]), frozenset(clusters[b]), avg))
        merged = clusters[a] + clusters[b]
        clusters = [c for k, c in enumerate(clusters) if k not in (a, b)] + [merged]
    return merges


TWO_PAIRS = dist([
    [0.0, 0.1, 1.0, 1.0],
    [0.1, 0.0, 1.0, 1.0],
    [1.0, 1.0, 0.0, 0.1],
    [1.0, 1.0, 0.1, 0.0],
])


def test_two_leaves():
    T = upgma(dist([[0, 0.8], [0.8, 0]]))
    assert T.merges == (Merge(0, 1, 0.8, 2),)
    assert cophenetic_matrix(T).c[0, 1] == 0.8


def test_three_points_by_hand():
    D = dist([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ("A", "B", "C"))
    T = upgma(D)
    assert T.merges == (Merge(0, 1, 1.0, 2), Merge(3, 2, 2.0, 3))
    c = cophenetic_matrix(T).c
    assert (c[0, 1], c[0, 2], c[1, 2]) == (1.0, 2.0, 2.0)


def test_two_tight_pairs():
    T = upgma(TWO_PAIRS)
    assert T.heights == [0.1, 0.1, 1.0]
    assert T.merges[0] == Merge(0, 1, 0.1, 2)
    assert T.merges[1] == Merge(2, 3, 0.1, 2)
    assert T.merges[2] == Merge(4, 5, 1.0, 4)


def test_matches_definitional_rescan(random_distance):
    for trial in range(100):
        n = 4 + trial % 9
        D = random_distance(n)
        T = upgma(D)
        members = T.members()
        expected = naive_upgma(np.array(D.D))
        for m, (left, right, height) in zip(T.merges, expected):
            assert {frozenset(members[m.left]), frozenset(members[m.right])} == {left, right}
            assert m.height == pytest.approx(height, abs=1e-10)


def test_agrees_with_scipy_average_linkage(random_distance):
    D = random_distance(12)
    Z = linkage(squareform(np.array(D.D), checks=False), method="average")
    assert upgma(D).heights == pytest.approx(sorted(Z[:, 2]), abs=1e-10)
    assert upgma(D).to_linkage().shape == (11, 4)


def test_cophenetic_matrix_is_ultrametric(random_distance):
    for n in (5, 9, 12):
        c = cophenetic_matrix(upgma(random_distance(n))).c
        for i, j, k in combinations(range(n), 3):
            assert c[i, j] <= max(c[i, k], c[k, j])
            assert c[i, k] <= max(c[i, j], c[j, k])
            assert c[j, k] <= max(c[j, i], c[i, k])


def test_ultrametric_input_is_reproduced_exactly(random_distance):
    ultra = cophenetic_matrix(upgma(random_distance(10)))
    D = dist(ultra.c)
    again = cophenetic_matrix(upgma(D))
    assert np.array_equal(again.c, ultra.c)
    assert cophenetic_correlation(D, again) == pytest.approx(1.0, abs=1e-12)


def test_ccc_matches_direct_pearson(random_distance):
    D = random_distance(6)
    coph = cophenetic_matrix(upgma(D))
    iu = np.triu_indices(6, k=1)
    expected = np.corrcoef(np.array(D.D)[iu], coph.c[iu])[0, 1]
    assert cophenetic_correlation(D, coph) == pytest.approx(expected, abs=1e-12)


def test_ccc_ignores_ticker_order(rng, random_distance):
    D = random_distance(9)
    order = rng.permutation(9)
    shuffled = DistMatrix(tuple(D.tickers[i] for i in order), np.array(D.D)[np.ix_(order, order)])
    base = cophenetic_correlation(D, cophenetic_matrix(upgma(D)))
    other = cophenetic_correlation(shuffled, cophenetic_matrix(upgma(shuffled)))
    assert other == pytest.approx(base, abs=1e-12)


def test_ccc_degenerate_inputs():
    flat = np.full((4, 4), 1.0)
    np.fill_diagonal(flat, 0.0)
    D = dist(flat)
    with pytest.raises(DegenerateVariance):
        cophenetic_correlation(D, cophenetic_matrix(upgma(D)))
    two = dist([[0, 1], [1, 0]])
    with pytest.raises(TooFewSamples):
        cophenetic_correlation(two, cophenetic_matrix(upgma(two)))


def test_band_counting_modes():
    coph = cophenetic_matrix(upgma(TWO_PAIRS))
    assert first_merge_heights(coph).tolist() == [0.1, 0.1, 0.1, 0.1]
    assert pair_height_bands(coph, [0.5]).counts == (4, 0)
    assert pair_height_bands(coph, [0.5], mode="merge").counts == (2, 1)
    assert pair_height_bands(coph, [0.5], mode="all_pairs").counts == (2, 4)
    # a height equal to the cutoff belongs to the lower band
    assert pair_height_bands(coph, [0.1, 1.0], mode="merge").counts == (2, 1, 0)
    with pytest.raises(DataError):
        pair_height_bands(coph, [1.0, 0.5])


def test_band_labels():
    bands = BandCounts((1.0, 1.2), (3, 2, 1), "leaf")
    assert bands.labels == ["<=1", "(1,1.2]", ">1.2"]
    assert bands.as_dict()["counts"] == {"<=1": 3, "(1,1.2]": 2, ">1.2": 1}
    assert bands.total == 6


def test_newick_round_trip_preserves_heights(random_distance):
    D = random_distance(9)
    T = upgma(D)
    back = parse_newick(to_newick(T))
    assert sorted(back.tickers) == sorted(T.tickers)
    assert back.heights == pytest.approx(T.heights, abs=1e-12)

    original = cophenetic_matrix(T).c
    reparsed = cophenetic_matrix(back).c
    where = {t: i for i, t in enumerate(back.tickers)}
    for i, j in combinations(range(T.n), 2):
        a, b = where[T.tickers[i]], where[T.tickers[j]]
        assert reparsed[a, b] == pytest.approx(original[i, j], abs=1e-12)


def test_newick_quotes_awkward_names():
    T = upgma(dist([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ("BRK B", "O'NEIL", "X")))
    text = to_newick(T)
    assert "'BRK B'" in text
    assert parse_newick(text).tickers == ("BRK B", "O'NEIL", "X")


@pytest.mark.parametrize("text", ["(A:1,B:1)", "(A:1,B:x);", "(A:1,B:-1);", "(A:1,B:1,C:1);"])
def test_malformed_newick(text):
    with pytest.raises(DataError):
        parse_newick(text)


def test_subset_tree(random_distance):
    D = random_distance(8)
    sub = subset_tree(D, 3)
    assert sub.tickers == D.tickers[:3]
    assert subset_tree(D, 0).n == 8
    with pytest.raises(DataError):
        subset_tree(D, 1)


def test_merge_tree_validation():
    with pytest.raises(DataError):
        MergeTree(("A", "B", "C"), (Merge(0, 1, 1.0, 2),))
    with pytest.raises(DataError):
        MergeTree(("A", "B", "C"), (Merge(0, 1, 1.0, 2), Merge(0, 2, 2.0, 2)))
    with pytest.raises(DataError):
        MergeTree(("A", "B", "C"), (Merge(0, 1, 2.0, 2), Merge(2, 3, 1.0, 3)))
