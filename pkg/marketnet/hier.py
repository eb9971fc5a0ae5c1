"""
    marketnet: correlation-network analytics for asset price panels.
    Copyright (C) 2025  The marketnet authors

    This file is part of marketnet.

    marketnet is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published
    by the Free Software Foundation, either version 3 of the License,
    or (at your option) any later version.

    marketnet is distributed in the hope that it will be useful, but WITHOUT
    ANY WARRANTY; without even the implied warranty of MERCHANTABILITY
    or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public
    License for more details.

    You should have received a copy of the GNU General Public License
    along with marketnet. If not, see <https://www.gnu.org/licenses/>.
"""

# marketnet/hier.py

"""
Average-linkage (UPGMA) clustering of a distance matrix.

Cluster references follow the flat linkage convention: leaves are 0..N-1 and
the k-th merge creates cluster N+k. Each merge record is
(left, right, height, size), so `MergeTree.to_linkage()` can be handed to any
dendrogram plotter that reads linkage matrices.
"""

import re
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import cophenet
from scipy.spatial.distance import squareform
from scipy.stats import pearsonr

from .corrnet import DistMatrix, upper_triangle
from .errors import DataError, DegenerateVariance, TooFewSamples

BAND_MODES = ("leaf", "merge", "all_pairs")
DEFAULT_BAND_CUTOFFS = (1.0, 1.2)


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int

    def as_list(self) -> list:
        return [self.left, self.right, self.height, self.size]


@dataclass(frozen=True)
class MergeTree:
    tickers: tuple
    merges: tuple

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "merges", tuple(self.merges))
        n = len(self.tickers)
        if len(self.merges) != n - 1:
            raise DataError(f"A dendrogram over {n} leaves needs {n - 1} merges, got {len(self.merges)}.")
        used = set()
        for k, m in enumerate(self.merges):
            for child in (m.left, m.right):
                if not 0 <= child < n + k or child in used:
                    raise DataError(f"Merge {k} references invalid or reused cluster {child}.")
                used.add(child)
        for prev, cur in zip(self.merges, self.merges[1:]):
            if cur.height < prev.height:
                raise DataError("Merge heights must be non-decreasing.")

    @property
    def n(self) -> int:
        return len(self.tickers)

    @property
    def heights(self) -> list[float]:
        return [m.height for m in self.merges]

    def members(self) -> dict[int, list[int]]:
        """Leaf ids of every cluster reference, leaves and merges alike."""
        members = {i: [i] for i in range(self.n)}
        for k, m in enumerate(self.merges):
            members[self.n + k] = members[m.left] + members[m.right]
        return members

    def to_linkage(self) -> np.ndarray:
        return np.array([m.as_list() for m in self.merges], dtype=float).reshape(-1, 4)


@dataclass(frozen=True)
class CopheneticMatrix:
    tickers: tuple
    c: np.ndarray
    merge_heights: tuple = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.tickers)


@dataclass(frozen=True)
class BandCounts:
    cutoffs: tuple
    counts: tuple
    mode: str

    @property
    def labels(self) -> list[str]:
        cuts = [f"{c:g}" for c in self.cutoffs]
        labels = [f"<={cuts[0]}"]
        labels += [f"({lo},{hi}]" for lo, hi in zip(cuts, cuts[1:])]
        labels.append(f">{cuts[-1]}")
        return labels

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "cutoffs": list(self.cutoffs),
            "counts": dict(zip(self.labels, self.counts)),
        }


def upgma(D: DistMatrix) -> MergeTree:
    """
    Repeatedly merges the active pair with the smallest average inter-cluster
    distance, updating rows with the size-weighted Lance-Williams recurrence.

    Each cluster occupies the row of its smallest member id, so a row-major
    arg-min over the upper triangle breaks ties by (min id of A, min id of B).
    """
    n = D.n
    if n < 2:
        raise TooFewSamples(n)
    work = np.array(D.D, dtype=float)
    np.fill_diagonal(work, np.inf)
    lower = np.tril_indices(n)
    sizes = np.ones(n, dtype=int)
    cluster_of = list(range(n))
    merges = []
    last = 0.0

    for k in range(n - 1):
        scan = work.copy()
        scan[lower] = np.inf
        a, b = np.unravel_index(int(np.argmin(scan)), scan.shape)
        height = max(float(work[a, b]), last)
        last = height

        na, nb = sizes[a], sizes[b]
        weighted = (na * work[a] + nb * work[b]) / (na + nb)
        row = np.where(work[a] == work[b], work[a], weighted)
        work[a, :] = row
        work[:, a] = row
        work[b, :] = np.inf
        work[:, b] = np.inf
        work[a, a] = np.inf

        merges.append(Merge(cluster_of[a], cluster_of[b], height, int(na + nb)))
        sizes[a] = na + nb
        cluster_of[a] = n + k

    return MergeTree(D.tickers, tuple(merges))


def cophenetic_matrix(T: MergeTree) -> CopheneticMatrix:
    """Merge height of the lowest cluster holding both leaves, via scipy's cophenet."""
    if T.n < 2:
        c = np.zeros((T.n, T.n))
    else:
        c = squareform(cophenet(T.to_linkage()))
    c.setflags(write=False)
    return CopheneticMatrix(T.tickers, c, tuple(T.heights))


def cophenetic_correlation(D: DistMatrix, C: CopheneticMatrix) -> float:
    """Pearson correlation between {d_ij} and {c_ij} over i < j."""
    if D.n < 3:
        raise TooFewSamples(D.n, 3)
    if D.n != C.n:
        raise DataError("Distance and cophenetic matrices differ in size.")
    d = upper_triangle(D.D)
    c = upper_triangle(C.c)
    if np.all(d == d[0]):
        raise DegenerateVariance("distances")
    if np.all(c == c[0]):
        raise DegenerateVariance("cophenetic distances")
    ccc = float(pearsonr(d, c)[0])
    return min(1.0, max(-1.0, ccc))


def first_merge_heights(C: CopheneticMatrix) -> np.ndarray:
    """Height at which each leaf first joins another cluster."""
    c = np.array(C.c, dtype=float)
    np.fill_diagonal(c, np.inf)
    return c.min(axis=1)


def pair_height_bands(C: CopheneticMatrix, cutoffs=DEFAULT_BAND_CUTOFFS, mode: str = "leaf") -> BandCounts:
    """
    Counts heights per band: band 0 is h <= cutoffs[0], band k is
    cutoffs[k-1] < h <= cutoffs[k], the last band is h > cutoffs[-1].

    mode "leaf" bins every leaf's first-merge height (N values), "merge" bins
    the N-1 merge heights and "all_pairs" bins all N(N-1)/2 cophenetic entries.
    """
    cutoffs = tuple(float(x) for x in cutoffs)
    if not cutoffs:
        raise DataError("At least one band cutoff is required.")
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise DataError("Band cutoffs must be sorted ascending.")
    if mode not in BAND_MODES:
        raise DataError(f"Unknown band mode {mode!r}; expected one of {BAND_MODES}.")

    if mode == "leaf":
        heights = first_merge_heights(C)
    elif mode == "merge":
        heights = np.asarray(C.merge_heights, dtype=float)
    else:
        heights = upper_triangle(C.c)

    bands = np.searchsorted(np.asarray(cutoffs), heights, side="left")
    counts = np.bincount(bands, minlength=len(cutoffs) + 1)
    return BandCounts(cutoffs, tuple(int(x) for x in counts), mode)


def subset_tree(D: DistMatrix, leaves: int) -> MergeTree:
    """Average linkage over the first `leaves` tickers (0 keeps all)."""
    if leaves == 0 or leaves >= D.n:
        return upgma(D)
    if leaves < 2:
        raise DataError(f"A dendrogram subset needs at least 2 leaves, got {leaves}.")
    return upgma(D.subset(range(leaves)))


# --- Newick ---

_NEEDS_QUOTES = re.compile(r"[\s(),:;'\[\]]")


def _quote(name: str) -> str:
    if _NEEDS_QUOTES.search(name):
        return "'" + name.replace("'", "''") + "'"
    return name


def to_newick(T: MergeTree) -> str:
    """Rooted Newick string; branch lengths are parent minus child height."""
    n = T.n
    heights = {i: 0.0 for i in range(n)}
    text = {i: _quote(t) for i, t in enumerate(T.tickers)}
    for k, m in enumerate(T.merges):
        parts = [f"{text.pop(child)}:{m.height - heights[child]!r}" for child in (m.left, m.right)]
        text[n + k] = "(" + ",".join(parts) + ")"
        heights[n + k] = m.height
    root = n + len(T.merges) - 1 if T.merges else 0
    return text[root] + ";"


class _NewickReader:

    def __init__(self, text: str):
        self.text = text.strip()
        self.pos = 0
        self.leaves = []
        self.internal = []  # (height, left, right, size) in post-order

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise DataError(f"Malformed Newick: expected {ch!r} at position {self.pos}.")
        self.pos += 1

    def name(self) -> str:
        if self.peek() == "'":
            self.pos += 1
            out = []
            while True:
                if self.pos >= len(self.text):
                    raise DataError("Malformed Newick: unterminated quoted name.")
                ch = self.text[self.pos]
                self.pos += 1
                if ch == "'":
                    if self.peek() == "'":
                        out.append("'")
                        self.pos += 1
                        continue
                    return "".join(out)
                out.append(ch)
        start = self.pos
        while self.peek() and self.peek() not in "(),:;":
            self.pos += 1
        return self.text[start:self.pos].strip()

    def length(self) -> float:
        if self.peek() != ":":
            return 0.0
        self.pos += 1
        start = self.pos
        while self.peek() and self.peek() not in "(),;":
            self.pos += 1
        try:
            return float(self.text[start:self.pos])
        except ValueError as e:
            raise DataError(f"Malformed Newick branch length {self.text[start:self.pos]!r}.") from e

    def node(self) -> tuple[str, int, float, int]:
        """Returns (kind, index, height, size) for the subtree at the cursor."""
        if self.peek() != "(":
            self.leaves.append(self.name())
            return "leaf", len(self.leaves) - 1, 0.0, 1
        self.expect("(")
        children = [self.child()]
        while self.peek() == ",":
            self.pos += 1
            children.append(self.child())
        self.expect(")")
        self.name()
        if len(children) != 2:
            raise DataError("Only binary dendrograms can be read back.")
        (left, lh), (right, rh) = children
        height = max(lh, rh)
        size = left[3] + right[3]
        self.internal.append((height, left[:2], right[:2], size))
        return "node", len(self.internal) - 1, height, size

    def child(self):
        sub = self.node()
        length = self.length()
        if length < 0:
            raise DataError(f"Negative Newick branch length {length!r}.")
        return sub, sub[2] + length


def parse_newick(text: str) -> MergeTree:
    """
    Reads a binary Newick tree back into a MergeTree. Leaves are numbered in
    order of appearance and merges are ordered by height (post-order on ties).
    """
    reader = _NewickReader(text)
    if not reader.text.endswith(";"):
        raise DataError("Malformed Newick: missing terminating ';'.")
    reader.node()
    reader.length()
    reader.expect(";")

    n = len(reader.leaves)
    order = sorted(range(len(reader.internal)), key=lambda k: reader.internal[k][0])
    ref = {}
    merges = []
    for rank, k in enumerate(order):
        height, left, right, size = reader.internal[k]
        ids = [c[1] if c[0] == "leaf" else ref[c[1]] for c in (left, right)]
        merges.append(Merge(ids[0], ids[1], height, size))
        ref[k] = n + rank
    return MergeTree(tuple(reader.leaves), tuple(merges))
