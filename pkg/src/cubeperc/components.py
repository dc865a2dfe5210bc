"""Component extraction and the statistics the percolation study measures.

Full labeling goes through union-find (union by size + path-halving
compression) over the open edges; local structure is probed by a capped BFS
exploration that consumes one random bit per queried edge.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .hypercube import CubeGraph, edge_endpoint_arrays
from .sampler import BitStream, EdgeSample, SampleKey


@dataclass
class ComponentLabeling:
    """Vertex -> component map plus the derived size statistics.

    Labels are canonical: every component is named by its smallest vertex id,
    so labelings are deterministic given the open set.  l2 is 0 when the
    graph has a single component.
    """

    d: int
    labels: np.ndarray
    sizes: dict[int, int]
    l1: int
    l2: int
    histogram: dict[int, int]
    n_components: int
    vertex_component_size: np.ndarray

    @property
    def n(self) -> int:
        return 1 << self.d

    def component_of(self, v: int) -> int:
        return int(self.labels[v])

    def size_of(self, v: int) -> int:
        return int(self.vertex_component_size[v])


def _union_edges(n: int, us, vs) -> list[int]:
    # tight loop: union by size with path halving on a flat parent list
    parent = list(range(n))
    size = [1] * n
    for a, b in zip(us, vs):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    return parent


def _resolve_roots(parent: list[int]) -> np.ndarray:
    # union by size keeps trees at logarithmic depth, so a few rounds of
    # pointer jumping reach the fixed point
    arr = np.asarray(parent, dtype=np.int64)
    while True:
        nxt = arr[arr]
        if np.array_equal(nxt, arr):
            return arr
        arr = nxt


def label_components(g: CubeGraph, open_edges) -> ComponentLabeling:
    """Label every vertex of Q^d with its component under the open edges.

    ``open_edges`` is an EdgeSample or a boolean mask over edge indices.
    """
    mask = open_edges.open_mask if isinstance(open_edges, EdgeSample) else np.asarray(open_edges, dtype=bool)
    if mask.shape != (g.m,):
        raise ValueError(f"open mask must have shape ({g.m},), got {mask.shape}")
    us, vs = edge_endpoint_arrays(g)
    parent = _union_edges(g.n, us[mask].tolist(), vs[mask].tolist())
    roots = _resolve_roots(parent)
    _, first_idx, inverse, counts = np.unique(
        roots, return_index=True, return_inverse=True, return_counts=True
    )
    # first occurrence index of a root IS the smallest vertex in its component
    labels = first_idx.astype(np.int64)[inverse]
    sizes = {int(r): int(c) for r, c in zip(first_idx, counts)}
    hist_sizes, hist_counts = np.unique(counts, return_counts=True)
    histogram = {int(s): int(c) for s, c in zip(hist_sizes, hist_counts)}
    l1 = int(counts.max())
    l2 = int(np.partition(counts, -2)[-2]) if counts.size >= 2 else 0
    return ComponentLabeling(
        d=g.d,
        labels=labels,
        sizes=sizes,
        l1=l1,
        l2=l2,
        histogram=histogram,
        n_components=int(counts.size),
        vertex_component_size=counts[inverse],
    )


@dataclass(frozen=True)
class ExplorationResult:
    """Outcome of one capped BFS exploration.

    ``open_found`` counts every queried edge that came back open, including
    edges closing cycles, so open_found >= size - 1 always, with equality
    whenever the revealed component is a tree.
    """

    start: int
    size: int
    cap_hit: bool
    edges_queried: int
    open_found: int


def explore_component(g: CubeGraph, v: int, stream, cap: int) -> ExplorationResult:
    """BFS from v driven by a bit source, stopping at ``cap`` discovered vertices.

    Each dequeued vertex queries its d incident edges in increasing direction
    order; an edge already determined during this exploration is skipped, so
    every edge consumes at most one bit.  ``stream`` is any object with a
    ``query(edge_index) -> 0|1`` method.
    """
    g.check_vertex(v)
    if cap < 1:
        raise ValueError(f"cap must be at least 1, got {cap}")
    d = g.d
    half = 1 << (d - 1)
    discovered = {v}
    queue = deque((v,))
    determined: dict[int, int] = {}
    edges_queried = 0
    open_found = 0
    cap_hit = len(discovered) >= cap
    query = stream.query
    while queue and not cap_hit:
        u = queue.popleft()
        for i in range(d):
            w = u ^ (1 << i)
            base = u if u < w else w
            eidx = i * half + (((base >> (i + 1)) << i) | (base & ((1 << i) - 1)))
            bit = determined.get(eidx)
            if bit is None:
                bit = query(eidx)
                determined[eidx] = bit
                edges_queried += 1
                open_found += bit
            if bit and w not in discovered:
                discovered.add(w)
                queue.append(w)
                if len(discovered) >= cap:
                    cap_hit = True
                    break
    return ExplorationResult(
        start=v,
        size=len(discovered),
        cap_hit=cap_hit,
        edges_queried=edges_queried,
        open_found=open_found,
    )


@dataclass(frozen=True)
class HitProbability:
    """Monte Carlo estimate of Pr[|C(v)| >= threshold]."""

    estimate: float
    stderr: float
    hits: int
    trials: int
    threshold: int
    p: float


def hit_probability(
    g: CubeGraph, p: float, threshold: int, trials: int, seed: int, start: int = 0
) -> HitProbability:
    """Fraction of independent explorations (cap = threshold) that hit the cap.

    The start vertex defaults to 0; vertex-transitivity of the cube makes the
    choice immaterial.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be at least 1, got {threshold}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    hits = 0
    for trial in range(trials):
        stream = BitStream(SampleKey(seed, trial, 0), p)
        result = explore_component(g, start, stream, cap=threshold)
        hits += result.cap_hit
    q = hits / trials
    return HitProbability(
        estimate=q,
        stderr=math.sqrt(q * (1.0 - q) / trials),
        hits=hits,
        trials=trials,
        threshold=threshold,
        p=float(p),
    )


@dataclass
class WSet:
    """Vertices whose component reaches the size threshold."""

    threshold: int
    members: np.ndarray
    density: float


def w_set(labeling: ComponentLabeling, threshold: int) -> WSet:
    """Membership and density of {v : |C(v)| >= threshold}."""
    if threshold < 1:
        raise ValueError(f"threshold must be at least 1, got {threshold}")
    members = labeling.vertex_component_size >= threshold
    return WSet(threshold=int(threshold), members=members, density=float(members.mean()))


def size_gap_count(labeling: ComponentLabeling, lo: int, hi: int) -> int:
    """Number of components with size in [lo, hi] (from the histogram)."""
    if lo > hi:
        raise ValueError(f"empty window: lo={lo} > hi={hi}")
    return sum(c for s, c in labeling.histogram.items() if lo <= s <= hi)


def _flip_bit(arr: np.ndarray, i: int) -> np.ndarray:
    # the permutation v -> v XOR 2^i of a flat per-vertex array
    return arr.reshape(-1, 2, 1 << i)[:, ::-1, :].reshape(arr.shape)


def distance_to_set(g: CubeGraph, members) -> tuple[np.ndarray, int]:
    """Multi-source BFS distances in the FULL cube from the member set.

    Returns (per-vertex distance array, maximum distance).  The percolated
    subgraph plays no role here; this measures how well the set spreads
    through Q^d itself.
    """
    mask = np.zeros(g.n, dtype=bool)
    if isinstance(members, np.ndarray) and members.dtype == bool:
        if members.shape != (g.n,):
            raise ValueError(f"member mask must have shape ({g.n},)")
        mask |= members
    else:
        ids = list(members)
        for v in ids:
            g.check_vertex(v)
        mask[ids] = True
    if not mask.any():
        raise ValueError("member set must be nonempty")
    dist = np.full(g.n, -1, dtype=np.int32)
    dist[mask] = 0
    frontier = mask.copy()
    level = 0
    while True:
        nbr = np.zeros(g.n, dtype=bool)
        for i in range(g.d):
            nbr |= _flip_bit(frontier, i)
        frontier = nbr & (dist < 0)
        if not frontier.any():
            break
        level += 1
        dist[frontier] = level
    return dist, int(dist.max())


def write_histogram_csv(labeling: ComponentLabeling, path) -> None:
    """Component-size histogram as CSV (size,count), sizes ascending."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "count"])
        for s in sorted(labeling.histogram):
            writer.writerow([s, labeling.histogram[s]])
