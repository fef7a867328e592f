"""Spatial preferential-attachment graphs on the unit torus.

Vertices arrive one per time step, are placed uniformly at random, and link
to every older vertex whose sphere of influence contains them. Two variants
of the sphere volume are supported:

* ``original``: (A1 * indeg(v) + A2) / t, using the realised in-degree,
  updated online as edges accumulate.
* ``modified``: A2 / (t^(1-A1) * i^A1), a deterministic function of the
  birth time i alone.

Both volumes are clamped at 1, which is read as "covers the whole torus".
Generation is available through a periodic grid index (near-linear, the
default) and through a brute-force O(n^2) reference; under the same seed
the two must produce identical edge sets, since the only randomness is the
position draw of each arriving vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .geometry import MetricConfig, radius_for_volume, torus_distances, _pnorm

__all__ = [
    "SpaParams",
    "SpaGraph",
    "sphere_volume_original",
    "sphere_volume_modified",
    "generate",
    "expected_in_degree_exact",
    "expected_in_degree_closed",
    "arrival_sphere_volumes",
]

VARIANTS = ("original", "modified")


@dataclass(frozen=True)
class SpaParams:
    """Generation parameters: size, attachment strengths, metric, variant."""

    n: int
    a1: float
    a2: float
    metric: MetricConfig = MetricConfig()
    variant: str = "modified"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.a1 < 1.0:
            raise ValueError(f"a1 must lie in (0,1), got {self.a1}")
        if self.a2 < 0.0:
            raise ValueError(f"a2 must be >= 0, got {self.a2}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def sphere_volume_original(in_deg, t, a1, a2):
    """Sphere-of-influence volume min{(a1*indeg + a2)/t, 1} at time t."""
    vol = np.minimum((a1 * np.asarray(in_deg, dtype=float) + a2) / t, 1.0)
    return float(vol) if vol.ndim == 0 else vol


def sphere_volume_modified(i, t, a1, a2):
    """Deterministic sphere volume min{a2 / (t^(1-a1) i^a1), 1} of vertex i at time t."""
    vol = np.minimum(a2 / (t ** (1.0 - a1) * np.asarray(i, dtype=float) ** a1), 1.0)
    return float(vol) if vol.ndim == 0 else vol


def expected_in_degree_exact(i: int, n: int, a1: float, a2: float) -> float:
    """Expected in-degree of vertex i in the modified model, as the exact sum.

    Sums the sphere volume of v_i at each later arrival k = i+1 .. n,
    clamping included. Empty for i = n.
    """
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    if i == n:
        return 0.0
    k = np.arange(i + 1, n + 1, dtype=float)
    return float(np.minimum(a2 / (k ** (1.0 - a1) * float(i) ** a1), 1.0).sum())


def expected_in_degree_closed(i, n, a1: float, a2: float):
    """Closed-form expected in-degree (a2/a1)((n/i)^a1 - 1) of the modified model.

    Differs from the exact sum by less than a2/a1 when no clamping occurs.
    """
    i = np.asarray(i, dtype=float)
    out = (a2 / a1) * ((n / i) ** a1 - 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass
class SpaGraph:
    """A generated graph: positions, directed edges (younger -> older), degrees.

    Vertices are 1-indexed by birth time; row 0 of the position and degree
    arrays is unused padding so ``positions[i]`` is the position of v_i.
    Edges are stored as (j, i) rows with j > i, in arrival order. Instances
    are immutable once generation completes.
    """

    params: SpaParams
    positions: np.ndarray  # (n+1, d) float, row 0 is NaN
    edges: np.ndarray  # (m, 2) int64 rows (j, i), j > i
    in_degree: np.ndarray  # (n+1,) int64, row 0 is 0
    _adjacency: list | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.positions.setflags(write=False)
        self.edges.setflags(write=False)
        self.in_degree.setflags(write=False)

    @property
    def n(self) -> int:
        return self.params.n

    def mean_in_degree(self) -> float:
        return float(self.in_degree[1:].mean())

    def undirected_neighbors(self) -> list:
        """Neighbour arrays of the undirected view, index 0 unused; cached."""
        if self._adjacency is None:
            nbrs: list[list[int]] = [[] for _ in range(self.n + 1)]
            for j, i in self.edges:
                nbrs[j].append(i)
                nbrs[i].append(j)
            self._adjacency = [np.array(sorted(b), dtype=np.int64) for b in nbrs]
        return self._adjacency

    def edge_lengths(self) -> np.ndarray:
        """Torus length of every directed edge, in storage order."""
        if len(self.edges) == 0:
            return np.zeros(0)
        return torus_distances(
            self.positions[self.edges[:, 0]], self.positions[self.edges[:, 1]], self.params.metric
        )

    def save(self, path) -> None:
        """Write the plain-text edge-list format (positions bit-exact)."""
        m = self.params.metric
        p_tok = "inf" if m.p == math.inf else str(int(m.p))
        lines = [
            f"spa v1 {self.params.variant} {self.params.a1!r} {self.params.a2!r} "
            f"{m.d} {p_tok} {self.params.n} {self.params.seed}"
        ]
        for i in range(1, self.n + 1):
            coords = " ".join(repr(float(c)) for c in self.positions[i])
            lines.append(f"{i} {coords}")
        for j, i in self.edges:
            lines.append(f"{j} {i}")
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="ascii")

    @classmethod
    def load(cls, path) -> "SpaGraph":
        """Read a graph written by :meth:`save`."""
        lines = Path(path).read_text(encoding="ascii").splitlines()
        if not lines or not lines[0].startswith("spa v1 "):
            raise ValueError(f"{path}: not a spa v1 graph file")
        tok = lines[0].split()
        if len(tok) != 9:
            raise ValueError(f"{path}: malformed header {lines[0]!r}")
        p = math.inf if tok[6] == "inf" else int(tok[6])
        params = SpaParams(
            n=int(tok[7]),
            a1=float(tok[3]),
            a2=float(tok[4]),
            metric=MetricConfig(d=int(tok[5]), p=p),
            variant=tok[2],
            seed=int(tok[8]),
        )
        n, d = params.n, params.metric.d
        positions = np.full((n + 1, d), np.nan)
        for line in lines[1 : n + 1]:
            parts = line.split()
            if len(parts) != d + 1:
                raise ValueError(f"{path}: malformed position line {line!r}")
            positions[int(parts[0])] = [float(c) for c in parts[1:]]
        edges = []
        for line in lines[n + 1 :]:
            j, i = line.split()
            edges.append((int(j), int(i)))
        edge_arr = np.array(edges, dtype=np.int64).reshape(len(edges), 2)
        in_degree = np.zeros(n + 1, dtype=np.int64)
        if len(edges):
            np.add.at(in_degree, edge_arr[:, 1], 1)
        return cls(params, positions, edge_arr, in_degree)


class _TorusGrid:
    """Periodic bucket grid with k cells per axis over [0,1)^d."""

    __slots__ = ("k", "d", "cells", "offsets")

    def __init__(self, k: int, d: int):
        self.k = k
        self.d = d
        self.cells: dict[tuple, list[int]] = {}
        self.offsets = list(product((-1, 0, 1), repeat=d))

    def key(self, x: np.ndarray) -> tuple:
        return tuple((int(c * self.k) % self.k) for c in x)

    def insert(self, i: int, x: np.ndarray) -> None:
        self.cells.setdefault(self.key(x), []).append(i)

    def candidates(self, x: np.ndarray) -> list:
        """Indices in the 3^d cells around x (deduplicated when k < 3)."""
        base = self.key(x)
        k = self.k
        out: list[int] = []
        seen = set()
        for off in self.offsets:
            cell = tuple((b + o) % k for b, o in zip(base, off))
            if cell in seen:
                continue
            seen.add(cell)
            bucket = self.cells.get(cell)
            if bucket:
                out.extend(bucket)
        return out


def generate(params: SpaParams, method: str = "grid") -> SpaGraph:
    """Generate a graph by sequential arrival; deterministic given the seed.

    ``method`` selects the spatial index: "grid" (default) or "bruteforce"
    (the O(n^2) reference oracle). Both consume randomness identically, so
    they must agree edge-for-edge under the same seed.
    """
    rng = np.random.default_rng(params.seed)
    n, d = params.n, params.metric.d
    positions = np.full((n + 1, d), np.nan)
    positions[1:] = rng.random((n, d))
    if method == "grid":
        edges = _link_grid(params, positions)
    elif method == "bruteforce":
        edges = _link_bruteforce(params, positions)
    else:
        raise ValueError(f"unknown generation method {method!r}")
    in_degree = np.zeros(n + 1, dtype=np.int64)
    if len(edges):
        np.add.at(in_degree, edges[:, 1], 1)
    return SpaGraph(params, positions, edges, in_degree)


def _hits(params: SpaParams, positions: np.ndarray, cand: np.ndarray, t: int,
          indeg: np.ndarray) -> np.ndarray:
    """Subset of candidate vertices whose sphere of influence contains v_t."""
    m = params.metric
    delta = np.abs(positions[cand] - positions[t])
    np.minimum(delta, 1.0 - delta, out=delta)
    dist = _pnorm(delta, m.p)
    if params.variant == "modified":
        vols = params.a2 / (t ** (1.0 - params.a1) * cand.astype(float) ** params.a1)
    else:
        vols = (params.a1 * indeg[cand] + params.a2) / t
    covered = vols >= 1.0
    radii = radius_for_volume(np.where(covered, 1.0, vols), m)
    return cand[covered | (dist <= radii)]


def _link_bruteforce(params: SpaParams, positions: np.ndarray) -> np.ndarray:
    n = params.n
    indeg = np.zeros(n + 1, dtype=np.int64)
    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for t in range(2, n + 1):
        hit = _hits(params, positions, np.arange(1, t, dtype=np.int64), t, indeg)
        if hit.size:
            indeg[hit] += 1
            src.append(np.full(hit.size, t, dtype=np.int64))
            dst.append(hit)
    return _stack_edges(src, dst)


def _link_grid(params: SpaParams, positions: np.ndarray) -> np.ndarray:
    n, d = params.n, params.metric.d
    a1, a2 = params.a1, params.a2
    modified = params.variant == "modified"
    k_cap = 4 * int(math.ceil(n ** (1.0 / d))) + 4

    def cells_per_axis(t: int, max_indeg: int) -> int:
        # cell side must stay >= the largest containment radius at time t;
        # for the modified variant that is vertex 1, otherwise bound via the
        # current maximum in-degree
        vol = a2 / t ** (1.0 - a1) if modified else (a1 * max_indeg + a2) / t
        if vol <= 0.0:
            return k_cap
        r = radius_for_volume(min(vol, 1.0), params.metric)
        if r <= 0.0:
            return k_cap
        return max(1, min(int(1.0 / r), k_cap))

    grid = _TorusGrid(1, d)
    grid.insert(1, positions[1])
    indeg = np.zeros(n + 1, dtype=np.int64)
    max_indeg = 0
    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for t in range(2, n + 1):
        k_want = cells_per_axis(t, max_indeg)
        # rebuild when the radius outgrows the cells (must) or halves (perf)
        if k_want < grid.k or k_want >= 2 * grid.k:
            grid = _TorusGrid(k_want, d)
            for i in range(1, t):
                grid.insert(i, positions[i])
        cand = grid.candidates(positions[t])
        if cand:
            hit = _hits(params, positions, np.array(cand, dtype=np.int64), t, indeg)
            if hit.size:
                hit = np.sort(hit)
                indeg[hit] += 1
                if not modified:
                    max_indeg = max(max_indeg, int(indeg[hit].max()))
                src.append(np.full(hit.size, t, dtype=np.int64))
                dst.append(hit)
        grid.insert(t, positions[t])
    return _stack_edges(src, dst)


def _stack_edges(src: list, dst: list) -> np.ndarray:
    if not src:
        return np.zeros((0, 2), dtype=np.int64)
    return np.column_stack([np.concatenate(src), np.concatenate(dst)])


def arrival_sphere_volumes(graph: SpaGraph) -> np.ndarray:
    """Sphere volume of each edge's head vertex at the edge's arrival time.

    Replays the in-degree evolution chronologically, so it reproduces the
    volumes the generator actually tested against (both variants).
    """
    params = graph.params
    edges = graph.edges
    if len(edges) == 0:
        return np.zeros(0)
    if params.variant == "modified":
        return sphere_volume_modified(edges[:, 1], edges[:, 0].astype(float), params.a1, params.a2)
    vols = np.empty(len(edges))
    indeg = np.zeros(graph.n + 1, dtype=np.int64)
    row = 0
    while row < len(edges):
        t = edges[row, 0]
        stop = row
        while stop < len(edges) and edges[stop, 0] == t:
            stop += 1
        heads = edges[row:stop, 1]
        vols[row:stop] = sphere_volume_original(indeg[heads], float(t), params.a1, params.a2)
        indeg[heads] += 1
        row = stop
    return vols
